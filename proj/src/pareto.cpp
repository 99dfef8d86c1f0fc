#include "clsc/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace clsc {

using json = nlohmann::ordered_json;

double PayoffTable::z2_min() const {
    return std::min({rows[0].z2, rows[1].z2, rows[2].z2});
}
double PayoffTable::z2_max() const {
    return std::max({rows[0].z2, rows[1].z2, rows[2].z2});
}
double PayoffTable::z3_min() const {
    return std::min({rows[0].z3, rows[1].z3, rows[2].z3});
}
double PayoffTable::z3_max() const {
    return std::max({rows[0].z3, rows[1].z3, rows[2].z3});
}

namespace {

const char* objective_name(Objective o) {
    switch (o) {
        case Objective::Z1: return "Z1";
        case Objective::Z2: return "Z2";
        case Objective::Z3: return "Z3";
    }
    return "?";
}

}  // namespace

PayoffTable payoff_table(const Instance& inst, const DistanceMatrix& d_hs,
                         const DistanceMatrix& d_ss, const SolveOptions& opts) {
    PayoffTable t;
    const Objective objs[3] = {Objective::Z1, Objective::Z2, Objective::Z3};
    for (int i = 0; i < 3; ++i) {
        auto [problem, layout] = build_circular_model(inst, d_hs, d_ss, objs[i]);
        MilpResult res = solve_milp(problem, opts);
        if (res.status != MilpStatus::Optimal)
            throw InfeasibleObjective(objs[i], std::string("payoff table: solving for ") +
                                                   objective_name(objs[i]) +
                                                   " did not reach an optimum");
        t.rows[i] = evaluate_solution(inst, d_hs, d_ss, layout, res.values);
        t.solutions[i] = {res.values, t.rows[i]};
    }
    return t;
}

SweepResult epsilon_sweep(const Instance& inst, const DistanceMatrix& d_hs,
                          const DistanceMatrix& d_ss, int n2, int n3,
                          const SolveOptions& opts) {
    if (n2 < 1 || n3 < 1) throw std::invalid_argument("epsilon_sweep: grid counts must be >= 1");
    const PayoffTable table = payoff_table(inst, d_hs, d_ss, opts);

    auto grid = [](double lo, double hi, int n, int idx) {
        if (n == 1) return lo;
        return lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(n - 1);
    };

    SweepResult out;
    for (int a = 0; a < n2; ++a) {
        const double e2 = grid(table.z2_min(), table.z2_max(), n2, a);
        for (int b = 0; b < n3; ++b) {
            const double e3 = grid(table.z3_min(), table.z3_max(), n3, b);
            auto [problem, layout] = build_circular_model(inst, d_hs, d_ss, Objective::Z1, e2, e3);
            MilpResult res = solve_milp(problem, opts);
            if (res.status != MilpStatus::Optimal) {
                out.infeasible.emplace_back(e2, e3);
                continue;
            }
            ParetoPoint pt;
            pt.eps2 = e2;
            pt.eps3 = e3;
            pt.triple = evaluate_solution(inst, d_hs, d_ss, layout, res.values);
            pt.open_collection = open_collection_ids(inst, layout, res.values);
            pt.open_reprocessing = open_reprocessing_ids(inst, layout, res.values);
            pt.solution = {res.values, pt.triple};
            out.points.push_back(std::move(pt));
        }
    }
    return out;
}

namespace {

bool strictly_dominates(const ObjectiveTriple& a, const ObjectiveTriple& b) {
    return a.z1 >= b.z1 && a.z2 >= b.z2 && a.z3 >= b.z3 &&
           (a.z1 > b.z1 || a.z2 > b.z2 || a.z3 > b.z3);
}

}  // namespace

std::vector<ParetoPoint> filter_nondominated(const std::vector<ParetoPoint>& points) {
    std::vector<ParetoPoint> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i != j && strictly_dominates(points[j].triple, points[i].triple)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(points[i]);
    }
    return out;
}

namespace {

std::string joined_sorted(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ";";
        s += ids[i];
    }
    return s;
}

}  // namespace

void export_front_csv(const std::vector<ParetoPoint>& points, std::ostream& out) {
    out << "eps2,eps3,z1,z2,z3,open_collection,open_reprocessing\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& p : points) {
        out << p.eps2 << "," << p.eps3 << "," << p.triple.z1 << "," << p.triple.z2 << ","
            << p.triple.z3 << "," << joined_sorted(p.open_collection) << ","
            << joined_sorted(p.open_reprocessing) << "\n";
    }
}

void export_front_json(const std::vector<ParetoPoint>& points, std::ostream& out) {
    json doc;
    doc["points"] = json::array();
    for (const auto& p : points) {
        json e;
        e["eps2"] = p.eps2;
        e["eps3"] = p.eps3;
        e["z1"] = p.triple.z1;
        e["z2"] = p.triple.z2;
        e["z3"] = p.triple.z3;
        e["open_collection"] = p.open_collection;
        e["open_reprocessing"] = p.open_reprocessing;
        e["values"] = p.solution.values;
        doc["points"].push_back(std::move(e));
    }
    out << doc.dump(2) << "\n";
}

std::vector<ParetoPoint> import_front_json(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("front parse error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
        throw ParseError("front document must contain a points array");
    std::vector<ParetoPoint> points;
    for (const auto& e : doc["points"]) {
        ParetoPoint p;
        p.eps2 = e.at("eps2").get<double>();
        p.eps3 = e.at("eps3").get<double>();
        p.triple = {e.at("z1").get<double>(), e.at("z2").get<double>(), e.at("z3").get<double>()};
        p.open_collection = e.at("open_collection").get<std::vector<std::string>>();
        p.open_reprocessing = e.at("open_reprocessing").get<std::vector<std::string>>();
        p.solution.values = e.at("values").get<std::vector<double>>();
        p.solution.objectives = p.triple;
        points.push_back(std::move(p));
    }
    return points;
}

}  // namespace clsc
