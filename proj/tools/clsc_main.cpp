#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "clsc/baseline.hpp"
#include "clsc/bnb.hpp"
#include "clsc/formulation.hpp"
#include "clsc/geo.hpp"
#include "clsc/instance.hpp"
#include "clsc/milp.hpp"
#include "clsc/pareto.hpp"

#include "json.hpp"

namespace {

// exit codes: 0 ok, 1 I/O, 2 bad arguments, 3 infeasible, 4 limit hit
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitArgs = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitLimit = 4;

void write_matrix_csv(const clsc::DistanceMatrix& m, std::ostream& out) {
    out << std::fixed << std::setprecision(6);
    out << "id";
    for (const auto& id : m.to_ids) out << "," << id;
    out << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << m.from_ids[i];
        for (std::size_t j = 0; j < m.cols(); ++j) out << "," << m.km[i][j];
        out << "\n";
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open output file: " + path);
    return out;
}

clsc::Objective parse_objective(const std::string& s) {
    if (s == "Z1" || s == "z1") return clsc::Objective::Z1;
    if (s == "Z2" || s == "z2") return clsc::Objective::Z2;
    if (s == "Z3" || s == "z3") return clsc::Objective::Z3;
    throw CLI::ValidationError("objective must be Z1, Z2 or Z3");
}

void write_point_json(std::ostream& out, const std::string& status,
                      const std::vector<clsc::ParetoPoint>& points,
                      const clsc::FlowTotals* flows) {
    nlohmann::ordered_json doc;
    doc["status"] = status;
    if (!points.empty()) {
        doc["objective"] = {{"z1", points[0].triple.z1},
                            {"z2", points[0].triple.z2},
                            {"z3", points[0].triple.z3}};
        doc["open_collection"] = points[0].open_collection;
        doc["open_reprocessing"] = points[0].open_reprocessing;
    }
    if (flows) {
        doc["flows"] = {{"collected", flows->collected},
                        {"reprocessed", flows->reprocessed},
                        {"disposed", flows->disposed}};
    }
    std::ostringstream pts;
    clsc::export_front_json(points, pts);
    doc["points"] = nlohmann::ordered_json::parse(pts.str())["points"];
    out << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-loop PPE mask supply-chain network optimizer"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a seeded synthetic instance");
    std::uint64_t seed = 1;
    std::size_t n_hosp = 25, n_sites = 25, n_disp = 3;
    std::string gen_out;
    double g_alpha = -1, g_beta = -1, g_price = -1, g_budget = -1;
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--hospitals", n_hosp, "number of hospitals");
    gen->add_option("--sites", n_sites, "number of candidate sites");
    gen->add_option("--disposal", n_disp, "number of disposal sites");
    gen->add_option("--alpha", g_alpha, "collection rate override");
    gen->add_option("--beta", g_beta, "reprocessable share override");
    gen->add_option("--price", g_price, "mask price override (CAD)");
    gen->add_option("--budget", g_budget, "setup budget override (CAD)");
    gen->add_option("--out", gen_out, "output instance file")->required();

    // distances
    auto* dist = app.add_subcommand("distances", "emit distance matrices as CSV");
    std::string dist_in, dist_out;
    dist->add_option("--instance", dist_in, "instance file")->required();
    dist->add_option("--out", dist_out, "output prefix; writes <out>_hospital_site.csv and <out>_site_site.csv")
        ->required();

    // solve
    auto* solve = app.add_subcommand("solve", "single-objective MILP solve");
    std::string solve_in, solve_out, solve_obj = "Z1", solve_lp_dump;
    std::optional<double> eps2, eps3;
    double eps2_v = 0, eps3_v = 0;
    auto* o2 = solve->add_option("--eps2", eps2_v, "lower bound on Z2 (kg CO2)");
    auto* o3 = solve->add_option("--eps3", eps3_v, "lower bound on Z3 (jobs)");
    solve->add_option("--instance", solve_in, "instance file")->required();
    solve->add_option("--objective", solve_obj, "Z1, Z2 or Z3");
    solve->add_option("--out", solve_out, "solution report file")->required();
    solve->add_option("--dump-lp", solve_lp_dump, "also dump the model in LP text format");

    // pareto
    auto* par = app.add_subcommand("pareto", "epsilon-constraint sweep");
    std::string par_in, par_csv, par_json;
    int n2 = 4, n3 = 4;
    par->add_option("--instance", par_in, "instance file")->required();
    par->add_option("--n2", n2, "grid points along Z2");
    par->add_option("--n3", n3, "grid points along Z3");
    par->add_option("--out-csv", par_csv, "front CSV output")->required();
    par->add_option("--out-json", par_json, "front structured output");

    // compare
    auto* cmp = app.add_subcommand("compare", "circular vs linear-economy report");
    std::string cmp_in, cmp_point, cmp_out;
    long jobs_low = 20, jobs_high = 30;
    cmp->add_option("--instance", cmp_in, "instance file")->required();
    cmp->add_option("--point", cmp_point, "solution/front point file (first point used)")
        ->required();
    cmp->add_option("--out", cmp_out, "report JSON output")->required();
    cmp->add_option("--jobs-low", jobs_low, "linear-economy jobs, low end");
    cmp->add_option("--jobs-high", jobs_high, "linear-economy jobs, high end");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitArgs;
    }

    try {
        if (*gen) {
            clsc::RangeConfig ranges;
            if (g_alpha >= 0) ranges.params.alpha = g_alpha;
            if (g_beta >= 0) ranges.params.beta = g_beta;
            if (g_price >= 0) ranges.params.price = g_price;
            if (g_budget >= 0) ranges.params.budget = g_budget;
            const clsc::Instance inst =
                clsc::generate_synthetic(seed, n_hosp, n_sites, n_disp, ranges);
            clsc::save_instance_file(inst, gen_out);
            return kExitOk;
        }
        if (*dist) {
            const clsc::Instance inst = clsc::load_instance_file(dist_in);
            auto [d_hs, d_ss] = clsc::instance_distances(inst);
            auto out1 = open_out(dist_out + "_hospital_site.csv");
            write_matrix_csv(d_hs, out1);
            auto out2 = open_out(dist_out + "_site_site.csv");
            write_matrix_csv(d_ss, out2);
            return kExitOk;
        }
        if (*solve) {
            if (*o2) eps2 = eps2_v;
            if (*o3) eps3 = eps3_v;
            const clsc::Instance inst = clsc::load_instance_file(solve_in);
            auto [d_hs, d_ss] = clsc::instance_distances(inst);
            auto [problem, layout] =
                clsc::build_circular_model(inst, d_hs, d_ss, parse_objective(solve_obj), eps2,
                                           eps3);
            if (!solve_lp_dump.empty()) {
                auto lp = open_out(solve_lp_dump);
                clsc::write_lp_format(problem, lp);
            }
            const clsc::MilpResult res = clsc::solve_milp(problem);
            if (res.status == clsc::MilpStatus::Infeasible) {
                auto out = open_out(solve_out);
                write_point_json(out, "Infeasible", {}, nullptr);
                return kExitInfeasible;
            }
            clsc::ParetoPoint pt;
            pt.triple = clsc::evaluate_solution(inst, d_hs, d_ss, layout, res.values);
            pt.eps2 = eps2.value_or(pt.triple.z2);
            pt.eps3 = eps3.value_or(pt.triple.z3);
            pt.open_collection = clsc::open_collection_ids(inst, layout, res.values);
            pt.open_reprocessing = clsc::open_reprocessing_ids(inst, layout, res.values);
            pt.solution = {res.values, pt.triple};
            const clsc::FlowTotals ft = clsc::flow_totals(layout, res.values);
            const bool limit = res.status != clsc::MilpStatus::Optimal;
            auto out = open_out(solve_out);
            write_point_json(out, limit ? "Limit" : "Optimal", {pt}, &ft);
            return limit ? kExitLimit : kExitOk;
        }
        if (*par) {
            const clsc::Instance inst = clsc::load_instance_file(par_in);
            auto [d_hs, d_ss] = clsc::instance_distances(inst);
            const clsc::SweepResult sweep = clsc::epsilon_sweep(inst, d_hs, d_ss, n2, n3);
            const auto front = clsc::filter_nondominated(sweep.points);
            auto csv = open_out(par_csv);
            clsc::export_front_csv(front, csv);
            if (!par_json.empty()) {
                auto js = open_out(par_json);
                clsc::export_front_json(front, js);
            }
            return kExitOk;
        }
        if (*cmp) {
            const clsc::Instance inst = clsc::load_instance_file(cmp_in);
            auto [d_hs, d_ss] = clsc::instance_distances(inst);
            std::ifstream in(cmp_point);
            if (!in) throw std::ios_base::failure("cannot open point file: " + cmp_point);
            const auto points = clsc::import_front_json(in);
            if (points.empty()) throw clsc::ParseError("point file contains no points");
            const clsc::ComparisonReport rep =
                clsc::compare(inst, d_hs, d_ss, points[0], {jobs_low, jobs_high});
            clsc::render_report(rep, std::cout);
            auto out = open_out(cmp_out);
            clsc::report_to_json(rep, out);
            return kExitOk;
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgs;
    } catch (const clsc::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgs;
    } catch (const clsc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgs;
    } catch (const clsc::RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgs;
    } catch (const clsc::InfeasibleObjective& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitArgs;
}
