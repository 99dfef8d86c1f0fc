#include "clsc/formulation.hpp"

#include <cmath>
#include <stdexcept>

namespace clsc {

std::pair<DistanceMatrix, DistanceMatrix> instance_distances(const Instance& inst) {
    std::vector<std::string> hosp_ids, site_ids;
    std::vector<LatLon> hosp_pts, site_pts;
    for (const auto& h : inst.hospitals) {
        hosp_ids.push_back(h.id);
        hosp_pts.push_back({h.lat, h.lon});
    }
    for (const auto& s : inst.sites) {
        site_ids.push_back(s.id);
        site_pts.push_back({s.lat, s.lon});
    }
    if (inst.distance_override) {
        DistanceMatrix hs{hosp_ids, site_ids, inst.distance_override->hospital_site};
        DistanceMatrix ss{site_ids, site_ids, inst.distance_override->site_site};
        return {std::move(hs), std::move(ss)};
    }
    return {distance_matrix(hosp_ids, hosp_pts, site_ids, site_pts),
            distance_matrix(site_ids, site_pts, site_ids, site_pts)};
}

VariableLayout layout_for(const Instance& inst) {
    VariableLayout L;
    L.n_hospitals = static_cast<int>(inst.hospitals.size());
    L.n_sites = static_cast<int>(inst.sites.size());
    L.n_disposal = static_cast<int>(inst.disposal_sites.size());
    const int I = L.n_hospitals, S = L.n_sites, M = L.n_disposal;
    L.x0 = 0;
    L.w0 = L.x0 + S;
    L.y0 = L.w0 + S;
    L.z0 = L.y0 + I * S;
    L.f0 = L.z0 + S * S;
    L.g0 = L.f0 + I * S;
    L.q0 = L.g0 + S * S;
    L.r0 = L.q0 + S;
    L.d0 = L.r0 + S;
    L.n_vars = L.d0 + M;
    return L;
}

namespace {

void check_dims(const Instance& inst, const DistanceMatrix& d_hs, const DistanceMatrix& d_ss) {
    if (d_hs.rows() != inst.hospitals.size() || d_hs.cols() != inst.sites.size())
        throw std::invalid_argument("hospital-site distance matrix does not match the instance");
    if (d_ss.rows() != inst.sites.size() || d_ss.cols() != inst.sites.size())
        throw std::invalid_argument("site-site distance matrix does not match the instance");
}

}  // namespace

std::vector<LinTerm> objective_terms(const Instance& inst, const DistanceMatrix& d_hs,
                                     const DistanceMatrix& d_ss, const VariableLayout& L,
                                     Objective which) {
    const int I = L.n_hospitals, S = L.n_sites, M = L.n_disposal;
    const auto& gp = inst.params;
    std::vector<LinTerm> t;
    switch (which) {
        case Objective::Z1:
            // revenue on reprocessed masks minus fixed, transport, operating
            // and disposal costs
            for (int k = 0; k < S; ++k)
                t.push_back({L.r(k), gp.price - inst.sites[k].unit_cost_reprocessing});
            for (int j = 0; j < S; ++j) {
                t.push_back({L.x(j), -inst.sites[j].fixed_cost_collection});
                t.push_back({L.w(j), -inst.sites[j].fixed_cost_reprocessing});
                t.push_back({L.q(j), -inst.sites[j].unit_cost_collection});
            }
            for (int i = 0; i < I; ++i)
                for (int j = 0; j < S; ++j)
                    t.push_back({L.y(i, j), -gp.transport_cost_per_km * d_hs.at(i, j)});
            for (int j = 0; j < S; ++j)
                for (int k = 0; k < S; ++k)
                    t.push_back({L.z(j, k), -gp.transport_cost_per_km * d_ss.at(j, k)});
            for (int m = 0; m < M; ++m)
                t.push_back({L.d(m), -inst.disposal_sites[m].unit_cost});
            break;
        case Objective::Z2:
            // production footprint recovered on reprocessed masks minus the
            // footprint generated by the reverse network
            for (int k = 0; k < S; ++k)
                t.push_back(
                    {L.r(k), gp.production_emission - inst.sites[k].unit_emission_reprocessing});
            for (int j = 0; j < S; ++j) {
                t.push_back({L.x(j), -inst.sites[j].fixed_emission_collection});
                t.push_back({L.w(j), -inst.sites[j].fixed_emission_reprocessing});
                t.push_back({L.q(j), -inst.sites[j].unit_emission_collection});
            }
            for (int i = 0; i < I; ++i)
                for (int j = 0; j < S; ++j)
                    t.push_back({L.y(i, j), -gp.truck_emission_per_km * d_hs.at(i, j)});
            for (int j = 0; j < S; ++j)
                for (int k = 0; k < S; ++k)
                    t.push_back({L.z(j, k), -gp.truck_emission_per_km * d_ss.at(j, k)});
            for (int m = 0; m < M; ++m)
                t.push_back({L.d(m), -inst.disposal_sites[m].unit_emission});
            break;
        case Objective::Z3:
            for (int j = 0; j < S; ++j) {
                t.push_back({L.x(j), static_cast<double>(inst.sites[j].jobs_collection)});
                t.push_back({L.w(j), static_cast<double>(inst.sites[j].jobs_reprocessing)});
            }
            break;
    }
    return t;
}

BuildResult build_circular_model(const Instance& inst, const DistanceMatrix& d_hs,
                                 const DistanceMatrix& d_ss, Objective objective,
                                 std::optional<double> eps2, std::optional<double> eps3) {
    check_dims(inst, d_hs, d_ss);
    if (eps2 && !std::isfinite(*eps2))
        throw std::invalid_argument("eps2 bound must be finite");
    if (eps3 && !std::isfinite(*eps3))
        throw std::invalid_argument("eps3 bound must be finite");

    const VariableLayout L = layout_for(inst);
    const int I = L.n_hospitals, S = L.n_sites, M = L.n_disposal;
    const auto& gp = inst.params;
    const double total_usage = inst.total_usage();
    const double collected_total = gp.alpha * total_usage;
    const double big_m_g = gp.beta * collected_total;  // cap on any g_jk

    MilpProblem p;
    for (int j = 0; j < S; ++j) p.add_var("x[" + inst.sites[j].id + "]", 0.0, 1.0, true);
    for (int k = 0; k < S; ++k) p.add_var("w[" + inst.sites[k].id + "]", 0.0, 1.0, true);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < S; ++j)
            p.add_var("y[" + inst.hospitals[i].id + "," + inst.sites[j].id + "]", 0.0, 1.0, true);
    for (int j = 0; j < S; ++j)
        for (int k = 0; k < S; ++k)
            p.add_var("z[" + inst.sites[j].id + "," + inst.sites[k].id + "]", 0.0, 1.0, true);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < S; ++j)
            p.add_var("f[" + inst.hospitals[i].id + "," + inst.sites[j].id + "]", 0.0,
                      gp.alpha * inst.hospitals[i].usage, false);
    for (int j = 0; j < S; ++j)
        for (int k = 0; k < S; ++k)
            p.add_var("g[" + inst.sites[j].id + "," + inst.sites[k].id + "]", 0.0, big_m_g,
                      false);
    for (int j = 0; j < S; ++j)
        p.add_var("q[" + inst.sites[j].id + "]", 0.0, collected_total, false);
    for (int k = 0; k < S; ++k)
        p.add_var("r[" + inst.sites[k].id + "]", 0.0, big_m_g, false);
    for (int m = 0; m < M; ++m)
        p.add_var("d[" + inst.disposal_sites[m].id + "]", 0.0, collected_total, false);

    p.obj_sense = ObjSense::Maximize;
    p.objective = objective_terms(inst, d_hs, d_ss, L, objective);

    // assignment linking
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < S; ++j)
            p.add_constraint("link_y[" + inst.hospitals[i].id + "," + inst.sites[j].id + "]",
                             {{L.y(i, j), 1.0}, {L.x(j), -1.0}}, Sense::LE, 0.0);
    for (int j = 0; j < S; ++j)
        for (int k = 0; k < S; ++k)
            p.add_constraint("link_z[" + inst.sites[j].id + "," + inst.sites[k].id + "]",
                             {{L.z(j, k), 1.0}, {L.w(k), -1.0}}, Sense::LE, 0.0);
    // every hospital served by at least one collection centre
    for (int i = 0; i < I; ++i) {
        std::vector<LinTerm> t;
        for (int j = 0; j < S; ++j) t.push_back({L.y(i, j), 1.0});
        p.add_constraint("assign_hospital[" + inst.hospitals[i].id + "]", std::move(t), Sense::GE,
                         1.0);
    }
    // every open collection centre assigned to a reprocessing centre
    for (int j = 0; j < S; ++j) {
        std::vector<LinTerm> t;
        for (int k = 0; k < S; ++k) t.push_back({L.z(j, k), 1.0});
        t.push_back({L.x(j), -1.0});
        p.add_constraint("assign_site[" + inst.sites[j].id + "]", std::move(t), Sense::GE, 0.0);
    }
    // budget on fixed setup costs
    {
        std::vector<LinTerm> t;
        for (int j = 0; j < S; ++j) {
            t.push_back({L.x(j), inst.sites[j].fixed_cost_collection});
            t.push_back({L.w(j), inst.sites[j].fixed_cost_reprocessing});
        }
        p.add_constraint("budget", std::move(t), Sense::LE, gp.budget);
    }
    // collection: alpha share of each hospital's usage enters the network
    for (int i = 0; i < I; ++i) {
        std::vector<LinTerm> t;
        for (int j = 0; j < S; ++j) t.push_back({L.f(i, j), 1.0});
        p.add_constraint("collect[" + inst.hospitals[i].id + "]", std::move(t), Sense::EQ,
                         gp.alpha * inst.hospitals[i].usage);
    }
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < S; ++j)
            p.add_constraint("cap_f[" + inst.hospitals[i].id + "," + inst.sites[j].id + "]",
                             {{L.f(i, j), 1.0}, {L.y(i, j), -gp.alpha * inst.hospitals[i].usage}},
                             Sense::LE, 0.0);
    for (int j = 0; j < S; ++j) {
        std::vector<LinTerm> t{{L.q(j), 1.0}};
        for (int i = 0; i < I; ++i) t.push_back({L.f(i, j), -1.0});
        p.add_constraint("q_def[" + inst.sites[j].id + "]", std::move(t), Sense::EQ, 0.0);
    }
    // reprocessing: beta share of each collection centre's intake moves on
    for (int j = 0; j < S; ++j) {
        std::vector<LinTerm> t;
        for (int k = 0; k < S; ++k) t.push_back({L.g(j, k), 1.0});
        t.push_back({L.q(j), -gp.beta});
        p.add_constraint("reprocess[" + inst.sites[j].id + "]", std::move(t), Sense::EQ, 0.0);
    }
    for (int j = 0; j < S; ++j)
        for (int k = 0; k < S; ++k)
            p.add_constraint("cap_g[" + inst.sites[j].id + "," + inst.sites[k].id + "]",
                             {{L.g(j, k), 1.0}, {L.z(j, k), -big_m_g}}, Sense::LE, 0.0);
    for (int k = 0; k < S; ++k) {
        std::vector<LinTerm> t{{L.r(k), 1.0}};
        for (int j = 0; j < S; ++j) t.push_back({L.g(j, k), -1.0});
        p.add_constraint("r_def[" + inst.sites[k].id + "]", std::move(t), Sense::EQ, 0.0);
    }
    // non-reprocessable remainder goes to disposal
    {
        std::vector<LinTerm> t;
        for (int m = 0; m < M; ++m) t.push_back({L.d(m), 1.0});
        for (int j = 0; j < S; ++j) t.push_back({L.q(j), -1.0});
        for (int k = 0; k < S; ++k) t.push_back({L.r(k), 1.0});
        p.add_constraint("disposal_balance", std::move(t), Sense::EQ, 0.0);
    }
    if (eps2)
        p.add_constraint("eps2", objective_terms(inst, d_hs, d_ss, L, Objective::Z2), Sense::GE,
                         *eps2);
    if (eps3)
        p.add_constraint("eps3", objective_terms(inst, d_hs, d_ss, L, Objective::Z3), Sense::GE,
                         *eps3);

    return {std::move(p), L};
}

ObjectiveTriple evaluate_solution(const Instance& inst, const DistanceMatrix& d_hs,
                                  const DistanceMatrix& d_ss, const VariableLayout& L,
                                  const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != L.n_vars)
        throw std::invalid_argument("evaluate_solution: value vector does not match layout");
    check_dims(inst, d_hs, d_ss);
    const int I = L.n_hospitals, S = L.n_sites, M = L.n_disposal;
    const auto& gp = inst.params;

    double revenue = 0.0, fixed_costs = 0.0, variable_costs = 0.0;
    double recovery = 0.0, emissions = 0.0;
    double jobs = 0.0;
    for (int k = 0; k < S; ++k) {
        revenue += gp.price * values[L.r(k)];
        recovery += gp.production_emission * values[L.r(k)];
        variable_costs += inst.sites[k].unit_cost_reprocessing * values[L.r(k)];
        emissions += inst.sites[k].unit_emission_reprocessing * values[L.r(k)];
    }
    for (int j = 0; j < S; ++j) {
        fixed_costs += inst.sites[j].fixed_cost_collection * values[L.x(j)] +
                       inst.sites[j].fixed_cost_reprocessing * values[L.w(j)];
        emissions += inst.sites[j].fixed_emission_collection * values[L.x(j)] +
                     inst.sites[j].fixed_emission_reprocessing * values[L.w(j)];
        variable_costs += inst.sites[j].unit_cost_collection * values[L.q(j)];
        emissions += inst.sites[j].unit_emission_collection * values[L.q(j)];
        jobs += inst.sites[j].jobs_collection * values[L.x(j)] +
                inst.sites[j].jobs_reprocessing * values[L.w(j)];
    }
    for (int i = 0; i < I; ++i) {
        for (int j = 0; j < S; ++j) {
            variable_costs += gp.transport_cost_per_km * d_hs.at(i, j) * values[L.y(i, j)];
            emissions += gp.truck_emission_per_km * d_hs.at(i, j) * values[L.y(i, j)];
        }
    }
    for (int j = 0; j < S; ++j) {
        for (int k = 0; k < S; ++k) {
            variable_costs += gp.transport_cost_per_km * d_ss.at(j, k) * values[L.z(j, k)];
            emissions += gp.truck_emission_per_km * d_ss.at(j, k) * values[L.z(j, k)];
        }
    }
    for (int m = 0; m < M; ++m) {
        variable_costs += inst.disposal_sites[m].unit_cost * values[L.d(m)];
        emissions += inst.disposal_sites[m].unit_emission * values[L.d(m)];
    }
    return {revenue - fixed_costs - variable_costs, recovery - emissions, jobs};
}

namespace {

void check_residual(std::vector<FeasViolation>& out, const std::string& family,
                    const std::string& where, double lhs, Sense sense, double rhs, double tol,
                    double scale) {
    double resid = 0.0;
    switch (sense) {
        case Sense::LE: resid = lhs - rhs; break;
        case Sense::GE: resid = rhs - lhs; break;
        case Sense::EQ: resid = std::abs(lhs - rhs); break;
    }
    if (resid > tol * std::max(1.0, scale)) out.push_back({family, where, resid});
}

}  // namespace

std::vector<FeasViolation> check_feasibility(const Instance& inst, const DistanceMatrix& d_hs,
                                             const DistanceMatrix& d_ss, const VariableLayout& L,
                                             const std::vector<double>& values, double tol) {
    if (tol <= 0) throw std::invalid_argument("check_feasibility: tol must be positive");
    if (static_cast<int>(values.size()) != L.n_vars)
        throw std::invalid_argument("check_feasibility: value vector does not match layout");
    check_dims(inst, d_hs, d_ss);
    const int I = L.n_hospitals, S = L.n_sites, M = L.n_disposal;
    const auto& gp = inst.params;
    std::vector<FeasViolation> out;

    for (int i = 0; i < I; ++i)
        for (int j = 0; j < S; ++j)
            check_residual(out, "link_y", inst.hospitals[i].id + "," + inst.sites[j].id,
                           values[L.y(i, j)] - values[L.x(j)], Sense::LE, 0.0, tol, 1.0);
    for (int j = 0; j < S; ++j)
        for (int k = 0; k < S; ++k)
            check_residual(out, "link_z", inst.sites[j].id + "," + inst.sites[k].id,
                           values[L.z(j, k)] - values[L.w(k)], Sense::LE, 0.0, tol, 1.0);
    for (int i = 0; i < I; ++i) {
        double s = 0.0;
        for (int j = 0; j < S; ++j) s += values[L.y(i, j)];
        check_residual(out, "assign_hospital", inst.hospitals[i].id, s, Sense::GE, 1.0, tol, 1.0);
    }
    for (int j = 0; j < S; ++j) {
        double s = 0.0;
        for (int k = 0; k < S; ++k) s += values[L.z(j, k)];
        check_residual(out, "assign_site", inst.sites[j].id, s - values[L.x(j)], Sense::GE, 0.0,
                       tol, 1.0);
    }
    {
        double s = 0.0;
        for (int j = 0; j < S; ++j)
            s += inst.sites[j].fixed_cost_collection * values[L.x(j)] +
                 inst.sites[j].fixed_cost_reprocessing * values[L.w(j)];
        check_residual(out, "budget", "", s, Sense::LE, gp.budget, tol, gp.budget);
    }
    for (int i = 0; i < I; ++i) {
        double s = 0.0;
        for (int j = 0; j < S; ++j) s += values[L.f(i, j)];
        const double rhs = gp.alpha * inst.hospitals[i].usage;
        check_residual(out, "collect", inst.hospitals[i].id, s, Sense::EQ, rhs, tol, rhs);
    }
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < S; ++j) {
            const double cap = gp.alpha * inst.hospitals[i].usage;
            check_residual(out, "cap_f", inst.hospitals[i].id + "," + inst.sites[j].id,
                           values[L.f(i, j)] - cap * values[L.y(i, j)], Sense::LE, 0.0, tol, cap);
        }
    const double big_m_g = gp.beta * gp.alpha * inst.total_usage();
    for (int j = 0; j < S; ++j) {
        double s = values[L.q(j)];
        for (int i = 0; i < I; ++i) s -= values[L.f(i, j)];
        check_residual(out, "q_def", inst.sites[j].id, s, Sense::EQ, 0.0, tol, values[L.q(j)]);
        double gsum = 0.0;
        for (int k = 0; k < S; ++k) gsum += values[L.g(j, k)];
        check_residual(out, "reprocess", inst.sites[j].id, gsum - gp.beta * values[L.q(j)],
                       Sense::EQ, 0.0, tol, std::abs(gp.beta * values[L.q(j)]));
        for (int k = 0; k < S; ++k)
            check_residual(out, "cap_g", inst.sites[j].id + "," + inst.sites[k].id,
                           values[L.g(j, k)] - big_m_g * values[L.z(j, k)], Sense::LE, 0.0, tol,
                           big_m_g);
    }
    for (int k = 0; k < S; ++k) {
        double s = values[L.r(k)];
        for (int j = 0; j < S; ++j) s -= values[L.g(j, k)];
        check_residual(out, "r_def", inst.sites[k].id, s, Sense::EQ, 0.0, tol, values[L.r(k)]);
    }
    {
        const FlowTotals ft = flow_totals(L, values);
        check_residual(out, "flow_balance", "", ft.collected - ft.reprocessed - ft.disposed,
                       Sense::EQ, 0.0, tol, ft.collected);
    }
    for (int m = 0; m < M; ++m)
        if (values[L.d(m)] < -tol)
            out.push_back({"bounds", "d[" + inst.disposal_sites[m].id + "]", -values[L.d(m)]});
    for (int c = L.x0; c < L.f0; ++c) {
        const double v = values[c];
        const double fr = std::min(v - std::floor(v), std::ceil(v) - v);
        if (v < -tol || v > 1.0 + tol || fr > tol)
            out.push_back({"integrality", "col " + std::to_string(c), fr});
    }
    return out;
}

std::vector<std::string> open_collection_ids(const Instance& inst, const VariableLayout& L,
                                             const std::vector<double>& values) {
    std::vector<std::string> ids;
    for (int j = 0; j < L.n_sites; ++j)
        if (values[L.x(j)] > 0.5) ids.push_back(inst.sites[j].id);
    return ids;
}

std::vector<std::string> open_reprocessing_ids(const Instance& inst, const VariableLayout& L,
                                               const std::vector<double>& values) {
    std::vector<std::string> ids;
    for (int k = 0; k < L.n_sites; ++k)
        if (values[L.w(k)] > 0.5) ids.push_back(inst.sites[k].id);
    return ids;
}

FlowTotals flow_totals(const VariableLayout& L, const std::vector<double>& values) {
    FlowTotals ft;
    for (int j = 0; j < L.n_sites; ++j) ft.collected += values[L.q(j)];
    for (int k = 0; k < L.n_sites; ++k) ft.reprocessed += values[L.r(k)];
    for (int m = 0; m < L.n_disposal; ++m) ft.disposed += values[L.d(m)];
    return ft;
}

}  // namespace clsc
