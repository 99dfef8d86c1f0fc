#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "clsc/pareto.hpp"
#include "doctest.h"

using namespace clsc;

namespace {

Instance forced_instance() {
    // one hospital, one site, budget exactly covering the single configuration
    Instance inst;
    inst.hospitals.push_back({"H1", "A", 48.5, -123.4, 1000.0});
    CandidateSite s;
    s.id = "S1";
    s.lat = 48.6;
    s.lon = -123.5;
    s.fixed_cost_collection = 100.0;
    s.fixed_cost_reprocessing = 200.0;
    s.unit_cost_collection = 0.1;
    s.unit_cost_reprocessing = 0.3;
    s.jobs_collection = 3;
    s.jobs_reprocessing = 7;
    inst.sites.push_back(s);
    inst.disposal_sites.push_back({"D1", 0.5, 0.01});
    inst.params = {2.0, 0.05, 1.5, 0.3, 300.0, 0.8, 0.95};
    return inst;
}

struct Ctx {
    Instance inst;
    DistanceMatrix d_hs, d_ss;
};

Ctx ctx_for(const Instance& inst) {
    auto [d_hs, d_ss] = instance_distances(inst);
    return {inst, d_hs, d_ss};
}

// brute-force strict-dominance filter used as the oracle
std::vector<ParetoPoint> brute_filter(const std::vector<ParetoPoint>& pts) {
    std::vector<ParetoPoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
            if (i == j) continue;
            const auto& a = pts[j].triple;
            const auto& b = pts[i].triple;
            const bool ge = a.z1 >= b.z1 && a.z2 >= b.z2 && a.z3 >= b.z3;
            const bool gt = a.z1 > b.z1 || a.z2 > b.z2 || a.z3 > b.z3;
            if (ge && gt) dominated = true;
        }
        if (!dominated) out.push_back(pts[i]);
    }
    return out;
}

ParetoPoint triple_point(double z1, double z2, double z3) {
    ParetoPoint p;
    p.triple = {z1, z2, z3};
    return p;
}

}  // namespace

TEST_CASE("payoff table on a forced configuration has identical rows") {
    const Ctx c = ctx_for(forced_instance());
    const PayoffTable t = payoff_table(c.inst, c.d_hs, c.d_ss);
    for (int i = 1; i < 3; ++i) {
        CHECK(t.rows[i].z1 == doctest::Approx(t.rows[0].z1));
        CHECK(t.rows[i].z2 == doctest::Approx(t.rows[0].z2));
        CHECK(t.rows[i].z3 == doctest::Approx(t.rows[0].z3));
    }
}

TEST_CASE("payoff diagonal dominates its column; Z3 row beats Z1 row on jobs") {
    const Ctx c = ctx_for(generate_synthetic(41, 2, 3, 1));
    const PayoffTable t = payoff_table(c.inst, c.d_hs, c.d_ss);
    const double tol = 1e-6;
    for (int i = 0; i < 3; ++i) {
        const double diag = i == 0 ? t.rows[0].z1 : (i == 1 ? t.rows[1].z2 : t.rows[2].z3);
        for (int r = 0; r < 3; ++r) {
            const double v = i == 0 ? t.rows[r].z1 : (i == 1 ? t.rows[r].z2 : t.rows[r].z3);
            CHECK(diag >= v - tol * std::max(1.0, std::abs(diag)));
        }
    }
    CHECK(t.rows[2].z3 >= t.rows[0].z3 - tol);
}

TEST_CASE("payoff diagonal matches the enumeration oracle per objective") {
    const Ctx c = ctx_for(generate_synthetic(42, 2, 2, 1));
    const PayoffTable t = payoff_table(c.inst, c.d_hs, c.d_ss);
    const Objective objs[3] = {Objective::Z1, Objective::Z2, Objective::Z3};
    for (int i = 0; i < 3; ++i) {
        auto [p, layout] = build_circular_model(c.inst, c.d_hs, c.d_ss, objs[i]);
        const MilpResult want = enumerate_oracle(p);
        REQUIRE(want.status == MilpStatus::Optimal);
        const double diag = i == 0 ? t.rows[0].z1 : (i == 1 ? t.rows[1].z2 : t.rows[2].z3);
        CHECK(diag == doctest::Approx(want.objective).epsilon(1e-6));
    }
}

TEST_CASE("1x1 sweep at the loosest bounds reproduces the Z1-only optimum") {
    const Ctx c = ctx_for(generate_synthetic(43, 2, 2, 1));
    const SweepResult sweep = epsilon_sweep(c.inst, c.d_hs, c.d_ss, 1, 1);
    REQUIRE(sweep.points.size() == 1);
    auto [p, layout] = build_circular_model(c.inst, c.d_hs, c.d_ss, Objective::Z1);
    const MilpResult z1 = solve_milp(p);
    CHECK(sweep.points[0].triple.z1 == doctest::Approx(z1.objective).epsilon(1e-6));
}

TEST_CASE("3x3 sweep on a 3-site toy matches the oracle cell by cell") {
    const Ctx c = ctx_for(generate_synthetic(44, 2, 3, 1));
    const SweepResult sweep = epsilon_sweep(c.inst, c.d_hs, c.d_ss, 3, 3);
    CHECK(sweep.points.size() + sweep.infeasible.size() == 9);
    for (const auto& pt : sweep.points) {
        auto [p, layout] =
            build_circular_model(c.inst, c.d_hs, c.d_ss, Objective::Z1, pt.eps2, pt.eps3);
        const MilpResult want = enumerate_oracle(p);
        CAPTURE(pt.eps2);
        CAPTURE(pt.eps3);
        REQUIRE(want.status == MilpStatus::Optimal);
        CHECK(pt.triple.z1 == doctest::Approx(want.objective).epsilon(1e-6));
        // point invariants
        CHECK(pt.triple.z2 >= pt.eps2 - 1e-6 * std::max(1.0, std::abs(pt.eps2)));
        CHECK(pt.triple.z3 >= pt.eps3 - 1e-6 * std::max(1.0, std::abs(pt.eps3)));
        const VariableLayout L = layout_for(c.inst);
        CHECK(check_feasibility(c.inst, c.d_hs, c.d_ss, L, pt.solution.values).empty());
    }
    for (const auto& cell : sweep.infeasible) {
        auto [p, layout] = build_circular_model(c.inst, c.d_hs, c.d_ss, Objective::Z1,
                                                cell.first, cell.second);
        CHECK(enumerate_oracle(p).status == MilpStatus::Infeasible);
    }
}

TEST_CASE("staircase: z1 non-increasing when one bound tightens") {
    const Ctx c = ctx_for(generate_synthetic(44, 2, 3, 1));
    const SweepResult sweep = epsilon_sweep(c.inst, c.d_hs, c.d_ss, 3, 3);
    const double tol = 1e-6;
    for (const auto& a : sweep.points)
        for (const auto& b : sweep.points) {
            if (a.eps3 == b.eps3 && a.eps2 < b.eps2)
                CHECK(a.triple.z1 >= b.triple.z1 - tol * std::max(1.0, std::abs(a.triple.z1)));
            if (a.eps2 == b.eps2 && a.eps3 < b.eps3)
                CHECK(a.triple.z1 >= b.triple.z1 - tol * std::max(1.0, std::abs(a.triple.z1)));
        }
    // the Z1-only optimum is never strictly dominated by a sweep point
    auto [p, layout] = build_circular_model(c.inst, c.d_hs, c.d_ss, Objective::Z1);
    const MilpResult z1 = solve_milp(p);
    for (const auto& pt : sweep.points) {
        const bool ge = pt.triple.z1 >= z1.objective + tol;
        CHECK_FALSE(ge);
    }
}

TEST_CASE("filter_nondominated basics") {
    const auto kept = filter_nondominated({triple_point(1, 1, 1), triple_point(2, 2, 2)});
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].triple.z1 == 2.0);

    const auto dup = filter_nondominated({triple_point(3, 1, 2), triple_point(3, 1, 2)});
    CHECK(dup.size() == 2);  // equal triples are all retained

    const auto mixed = filter_nondominated(
        {triple_point(1, 5, 1), triple_point(2, 2, 2), triple_point(1, 5, 1)});
    CHECK(mixed.size() == 3);  // mutually non-dominated, order preserved
    CHECK(mixed[0].triple.z2 == 5.0);
    CHECK(mixed[1].triple.z1 == 2.0);
}

TEST_CASE("filter_nondominated equals brute force on 200 random triples") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coord(0, 9);  // coarse grid provokes ties
    std::vector<ParetoPoint> pts;
    for (int i = 0; i < 200; ++i)
        pts.push_back(triple_point(coord(rng), coord(rng), coord(rng)));
    const auto got = filter_nondominated(pts);
    const auto want = brute_filter(pts);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].triple.z1 == want[i].triple.z1);
        CHECK(got[i].triple.z2 == want[i].triple.z2);
        CHECK(got[i].triple.z3 == want[i].triple.z3);
    }
    // idempotence
    const auto again = filter_nondominated(got);
    CHECK(again.size() == got.size());
}

TEST_CASE("CSV export: header contract and one row per point") {
    ParetoPoint p = triple_point(1.5, -2.25, 3);
    p.eps2 = -10.0;
    p.eps3 = 1.0;
    p.open_collection = {"S2", "S1"};
    p.open_reprocessing = {"S1"};
    std::ostringstream out;
    export_front_csv({p}, out);
    std::istringstream lines(out.str());
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == "eps2,eps3,z1,z2,z3,open_collection,open_reprocessing");
    CHECK(row == "-10.000000,1.000000,1.500000,-2.250000,3.000000,S1;S2,S1");
    CHECK_FALSE(std::getline(lines, extra));
}

TEST_CASE("structured front export round-trips") {
    const Ctx c = ctx_for(generate_synthetic(45, 2, 2, 1));
    const SweepResult sweep = epsilon_sweep(c.inst, c.d_hs, c.d_ss, 2, 2);
    REQUIRE(!sweep.points.empty());
    std::ostringstream out;
    export_front_json(sweep.points, out);
    std::istringstream in(out.str());
    const auto back = import_front_json(in);
    REQUIRE(back.size() == sweep.points.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].eps2 == sweep.points[i].eps2);
        CHECK(back[i].eps3 == sweep.points[i].eps3);
        CHECK(back[i].triple.z1 == sweep.points[i].triple.z1);
        CHECK(back[i].open_collection == sweep.points[i].open_collection);
        CHECK(back[i].solution.values == sweep.points[i].solution.values);
    }
}
