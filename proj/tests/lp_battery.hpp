#pragma once

// LP test battery shared by the unit tests and the acceptance harness.

#include <string>
#include <vector>

#include "clsc/milp.hpp"
#include "clsc/simplex.hpp"

namespace lp_battery {

using namespace clsc;

struct LpCase {
    const char* name;
    MilpProblem p;
    LpStatus want_status;
    double want_obj = 0.0;
};

inline MilpProblem lp(ObjSense sense) {
    MilpProblem p;
    p.obj_sense = sense;
    return p;
}

inline void obj(MilpProblem& p, std::vector<LinTerm> terms, double constant = 0.0) {
    p.objective = std::move(terms);
    p.obj_constant = constant;
}

// 20+ case battery with independently known statuses/objectives.
inline std::vector<LpCase> battery() {
    std::vector<LpCase> cases;

    {  // 1: two simple upper bounds
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x1", 0, kInf, false);
        p.add_var("x2", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, 1);
        p.add_constraint("c2", {{1, 1}}, Sense::LE, 1);
        obj(p, {{0, 1}, {1, 1}});
        cases.push_back({"box", std::move(p), LpStatus::Optimal, 2.0});
    }
    {  // 2: contradictory row
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x1", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, -1);
        obj(p, {{0, 1}});
        cases.push_back({"infeasible_row", std::move(p), LpStatus::Infeasible, 0.0});
    }
    {  // 3: no upper bound at all
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x1", 0, kInf, false);
        obj(p, {{0, 1}});
        cases.push_back({"unbounded", std::move(p), LpStatus::Unbounded, 0.0});
    }
    {  // 4: minimization with a GE row
        MilpProblem p = lp(ObjSense::Minimize);
        p.add_var("x1", 0, kInf, false);
        p.add_var("x2", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}, {1, 1}}, Sense::GE, 2);
        obj(p, {{0, 1}, {1, 1}});
        cases.push_back({"min_ge", std::move(p), LpStatus::Optimal, 2.0});
    }
    {  // 5: textbook 2-var LP, optimum at (4, 0)
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_var("y", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}, {1, 1}}, Sense::LE, 4);
        p.add_constraint("c2", {{0, 1}, {1, 3}}, Sense::LE, 6);
        obj(p, {{0, 3}, {1, 2}});
        cases.push_back({"textbook", std::move(p), LpStatus::Optimal, 12.0});
    }
    {  // 6: degenerate vertex (redundant third row)
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_var("y", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, 1);
        p.add_constraint("c2", {{1, 1}}, Sense::LE, 1);
        p.add_constraint("c3", {{0, 1}, {1, 1}}, Sense::LE, 2);
        obj(p, {{0, 1}, {1, 1}});
        cases.push_back({"degenerate", std::move(p), LpStatus::Optimal, 2.0});
    }
    {  // 7: Beale's cycling example; optimum -1/20
        MilpProblem p = lp(ObjSense::Minimize);
        for (int i = 0; i < 4; ++i) p.add_var("x" + std::to_string(i + 1), 0, kInf, false);
        p.add_constraint("c1", {{0, 0.25}, {1, -60}, {2, -1.0 / 25}, {3, 9}}, Sense::LE, 0);
        p.add_constraint("c2", {{0, 0.5}, {1, -90}, {2, -1.0 / 50}, {3, 3}}, Sense::LE, 0);
        p.add_constraint("c3", {{2, 1}}, Sense::LE, 1);
        obj(p, {{0, -0.75}, {1, 150}, {2, -0.02}, {3, 6}});
        cases.push_back({"beale", std::move(p), LpStatus::Optimal, -0.05});
    }
    {  // 8: pure equality system, unique point (2, 1)
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_var("y", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}, {1, 1}}, Sense::EQ, 3);
        p.add_constraint("c2", {{0, 1}, {1, -1}}, Sense::EQ, 1);
        obj(p, {{0, 1}, {1, 2}});
        cases.push_back({"equalities", std::move(p), LpStatus::Optimal, 4.0});
    }
    {  // 9: optimum sits on a variable bound, not a row
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", -5, 7, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, 100);
        obj(p, {{0, 1}});
        cases.push_back({"upper_bound", std::move(p), LpStatus::Optimal, 7.0});
    }
    {  // 10: free variable pushed to the row bound
        MilpProblem p = lp(ObjSense::Minimize);
        p.add_var("x", -kInf, kInf, false);
        p.add_var("y", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}, {1, 1}}, Sense::GE, -3);
        obj(p, {{0, 1}, {1, 1}});
        cases.push_back({"free_var", std::move(p), LpStatus::Optimal, -3.0});
    }
    {  // 11: negative lower bound
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", -2, kInf, false);
        obj(p, {{0, -1}});
        cases.push_back({"neg_lower", std::move(p), LpStatus::Optimal, 2.0});
    }
    {  // 12: conflicting rows
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, 2);
        p.add_constraint("c2", {{0, 1}}, Sense::GE, 5);
        obj(p, {{0, 1}});
        cases.push_back({"conflict", std::move(p), LpStatus::Infeasible, 0.0});
    }
    {  // 13: capacitated allocation, optimum 28
        MilpProblem p = lp(ObjSense::Minimize);
        p.add_var("a", 0, 4, false);
        p.add_var("b", 0, 4, false);
        p.add_var("c", 0, 4, false);
        p.add_constraint("demand", {{0, 1}, {1, 1}, {2, 1}}, Sense::EQ, 10);
        obj(p, {{0, 2}, {1, 3}, {2, 4}});
        cases.push_back({"alloc", std::move(p), LpStatus::Optimal, 28.0});
    }
    {  // 14: Klee-Minty 3D, optimum 125
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x1", 0, kInf, false);
        p.add_var("x2", 0, kInf, false);
        p.add_var("x3", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, 5);
        p.add_constraint("c2", {{0, 4}, {1, 1}}, Sense::LE, 25);
        p.add_constraint("c3", {{0, 8}, {1, 4}, {2, 1}}, Sense::LE, 125);
        obj(p, {{0, 4}, {1, 2}, {2, 1}});
        cases.push_back({"klee_minty", std::move(p), LpStatus::Optimal, 125.0});
    }
    {  // 15: fractional optimum 1.5 on the odd cycle
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x1", 0, kInf, false);
        p.add_var("x2", 0, kInf, false);
        p.add_var("x3", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}, {1, 1}}, Sense::LE, 1);
        p.add_constraint("c2", {{1, 1}, {2, 1}}, Sense::LE, 1);
        p.add_constraint("c3", {{0, 1}, {2, 1}}, Sense::LE, 1);
        obj(p, {{0, 1}, {1, 1}, {2, 1}});
        cases.push_back({"odd_cycle", std::move(p), LpStatus::Optimal, 1.5});
    }
    {  // 16: zero objective is still Optimal
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, 1);
        cases.push_back({"zero_obj", std::move(p), LpStatus::Optimal, 0.0});
    }
    {  // 17: feasible but unbounded direction
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_var("y", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}, {1, -1}}, Sense::GE, 1);
        obj(p, {{0, 1}, {1, -1}});
        cases.push_back({"unbounded_dir", std::move(p), LpStatus::Unbounded, 0.0});
    }
    {  // 18: equality out of reach of the bounds
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, 1, false);
        p.add_var("y", 0, 1, false);
        p.add_constraint("c1", {{0, 1}, {1, 1}}, Sense::EQ, 5);
        obj(p, {{0, 1}});
        cases.push_back({"eq_infeasible", std::move(p), LpStatus::Infeasible, 0.0});
    }
    {  // 19: badly scaled coefficients
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_constraint("c1", {{0, 1e6}}, Sense::LE, 3e6);
        obj(p, {{0, 1e6}});
        cases.push_back({"scaled", std::move(p), LpStatus::Optimal, 3e6});
    }
    {  // 20: objective constant carries through
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}}, Sense::LE, 1);
        obj(p, {{0, 1}}, 7.0);
        cases.push_back({"constant", std::move(p), LpStatus::Optimal, 8.0});
    }
    {  // 21: optimum with every variable at its own upper bound
        MilpProblem p = lp(ObjSense::Maximize);
        std::vector<LinTerm> o, row;
        for (int i = 0; i < 5; ++i) {
            p.add_var("x" + std::to_string(i + 1), 0, i + 1.0, false);
            o.push_back({i, 1.0});
            row.push_back({i, 1.0});
        }
        p.add_constraint("cap", std::move(row), Sense::LE, 100);
        obj(p, std::move(o));
        cases.push_back({"all_upper", std::move(p), LpStatus::Optimal, 15.0});
    }
    {  // 22: dual degeneracy (many optimal vertices)
        MilpProblem p = lp(ObjSense::Maximize);
        p.add_var("x", 0, kInf, false);
        p.add_var("y", 0, kInf, false);
        p.add_constraint("c1", {{0, 1}, {1, 1}}, Sense::LE, 1);
        obj(p, {{0, 1}, {1, 1}});
        cases.push_back({"dual_degenerate", std::move(p), LpStatus::Optimal, 1.0});
    }
    return cases;
}

}  // namespace lp_battery
