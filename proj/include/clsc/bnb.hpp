#pragma once

#include <optional>
#include <vector>

#include "clsc/milp.hpp"
#include "clsc/simplex.hpp"

namespace clsc {

enum class MilpStatus { Optimal, Infeasible, GapLimit, NodeLimit };

struct MilpResult {
    MilpStatus status = MilpStatus::Infeasible;
    std::vector<double> values;  // incumbent
    double objective = 0.0;
    double best_bound = 0.0;
    long nodes_explored = 0;
    long lp_iterations = 0;
    long basis_repairs = 0;
};

struct SolveOptions {
    double integrality_tol = 1e-6;
    double relative_gap = 1e-6;
    long node_limit = 1000000;
    std::optional<double> time_limit_seconds;
    // round-and-fix dive at the root for an initial incumbent
    bool dive_heuristic = true;
};

// Branch-and-bound over binary variables: most-fractional branching with
// lowest-index tie-break, best-bound node selection with FIFO tie-break.
// Child LPs are warm-started through the dual simplex on a shared basis.
MilpResult solve_milp(const MilpProblem& p, const SolveOptions& opts = {});

// Exact optimum by enumerating every binary assignment (Gray-code order,
// warm dual re-solves) and solving the residual LP. Testing ground truth;
// at most 22 binaries.
MilpResult enumerate_oracle(const MilpProblem& p);

}  // namespace clsc
