#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "clsc/milp.hpp"

namespace clsc {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> values;  // structural variables
    double objective = 0.0;      // in the problem's own sense, incl. constant
};

// Numerical breakdown (cycling guard exhausted, basis singular beyond
// repair, residuals out of tolerance after refactorization).
struct SimplexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LuFactor;  // sparse basis factorization, defined in simplex.cpp

// Bounded-variable revised simplex: sparse LU of the basis plus
// product-form eta updates, refactorized every refresh_interval pivots.
// Phase 1 uses artificial columns on initially violated rows only; warm
// restarts after bound or rhs changes go through the dual simplex on the
// retained basis. Deterministic: Dantzig pricing with lowest-index
// tie-breaks, Bland's rule engaged after a degeneracy stall.
class SimplexEngine {
public:
    struct Options {
        double feas_tol = 1e-7;
        double opt_tol = 1e-7;
        double pivot_tol = 1e-8;
        long max_iters = 2000000;
        long refresh_interval = 100;  // pivots between refactorizations
    };

    SimplexEngine(const MilpProblem& p, Options opt);
    explicit SimplexEngine(const MilpProblem& p) : SimplexEngine(p, Options()) {}
    ~SimplexEngine();
    SimplexEngine(SimplexEngine&&) noexcept;
    SimplexEngine& operator=(SimplexEngine&&) noexcept;

    // Bound override on a structural column (B&B fixings). Nonbasic columns
    // are snapped to the nearest new bound; call resolve_dual() afterwards.
    void set_bounds(int col, double lo, double hi);
    void set_rhs(int row, double v);
    // Swap the objective (same columns); basis stays primal feasible, so a
    // subsequent solve() runs phase 2 only.
    void set_objective(const std::vector<LinTerm>& terms, ObjSense sense, double constant);

    // Full solve from the current basis; runs phase 1 only on first use.
    LpStatus solve();
    // Re-optimize after set_bounds/set_rhs via dual simplex.
    LpStatus resolve_dual();

    double objective() const;  // in the problem's own sense
    std::vector<double> values() const;
    long iterations() const { return total_iters_; }
    long basis_repairs() const { return repairs_; }  // singular-basis recoveries

    // Refactorize and recompute values/reduced costs from original data;
    // used before extracting a final answer.
    void refresh();
    // Worst absolute row residual |Ax - b| over normalized rows.
    double max_row_residual() const;

private:
    enum class St : char { Basic, AtLower, AtUpper, Free };

    struct Eta {
        int r;
        std::vector<double> u;  // entering column in the pre-pivot basis
    };

    Options opt_;
    int nstruct_ = 0;
    int m_ = 0;
    int ncols_ = 0;  // struct + slacks + artificials
    ObjSense sense_ = ObjSense::Maximize;
    double obj_constant_ = 0.0;

    std::vector<double> lb_, ub_, xval_;
    std::vector<St> status_;
    std::vector<int> basis_;    // column basic in each row
    std::vector<double> cost_;  // phase-2 cost (minimization form)
    std::vector<double> d_;     // phase-2 reduced costs
    std::vector<double> c1_;    // phase-1 cost (artificials only)
    std::vector<double> d1_;
    bool phase1_needed_ = false;
    bool bland_ = false;
    long degen_streak_ = 0;
    long total_iters_ = 0;
    long pivots_since_refresh_ = 0;
    long repairs_ = 0;

    std::vector<std::vector<LinTerm>> orig_cols_;  // column-wise matrix, row-scaled
    std::vector<double> rhs_orig_;                 // row-scaled
    std::vector<double> row_scale_;  // power-of-two equilibration factors

    std::unique_ptr<LuFactor> fac_;  // LU of the basis at the last refresh
    std::vector<Eta> etas_;          // product-form updates since then

    void factorize();                          // LU of current basis_, clears etas_
    void ftran(std::vector<double>& x) const;  // x <- B^{-1} x
    void btran(std::vector<double>& y) const;  // y <- B^{-T} y
    std::vector<double> column_of(int j) const;         // B^{-1} a_j
    std::vector<double> tableau_row(int r) const;       // alpha_j = (e_r^T B^{-1}) a_j
    bool eligible_dir(int j, int* dir) const;
    void pivot_update(int r, int q, const std::vector<double>& u,
                      const std::vector<double>* alpha);
    void apply_step(int q, int dir, double t, int leave_row, bool leave_at_upper,
                    const std::vector<double>& u, const std::vector<double>* alpha);
    LpStatus primal_loop(std::vector<double>& d, bool phase1);
    void drop_artificials();
    void recompute_basic_values();
    void recompute_reduced(const std::vector<double>& c, std::vector<double>& d) const;
    double phase1_infeasibility() const;
};

// One-shot LP solve; integrality flags in p are ignored. The result is
// refactorization-clean (residuals within 1e-7 on normalized rows).
LpResult solve_lp(const MilpProblem& p, SimplexEngine::Options opt = {});

}  // namespace clsc
