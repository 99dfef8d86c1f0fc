#include "clsc/simplex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace clsc {

namespace {
constexpr double kDrop = 1e-12;     // treat smaller multipliers as zero
constexpr double kTieTol = 1e-9;    // ratio-test tie window
constexpr long kBlandAfter = 1000;  // degenerate pivots before Bland's rule
// Pivots below this magnitude are only accepted on a freshly factorized
// basis: each product-form eta divides by its pivot, so one tiny pivot from
// a drifted chain can destroy the basis (observed as singular refactorizes).
constexpr double kStabTol = 1e-6;
// After accepting a pivot below this magnitude, refactorize before the next
// iteration: small-pivot etas amplify drift through the rest of the chain.
constexpr double kForceRefreshPivot = 1e-6;
}  // namespace

struct LuFactor {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool ok = false;
};

SimplexEngine::~SimplexEngine() = default;
SimplexEngine::SimplexEngine(SimplexEngine&&) noexcept = default;
SimplexEngine& SimplexEngine::operator=(SimplexEngine&&) noexcept = default;

SimplexEngine::SimplexEngine(const MilpProblem& p, Options opt) : opt_(opt) {
    nstruct_ = p.n_vars;
    m_ = static_cast<int>(p.constraints.size());
    sense_ = p.obj_sense;
    obj_constant_ = p.obj_constant;

    lb_ = p.lower;
    ub_ = p.upper;
    orig_cols_.assign(nstruct_, {});
    for (int r = 0; r < m_; ++r) {
        for (const auto& t : p.constraints[r].terms)
            if (t.coef != 0.0) orig_cols_[t.col].push_back({r, t.coef});
    }
    // Row equilibration: scale every row by a power of two so its largest
    // coefficient lands in [0.5, 1). Powers of two keep the scaling exact.
    // Model coefficients span many orders of magnitude (costs vs flows vs
    // binaries), and unequilibrated bases mix pivot magnitudes badly enough
    // to defeat the factorization. Slack and artificial columns stay unit:
    // their bounds are only 0 or +-inf, so the scaled slack is the same
    // variable up to a positive factor nobody observes.
    row_scale_.assign(m_, 1.0);
    {
        std::vector<double> rmax(m_, 0.0);
        for (int j = 0; j < nstruct_; ++j)
            for (const auto& e : orig_cols_[j])
                rmax[e.col] = std::max(rmax[e.col], std::abs(e.coef));
        for (int r = 0; r < m_; ++r) {
            if (rmax[r] <= 0.0) continue;
            int ex;
            std::frexp(rmax[r], &ex);
            row_scale_[r] = std::ldexp(1.0, -ex);
        }
        for (int j = 0; j < nstruct_; ++j)
            for (auto& e : orig_cols_[j]) e.coef *= row_scale_[e.col];
    }
    rhs_orig_.resize(m_);
    // slack per row: LE -> [0,inf), GE -> (-inf,0], EQ -> [0,0]
    for (int r = 0; r < m_; ++r) {
        const auto& c = p.constraints[r];
        rhs_orig_[r] = c.rhs * row_scale_[r];
        double slo = 0.0, shi = 0.0;
        switch (c.sense) {
            case Sense::LE: slo = 0.0; shi = kInf; break;
            case Sense::GE: slo = -kInf; shi = 0.0; break;
            case Sense::EQ: slo = 0.0; shi = 0.0; break;
        }
        lb_.push_back(slo);
        ub_.push_back(shi);
        orig_cols_.push_back({{r, 1.0}});
    }

    const int art_start = nstruct_ + m_;
    status_.assign(art_start, St::AtLower);
    xval_.assign(art_start, 0.0);
    for (int j = 0; j < nstruct_; ++j) {
        const double lo = lb_[j], hi = ub_[j];
        if (lo > -kInf && hi < kInf) {
            status_[j] = std::abs(lo) <= std::abs(hi) ? St::AtLower : St::AtUpper;
            xval_[j] = status_[j] == St::AtLower ? lo : hi;
        } else if (lo > -kInf) {
            status_[j] = St::AtLower;
            xval_[j] = lo;
        } else if (hi < kInf) {
            status_[j] = St::AtUpper;
            xval_[j] = hi;
        } else {
            status_[j] = St::Free;
            xval_[j] = 0.0;
        }
    }

    // row residuals with every structural at its chosen bound
    std::vector<double> resid = rhs_orig_;
    for (int j = 0; j < nstruct_; ++j) {
        if (xval_[j] == 0.0) continue;
        for (const auto& e : orig_cols_[j]) resid[e.col] -= e.coef * xval_[j];
    }

    // slack absorbs the residual where its bounds allow; otherwise the slack
    // sits at its nearest bound and an artificial carries the rest
    basis_.assign(m_, -1);
    std::vector<int> art_rows;
    std::vector<double> art_vals;
    for (int r = 0; r < m_; ++r) {
        const int s = nstruct_ + r;
        if (resid[r] >= lb_[s] - opt_.feas_tol && resid[r] <= ub_[s] + opt_.feas_tol) {
            basis_[r] = s;
            status_[s] = St::Basic;
            xval_[s] = std::clamp(resid[r], lb_[s], ub_[s]);
        } else {
            const double snap = std::clamp(resid[r], lb_[s], ub_[s]);
            status_[s] = snap == lb_[s] ? St::AtLower : St::AtUpper;
            xval_[s] = snap;
            art_rows.push_back(r);
            art_vals.push_back(resid[r] - snap);
        }
    }
    const int nart = static_cast<int>(art_rows.size());
    ncols_ = art_start + nart;
    phase1_needed_ = nart > 0;

    c1_.assign(ncols_, 0.0);
    for (int a = 0; a < nart; ++a) {
        const int col = art_start + a;
        const int r = art_rows[a];
        const double v = art_vals[a];
        orig_cols_.push_back({{r, 1.0}});
        if (v >= 0.0) {
            lb_.push_back(0.0);
            ub_.push_back(kInf);
            c1_[col] = 1.0;
        } else {
            lb_.push_back(-kInf);
            ub_.push_back(0.0);
            c1_[col] = -1.0;
        }
        status_.push_back(St::Basic);
        xval_.push_back(v);
        basis_[r] = col;
    }

    cost_.assign(ncols_, 0.0);
    const double sgn = sense_ == ObjSense::Maximize ? -1.0 : 1.0;
    for (const auto& t : p.objective) cost_[t.col] += sgn * t.coef;

    fac_ = std::make_unique<LuFactor>();
    factorize();
    d_.assign(ncols_, 0.0);
    d1_.assign(ncols_, 0.0);
    recompute_reduced(cost_, d_);

    // Phase 1 runs here, while the artificial signs and costs still match the
    // state they were built from. Afterwards the artificials are pinned to
    // zero; a basic artificial left at a nonzero value reads as a primal
    // violation, so later bound changes are handled by the dual repair loop.
    if (phase1_needed_) {
        recompute_reduced(c1_, d1_);
        primal_loop(d1_, true);
        double rhs_mag = 0.0;
        for (double b : rhs_orig_) rhs_mag = std::max(rhs_mag, std::abs(b));
        if (phase1_infeasibility() <= opt_.feas_tol * std::max(1.0, rhs_mag)) {
            drop_artificials();
        } else {
            for (int j = art_start; j < ncols_; ++j) {
                lb_[j] = 0.0;
                ub_[j] = 0.0;
                if (status_[j] != St::Basic) {
                    status_[j] = St::AtLower;
                    xval_[j] = 0.0;
                }
            }
        }
        phase1_needed_ = false;
        bland_ = false;
        degen_streak_ = 0;
    }
}

void SimplexEngine::factorize() {
#ifdef CLSC_DEBUG_REPAIR
    const long dbg_psr = pivots_since_refresh_;
#endif
    etas_.clear();
    pivots_since_refresh_ = 0;
    fac_->ok = false;
    if (m_ == 0) {
        fac_->ok = true;
        return;
    }
    auto build = [&] {
        std::vector<Eigen::Triplet<double>> trip;
        for (int i = 0; i < m_; ++i)
            for (const auto& e : orig_cols_[basis_[i]]) trip.emplace_back(e.col, i, e.coef);
        Eigen::SparseMatrix<double> B(m_, m_);
        B.setFromTriplets(trip.begin(), trip.end());
        // fresh factorization object: recomputing through one that failed
        // leaves stale internals behind
        fac_ = std::make_unique<LuFactor>();
        fac_->lu.compute(B);
#ifdef CLSC_DEBUG_REPAIR
        if (fac_->lu.info() != Eigen::Success) {
            std::fprintf(stderr, "[sparselu] info=%d msg=%s\n",
                         static_cast<int>(fac_->lu.info()),
                         fac_->lu.lastErrorMessage().c_str());
            std::vector<int> seen(ncols_, 0);
            for (int i = 0; i < m_; ++i) {
                const int b = basis_[i];
                if (orig_cols_[b].empty())
                    std::fprintf(stderr, "[sparselu] row %d: empty column %d (nstruct=%d)\n", i,
                                 b, nstruct_);
                if (++seen[b] > 1)
                    std::fprintf(stderr, "[sparselu] duplicate basic column %d\n", b);
            }
        }
#endif
        return fac_->lu.info() == Eigen::Success;
    };
    if (build()) {
        fac_->ok = true;
        return;
    }
    // singular basis: rank-revealing repair, dependent columns replaced by
    // slacks of uncovered rows
    ++repairs_;
#ifdef CLSC_DEBUG_REPAIR
    std::fprintf(stderr, "[repair %ld] m=%d pivots_since_refresh=%ld iters=%ld\n", repairs_, m_,
                 dbg_psr, total_iters_);
#endif
    Eigen::MatrixXd Bd = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i)
        for (const auto& e : orig_cols_[basis_[i]]) Bd(e.col, i) = e.coef;
    const std::vector<int> basis_save = basis_;
    const std::vector<St> status_save = status_;
    const std::vector<double> xval_save = xval_;
    const auto kick = [&](int pos) {
        const int old = basis_[pos];
        status_[old] =
            lb_[old] > -kInf ? St::AtLower : (ub_[old] < kInf ? St::AtUpper : St::Free);
        if (status_[old] != St::Free)
            xval_[old] = status_[old] == St::AtLower ? lb_[old] : ub_[old];
    };
    // cheap pass first: row-pivoted LU keeps columns in place, so a tiny
    // diagonal of U marks a (nearly) dependent basis position and the pivot
    // row at that position is the natural slack replacement
    {
        Eigen::PartialPivLU<Eigen::MatrixXd> plu(Bd);
        const auto& pidx = plu.permutationP().indices();  // original row -> position
        std::vector<int> row_at(m_);
        for (int j = 0; j < m_; ++j) row_at[pidx[j]] = j;
        const Eigen::VectorXd diag = plu.matrixLU().diagonal();
        double maxd = 0.0;
        for (int i = 0; i < m_; ++i)
            if (std::isfinite(diag[i])) maxd = std::max(maxd, std::abs(diag[i]));
        for (const double thr : {1e-11, 1e-9, 1e-7}) {
            basis_ = basis_save;
            status_ = status_save;
            xval_ = xval_save;
            bool any = false, ok = true;
            for (int i = 0; i < m_ && ok; ++i) {
                const double d = std::abs(diag[i]);
                if (std::isfinite(d) && d > thr * maxd) continue;
                const int s = nstruct_ + row_at[i];
                if (status_[s] == St::Basic) {
                    ok = false;  // replacement slack taken; fall through
                    break;
                }
                any = true;
                kick(i);
                basis_[i] = s;
                status_[s] = St::Basic;
            }
#ifdef CLSC_DEBUG_REPAIR
            std::fprintf(stderr, "[repair %ld] partial thr=%g any=%d ok=%d\n", repairs_, thr,
                         (int)any, (int)ok);
#endif
            if (any && ok && build()) {
                fac_->ok = true;
                return;
            }
        }
    }
    // full pivoting fallback: slow but fully rank-revealing
    Eigen::FullPivLU<Eigen::MatrixXd> flu(Bd);
    // tightest threshold first: kick as few columns as possible, loosen only
    // if the rebuilt basis still fails to factorize
    for (const double thr : {1e-14, 1e-12, 1e-10}) {
        basis_ = basis_save;
        status_ = status_save;
        xval_ = xval_save;
        flu.setThreshold(thr);
        const int rank = static_cast<int>(flu.rank());
#ifdef CLSC_DEBUG_REPAIR
        std::fprintf(stderr, "[repair %ld] thr=%g maxpiv=%g deficiency=%d\n", repairs_, thr,
                     flu.maxPivot(), m_ - rank);
#endif
        if (rank == m_) continue;  // no deficiency at this threshold; loosen
        std::vector<char> keep_pos(m_, 0), row_covered(m_, 0);
        const auto& colperm = flu.permutationQ().indices();
        const auto& rowperm = flu.permutationP().indices();
        for (int k = 0; k < rank; ++k) keep_pos[colperm[k]] = 1;
        // pivot rows of the kept columns; the rest get unit (slack) columns
        for (int k = 0; k < rank; ++k)
            for (int i = 0; i < m_; ++i)
                if (rowperm[i] == k) row_covered[i] = 1;
        std::vector<int> uncovered;
        for (int i = 0; i < m_; ++i)
            if (!row_covered[i] && status_[nstruct_ + i] != St::Basic) uncovered.push_back(i);
        std::size_t next = 0;
        bool ok = true;
        for (int i = 0; i < m_ && ok; ++i) {
            if (keep_pos[i]) continue;
            const int old = basis_[i];
            status_[old] =
                lb_[old] > -kInf ? St::AtLower : (ub_[old] < kInf ? St::AtUpper : St::Free);
            if (status_[old] != St::Free)
                xval_[old] = status_[old] == St::AtLower ? lb_[old] : ub_[old];
            if (next >= uncovered.size()) {
                ok = false;
                break;
            }
            const int s = nstruct_ + uncovered[next++];
            basis_[i] = s;
            status_[s] = St::Basic;
        }
        if (ok && build()) {
            fac_->ok = true;
            return;
        }
    }
    basis_ = basis_save;
    status_ = status_save;
    xval_ = xval_save;
    throw SimplexError("simplex: basis repair failed");
}

void SimplexEngine::ftran(std::vector<double>& x) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> v(x.data(), m_);
    v = fac_->lu.solve(v).eval();
    for (const auto& e : etas_) {
        const double t = x[e.r] / e.u[e.r];
        if (t != 0.0)
            for (int i = 0; i < m_; ++i) x[i] -= e.u[i] * t;
        x[e.r] = t;
    }
}

void SimplexEngine::btran(std::vector<double>& y) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        const double ur = it->u[it->r];
        double dot = 0.0;
        for (int i = 0; i < m_; ++i) dot += it->u[i] * y[i];
        // y_r <- (y_r - sum_{i != r} u_i y_i) / u_r
        y[it->r] = (y[it->r] - (dot - ur * y[it->r])) / ur;
    }
    Eigen::Map<Eigen::VectorXd> v(y.data(), m_);
    v = fac_->lu.adjoint().solve(v).eval();
}

std::vector<double> SimplexEngine::column_of(int j) const {
    std::vector<double> u(m_, 0.0);
    for (const auto& e : orig_cols_[j]) u[e.col] = e.coef;
    ftran(u);
    return u;
}

std::vector<double> SimplexEngine::tableau_row(int r) const {
    std::vector<double> rho(m_, 0.0);
    rho[r] = 1.0;
    btran(rho);
    std::vector<double> alpha(ncols_, 0.0);
    for (int j = 0; j < ncols_; ++j) {
        double s = 0.0;
        for (const auto& e : orig_cols_[j]) s += rho[e.col] * e.coef;
        alpha[j] = s;
    }
    return alpha;
}

void SimplexEngine::set_bounds(int col, double lo, double hi) {
    lb_[col] = lo;
    ub_[col] = hi;
    if (status_[col] == St::Basic) return;
    double target = xval_[col];
    if (status_[col] == St::AtLower)
        target = lo;
    else if (status_[col] == St::AtUpper)
        target = hi;
    const double delta = target - xval_[col];
    if (delta == 0.0) return;
    xval_[col] = target;
    const std::vector<double> u = column_of(col);
    for (int i = 0; i < m_; ++i)
        if (std::abs(u[i]) > kDrop) xval_[basis_[i]] -= u[i] * delta;
}

void SimplexEngine::set_rhs(int rowi, double v) {
    v *= row_scale_[rowi];  // callers speak in original row units
    const double dv = v - rhs_orig_[rowi];
    if (dv == 0.0) return;
    rhs_orig_[rowi] = v;
    std::vector<double> u(m_, 0.0);
    u[rowi] = 1.0;
    ftran(u);  // B^{-1} e_row
    for (int i = 0; i < m_; ++i)
        if (std::abs(u[i]) > kDrop) xval_[basis_[i]] += dv * u[i];
}

void SimplexEngine::set_objective(const std::vector<LinTerm>& terms, ObjSense sense,
                                  double constant) {
    sense_ = sense;
    obj_constant_ = constant;
    std::fill(cost_.begin(), cost_.end(), 0.0);
    const double sgn = sense_ == ObjSense::Maximize ? -1.0 : 1.0;
    for (const auto& t : terms) cost_[t.col] += sgn * t.coef;
    recompute_reduced(cost_, d_);
}

double SimplexEngine::objective() const {
    double raw = 0.0;
    const double sgn = sense_ == ObjSense::Maximize ? -1.0 : 1.0;
    for (int j = 0; j < ncols_; ++j)
        if (cost_[j] != 0.0) raw += cost_[j] * xval_[j];
    return obj_constant_ + sgn * raw;
}

std::vector<double> SimplexEngine::values() const {
    return std::vector<double>(xval_.begin(), xval_.begin() + nstruct_);
}

bool SimplexEngine::eligible_dir(int j, int* dir) const {
    if (lb_[j] == ub_[j]) return false;
    switch (status_[j]) {
        case St::AtLower:
            if (d_[j] < -opt_.opt_tol) {
                *dir = +1;
                return true;
            }
            return false;
        case St::AtUpper:
            if (d_[j] > opt_.opt_tol) {
                *dir = -1;
                return true;
            }
            return false;
        case St::Free:
            if (std::abs(d_[j]) > opt_.opt_tol) {
                *dir = d_[j] < 0 ? +1 : -1;
                return true;
            }
            return false;
        case St::Basic: return false;
    }
    return false;
}

void SimplexEngine::pivot_update(int r, int q, const std::vector<double>& u,
                                 const std::vector<double>* alpha) {
    if (std::abs(u[r]) < kDrop) throw SimplexError("simplex: vanishing pivot element");
    std::vector<double> arow;
    if (!alpha) {
        arow = tableau_row(r);
        alpha = &arow;
    }
    const double piv = (*alpha)[q] != 0.0 ? (*alpha)[q] : u[r];
    {
        const double f = d_[q] / piv;
        if (std::abs(f) > kDrop)
            for (int j = 0; j < ncols_; ++j) d_[j] -= f * (*alpha)[j];
        d_[q] = 0.0;
    }
    if (phase1_needed_) {
        const double f = d1_[q] / piv;
        if (std::abs(f) > kDrop)
            for (int j = 0; j < ncols_; ++j) d1_[j] -= f * (*alpha)[j];
        d1_[q] = 0.0;
    }
    etas_.push_back({r, u});
    basis_[r] = q;
    status_[q] = St::Basic;
    ++total_iters_;
    ++pivots_since_refresh_;
    if (std::abs(u[r]) < kForceRefreshPivot) pivots_since_refresh_ = opt_.refresh_interval;
}

void SimplexEngine::apply_step(int q, int dir, double t, int leave_row, bool leave_at_upper,
                               const std::vector<double>& u, const std::vector<double>* alpha) {
    if (t != 0.0) {
        xval_[q] += dir * t;
        for (int i = 0; i < m_; ++i)
            if (std::abs(u[i]) > kDrop) xval_[basis_[i]] -= dir * t * u[i];
    }
    if (leave_row >= 0) {
        const int lv = basis_[leave_row];
        if (leave_at_upper) {
            xval_[lv] = ub_[lv];
            status_[lv] = St::AtUpper;
        } else {
            xval_[lv] = lb_[lv];
            status_[lv] = St::AtLower;
        }
        pivot_update(leave_row, q, u, alpha);
    } else {
        // bound flip, no basis change
        if (dir > 0) {
            xval_[q] = ub_[q];
            status_[q] = St::AtUpper;
        } else {
            xval_[q] = lb_[q];
            status_[q] = St::AtLower;
        }
        ++total_iters_;
    }
    if (t <= kTieTol) {
        if (++degen_streak_ > kBlandAfter) bland_ = true;
    } else {
        degen_streak_ = 0;
        bland_ = false;
    }
}

LpStatus SimplexEngine::primal_loop(std::vector<double>& d, bool phase1) {
    const int enter_limit = nstruct_ + m_;  // artificials never enter
    for (;;) {
        if (total_iters_ > opt_.max_iters)
            throw SimplexError("simplex: iteration limit exceeded (possible cycling)");
        if (pivots_since_refresh_ >= opt_.refresh_interval) refresh();

        int q = -1, dir = 0;
        if (bland_) {
            for (int j = 0; j < enter_limit; ++j) {
                int dj;
                // phase-1 eligibility reads the phase-1 reduced costs
                std::swap(d_, d);
                const bool ok = eligible_dir(j, &dj);
                std::swap(d_, d);
                if (ok) {
                    q = j;
                    dir = dj;
                    break;
                }
            }
        } else {
            double best = 0.0;
            for (int j = 0; j < enter_limit; ++j) {
                int dj;
                std::swap(d_, d);
                const bool ok = eligible_dir(j, &dj);
                std::swap(d_, d);
                if (!ok) continue;
                const double mag = std::abs(d[j]);
                if (mag > best + kTieTol) {
                    best = mag;
                    q = j;
                    dir = dj;
                }
            }
        }
        if (q < 0) return LpStatus::Optimal;

        const std::vector<double> u = column_of(q);

        // ratio test
        double t_own = kInf;
        if (lb_[q] > -kInf && ub_[q] < kInf) t_own = ub_[q] - lb_[q];
        double tmin = t_own;
        for (int i = 0; i < m_; ++i) {
            const double a = u[i];
            if (std::abs(a) <= opt_.pivot_tol) continue;
            const int B = basis_[i];
            const double delta = -dir * a;
            double cap;
            if (delta > 0) {
                if (ub_[B] == kInf) continue;
                cap = (ub_[B] - xval_[B]) / delta;
            } else {
                if (lb_[B] == -kInf) continue;
                cap = (xval_[B] - lb_[B]) / (-delta);
            }
            if (cap < 0.0) cap = 0.0;
            if (cap < tmin) tmin = cap;
        }
        if (tmin == kInf) {
            // no blocking row can also mean the column was computed on a
            // degraded basis; only trust the verdict when factorization is exact
            if (pivots_since_refresh_ > 0 || !etas_.empty()) {
                refresh();
                continue;
            }
            if (phase1) throw SimplexError("simplex: phase-1 objective unbounded");
            return LpStatus::Unbounded;
        }
        if (t_own <= tmin + kTieTol) {
            apply_step(q, dir, t_own, -1, false, u, nullptr);
            continue;
        }
        // leaving row among ties
        int lr = -1;
        bool lr_at_upper = false;
        double best_mag = -1.0;
        int best_col = -1;
        for (int i = 0; i < m_; ++i) {
            const double a = u[i];
            if (std::abs(a) <= opt_.pivot_tol) continue;
            const int B = basis_[i];
            const double delta = -dir * a;
            double cap;
            bool at_upper;
            if (delta > 0) {
                if (ub_[B] == kInf) continue;
                cap = (ub_[B] - xval_[B]) / delta;
                at_upper = true;
            } else {
                if (lb_[B] == -kInf) continue;
                cap = (xval_[B] - lb_[B]) / (-delta);
                at_upper = false;
            }
            if (cap < 0.0) cap = 0.0;
            // generous tie window: among near-minimal ratios, prefer the
            // largest pivot for numerical stability
            if (cap > tmin + 1e-7 * (1.0 + std::abs(tmin))) continue;
            const double mag = std::abs(a);
            const bool better = bland_ ? (best_col < 0 || B < best_col)
                                       : (mag > best_mag + kTieTol ||
                                          (mag > best_mag - kTieTol && B < best_col));
            if (better) {
                lr = i;
                lr_at_upper = at_upper;
                best_mag = mag;
                best_col = B;
            }
        }
        if (lr < 0) throw SimplexError("simplex: ratio test found no leaving row");
        if (std::abs(u[lr]) < kStabTol && (pivots_since_refresh_ > 0 || !etas_.empty())) {
            // small pivots are only trusted on an exact factorization
            refresh();
            continue;
        }
        apply_step(q, dir, tmin, lr, lr_at_upper, u, nullptr);
    }
}

double SimplexEngine::phase1_infeasibility() const {
    double s = 0.0;
    for (int j = nstruct_ + m_; j < ncols_; ++j) s += std::abs(xval_[j]);
    return s;
}

void SimplexEngine::drop_artificials() {
    const int art_start = nstruct_ + m_;
    for (int r = 0; r < m_; ++r) {
        const int b = basis_[r];
        if (b < art_start) continue;
        // pivot the artificial out on any usable column; degenerate step
        const std::vector<double> alpha = tableau_row(r);
        int q = -1;
        double best = opt_.pivot_tol;
        for (int j = 0; j < art_start; ++j) {
            if (status_[j] == St::Basic) continue;
            const double mag = std::abs(alpha[j]);
            if (mag > best) {
                best = mag;
                q = j;
            }
        }
        if (q >= 0) {
            xval_[b] = 0.0;
            status_[b] = St::AtLower;
            const std::vector<double> u = column_of(q);
            pivot_update(r, q, u, &alpha);
        }
        // else: redundant row, artificial stays basic pinned at zero
    }
    for (int j = art_start; j < ncols_; ++j) {
        lb_[j] = 0.0;
        ub_[j] = 0.0;
        if (status_[j] != St::Basic) {
            status_[j] = St::AtLower;
            xval_[j] = 0.0;
        }
    }
}

LpStatus SimplexEngine::solve() {
    // bound changes since the last solve may have pushed basics out of range;
    // the dual repair loop handles that before the primal cleanup
    bland_ = false;
    degen_streak_ = 0;
    return resolve_dual();
}

LpStatus SimplexEngine::resolve_dual() {
    long stall = 0;
    bool verified = false;  // conclusions are re-checked after a refactorization
    for (;;) {
        if (total_iters_ > opt_.max_iters)
            throw SimplexError("simplex: iteration limit exceeded in dual simplex");
        if (pivots_since_refresh_ >= opt_.refresh_interval) refresh();

        int r = -1;
        double worst = opt_.feas_tol;
        bool below = false;
        for (int i = 0; i < m_; ++i) {
            const int B = basis_[i];
            const double lo_v = lb_[B] - xval_[B];
            const double hi_v = xval_[B] - ub_[B];
            if (lo_v > worst) {
                worst = lo_v;
                r = i;
                below = true;
            }
            if (hi_v > worst) {
                worst = hi_v;
                r = i;
                below = false;
            }
        }
        if (r < 0) break;

        const double needed = below ? +1.0 : -1.0;  // required sign of basic change
        const std::vector<double> alpha = tableau_row(r);
        int q = -1, qdir = 0;
        double best_ratio = kInf, best_mag = -1.0;
        const bool bland_mode = stall > kBlandAfter;
        for (int j = 0; j < nstruct_ + m_; ++j) {
            if (status_[j] == St::Basic || lb_[j] == ub_[j]) continue;
            const double a = alpha[j];
            if (std::abs(a) <= opt_.pivot_tol) continue;
            int dir;
            if (status_[j] == St::Free) {
                dir = (needed * a > 0) ? -1 : +1;
            } else {
                dir = status_[j] == St::AtLower ? +1 : -1;
                if (needed * (-dir * a) <= 0) continue;
            }
            const double ratio = std::abs(d_[j]) / std::abs(a);
            bool better;
            if (bland_mode) {
                better = q < 0;
            } else {
                better = ratio < best_ratio - kTieTol ||
                         (ratio < best_ratio + kTieTol &&
                          (std::abs(a) > best_mag + kTieTol ||
                           (std::abs(a) > best_mag - kTieTol && q >= 0 && j < q)));
                if (q < 0) better = true;
            }
            if (better) {
                q = j;
                qdir = dir;
                best_ratio = ratio;
                best_mag = std::abs(a);
            }
            if (bland_mode && q >= 0) break;
        }
        if (q < 0) {
            // drift can produce both phantom violations and phantom dead ends;
            // only trust the verdict when the factorization is exact
            if (!verified) {
                refresh();
                verified = true;
                continue;
            }
            return LpStatus::Infeasible;
        }
        const std::vector<double> u = column_of(q);
        if (std::abs(u[r]) < kStabTol) {
            // small pivots are only trusted on an exact factorization
            if (pivots_since_refresh_ > 0 || !etas_.empty()) {
                refresh();
                continue;
            }
            if (std::abs(u[r]) < opt_.pivot_tol)
                throw SimplexError("simplex: inconsistent dual pivot");
        }
        const double t = worst / std::abs(u[r]);
        apply_step(q, qdir, t, r, /*leave_at_upper=*/!below, u, &alpha);
        verified = false;
        if (t <= kTieTol)
            ++stall;
        else
            stall = 0;
    }
    // cleanup: restore optimality if drift left a dual infeasibility
    bland_ = false;
    degen_streak_ = 0;
    return primal_loop(d_, false);
}

void SimplexEngine::recompute_basic_values() {
    std::vector<double> v(m_);
    for (int i = 0; i < m_; ++i) v[i] = rhs_orig_[i];
    for (int j = 0; j < ncols_; ++j) {
        if (status_[j] == St::Basic || xval_[j] == 0.0) continue;
        for (const auto& e : orig_cols_[j]) v[e.col] -= e.coef * xval_[j];
    }
    ftran(v);
    for (int i = 0; i < m_; ++i) xval_[basis_[i]] = v[i];
}

void SimplexEngine::recompute_reduced(const std::vector<double>& c, std::vector<double>& d) const {
    std::vector<double> y(m_);
    for (int i = 0; i < m_; ++i) y[i] = c[basis_[i]];
    btran(y);
    d.assign(ncols_, 0.0);
    for (int j = 0; j < ncols_; ++j) {
        if (status_[j] == St::Basic) continue;
        double s = c[j];
        for (const auto& e : orig_cols_[j]) s -= y[e.col] * e.coef;
        d[j] = s;
    }
}

void SimplexEngine::refresh() {
    factorize();
    recompute_basic_values();
    recompute_reduced(cost_, d_);
    if (phase1_needed_) recompute_reduced(c1_, d1_);
}

double SimplexEngine::max_row_residual() const {
    std::vector<double> act(m_, 0.0);
    std::vector<double> scale(m_, 1.0);
    for (int j = 0; j < ncols_; ++j) {
        for (const auto& e : orig_cols_[j]) {
            scale[e.col] = std::max(scale[e.col], std::abs(e.coef));
            if (xval_[j] != 0.0) act[e.col] += e.coef * xval_[j];
        }
    }
    double worst = 0.0;
    for (int i = 0; i < m_; ++i)
        worst = std::max(worst, std::abs(act[i] - rhs_orig_[i]) / scale[i]);
    return worst;
}

LpResult solve_lp(const MilpProblem& p, SimplexEngine::Options opt) {
    SimplexEngine eng(p, opt);
    const LpStatus st = eng.solve();
    LpResult res;
    res.status = st;
    if (st == LpStatus::Optimal) {
        eng.refresh();
        // refresh can surface drift; polish if needed
        if (eng.max_row_residual() > opt.feas_tol) {
            if (eng.resolve_dual() != LpStatus::Optimal)
                throw SimplexError("simplex: feasibility lost after refactorization");
            eng.refresh();
            if (eng.max_row_residual() > opt.feas_tol)
                throw SimplexError("simplex: residuals exceed tolerance");
        }
        res.values = eng.values();
        res.objective = p.objective_value(res.values);
    }
    return res;
}

}  // namespace clsc
