#include "clsc/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace clsc {

namespace {

std::vector<int> binary_columns(const MilpProblem& p) {
    std::vector<int> cols;
    for (int j = 0; j < p.n_vars; ++j) {
        if (!p.integer[j]) continue;
        if (p.lower[j] < -1e-9 || p.upper[j] > 1.0 + 1e-9)
            throw std::invalid_argument("solve_milp: only binary integer variables are supported");
        cols.push_back(j);
    }
    return cols;
}

struct Node {
    double key;  // bound in maximization space
    long id;
    std::vector<std::pair<int, int>> fixings;  // (col, 0/1)
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.key != b.key) return a.key < b.key;  // max-heap on bound
        return a.id > b.id;                        // FIFO among ties
    }
};

}  // namespace

MilpResult solve_milp(const MilpProblem& p, const SolveOptions& opts) {
    if (p.n_vars < 1) throw std::invalid_argument("solve_milp: empty problem");
    const auto t_start = std::chrono::steady_clock::now();
    const double sgn = p.obj_sense == ObjSense::Maximize ? 1.0 : -1.0;
    const std::vector<int> bins = binary_columns(p);

    // objective entirely on binary columns with integer coefficients:
    // node bounds can be rounded to the nearest attainable value
    bool integral_obj = p.obj_constant == std::floor(p.obj_constant);
    for (const auto& t : p.objective) {
        if (!p.integer[t.col] || t.coef != std::floor(t.coef)) {
            integral_obj = false;
            break;
        }
    }
    const auto tighten = [&](double key) {
        return integral_obj ? std::floor(key + 1e-9) : key;
    };

    MilpResult res;
    SimplexEngine eng(p);
    long iters_prior = 0, repairs_prior = 0;  // from engines replaced after breakdowns
    const auto stash_stats = [&](const SimplexEngine& e) {
        iters_prior += e.iterations();
        repairs_prior += e.basis_repairs();
    };
    const auto finalize_stats = [&] {
        res.lp_iterations = iters_prior + eng.iterations();
        res.basis_repairs = repairs_prior + eng.basis_repairs();
    };
    const LpStatus root = eng.solve();
    if (root == LpStatus::Infeasible) {
        res.status = MilpStatus::Infeasible;
        res.nodes_explored = 1;
        finalize_stats();
        return res;
    }
    if (root == LpStatus::Unbounded)
        throw std::runtime_error("solve_milp: LP relaxation is unbounded");

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0;
    open.push({tighten(sgn * eng.objective()), next_id++, {}});

    bool have_inc = false;
    double inc_key = -kInf;  // sgn * objective
    std::vector<double> inc_values;

    if (opts.dive_heuristic) {
        // round-and-fix dive from the root relaxation; a feasible landing
        // spot becomes the initial incumbent and prunes the search early
        try {
            std::vector<int> dived;
            LpStatus st = LpStatus::Optimal;
            for (;;) {
                const std::vector<double> vals = eng.values();
                int col = -1;
                double frac = opts.integrality_tol;
                for (int c : bins) {
                    const double v = vals[c];
                    const double fr = std::min(v - std::floor(v), std::ceil(v) - v);
                    if (fr > frac + 1e-12) {
                        frac = fr;
                        col = c;
                    }
                }
                if (col < 0) break;  // integral
                const double fix = vals[col] >= 0.5 ? 1.0 : 0.0;
                eng.set_bounds(col, fix, fix);
                dived.push_back(col);
                st = eng.resolve_dual();
                if (st != LpStatus::Optimal) break;
            }
            if (st == LpStatus::Optimal) {
                eng.refresh();
                const std::vector<double> clean = eng.values();
                bool integral = true;
                for (int c : bins) {
                    const double v = clean[c];
                    if (std::min(v - std::floor(v), std::ceil(v) - v) >
                        10 * opts.integrality_tol) {
                        integral = false;
                        break;
                    }
                }
                if (integral) {
                    have_inc = true;
                    inc_key = sgn * p.objective_value(clean);
                    inc_values = clean;
                }
            }
            for (int c : dived) eng.set_bounds(c, p.lower[c], p.upper[c]);
            if (!dived.empty() && eng.resolve_dual() != LpStatus::Optimal)
                throw SimplexError("dive restore failed");
        } catch (const SimplexError&) {
            SimplexEngine fresh(p);
            if (fresh.solve() != LpStatus::Optimal)
                throw std::runtime_error("solve_milp: root re-solve failed");
            stash_stats(eng);
            eng = std::move(fresh);
        }
    }
    double max_pruned_key = -kInf;
    long nodes = 0;
    bool node_limit_hit = false, time_limit_hit = false;

    std::vector<std::pair<int, int>> current;  // fixings applied to the engine

    auto apply_fixings = [&](const std::vector<std::pair<int, int>>& want) {
        std::size_t common = 0;
        while (common < current.size() && common < want.size() && current[common] == want[common])
            ++common;
        for (std::size_t i = common; i < current.size(); ++i)
            eng.set_bounds(current[i].first, p.lower[current[i].first],
                           p.upper[current[i].first]);
        for (std::size_t i = common; i < want.size(); ++i)
            eng.set_bounds(want[i].first, static_cast<double>(want[i].second),
                           static_cast<double>(want[i].second));
        current = want;
    };

    double top_key_at_stop = -kInf;
    while (!open.empty()) {
        const double gap_eps =
            opts.relative_gap * std::max(1.0, std::abs(have_inc ? inc_key : 0.0));
        Node node = open.top();
        if (have_inc && node.key <= inc_key + gap_eps) {
            top_key_at_stop = node.key;
            break;  // best-bound order: every open node is within the gap
        }
        open.pop();
        if (nodes >= opts.node_limit) {
            node_limit_hit = true;
            top_key_at_stop = node.key;
            break;
        }
        if (opts.time_limit_seconds) {
            const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                            t_start)
                                  .count();
            if (el > *opts.time_limit_seconds) {
                time_limit_hit = true;
                top_key_at_stop = node.key;
                break;
            }
        }
        ++nodes;

        LpStatus st;
        try {
            apply_fixings(node.fixings);
            st = node.fixings.empty() && nodes == 1 ? LpStatus::Optimal : eng.resolve_dual();
        } catch (const SimplexError&) {
            // warm path broke down; rebuild cold with the node's bounds
            MilpProblem sub = p;
            for (const auto& [col, val] : node.fixings)
                sub.lower[col] = sub.upper[col] = static_cast<double>(val);
            SimplexEngine fresh(sub);
            st = fresh.solve();
            stash_stats(eng);
            eng = std::move(fresh);
            current = node.fixings;
        }
        if (st == LpStatus::Infeasible) continue;
        if (st == LpStatus::Unbounded)
            throw std::runtime_error("solve_milp: node LP unbounded");

        const double key = tighten(sgn * eng.objective());
        if (have_inc && key <= inc_key + gap_eps) {
            max_pruned_key = std::max(max_pruned_key, key);
            continue;
        }

        const std::vector<double> vals = eng.values();
        int branch_col = -1;
        double branch_frac = opts.integrality_tol;
        for (int col : bins) {
            const double v = vals[col];
            const double fr = std::min(v - std::floor(v), std::ceil(v) - v);
            if (fr > branch_frac + 1e-12) {
                branch_frac = fr;
                branch_col = col;
            }
        }
        if (branch_col < 0) {
            // integral: candidate incumbent (refactorize before accepting)
            eng.refresh();
            const std::vector<double> clean = eng.values();
            bool still_integral = true;
            for (int col : bins) {
                const double v = clean[col];
                if (std::min(v - std::floor(v), std::ceil(v) - v) > 10 * opts.integrality_tol) {
                    still_integral = false;
                    break;
                }
            }
            const double clean_key = sgn * p.objective_value(clean);
            if (still_integral && (!have_inc || clean_key > inc_key)) {
                have_inc = true;
                inc_key = clean_key;
                inc_values = clean;
            }
            continue;
        }
        auto down = node.fixings;
        down.emplace_back(branch_col, 0);
        auto up = node.fixings;
        up.emplace_back(branch_col, 1);
        open.push({key, next_id++, std::move(down)});
        open.push({key, next_id++, std::move(up)});
    }

    res.nodes_explored = std::max<long>(nodes, 1);
    finalize_stats();
    if (!have_inc) {
        res.status = node_limit_hit ? MilpStatus::NodeLimit
                                    : (time_limit_hit ? MilpStatus::GapLimit
                                                      : MilpStatus::Infeasible);
        return res;
    }
    res.values = inc_values;
    res.objective = sgn * inc_key;
    double bb_key = std::max(inc_key, max_pruned_key);
    if (top_key_at_stop > -kInf) bb_key = std::max(bb_key, top_key_at_stop);
    res.best_bound = sgn * bb_key;
    res.status = node_limit_hit ? MilpStatus::NodeLimit
                                : (time_limit_hit ? MilpStatus::GapLimit : MilpStatus::Optimal);
    return res;
}

namespace {

// per-row data for the cheap infeasibility prefilter in the oracle
struct RowFilter {
    std::vector<std::pair<int, double>> bin_terms;  // (binary slot, coef)
    double cont_min = 0.0;
    double cont_max = 0.0;
    Sense sense = Sense::LE;
    double rhs = 0.0;
};

}  // namespace

MilpResult enumerate_oracle(const MilpProblem& p) {
    const std::vector<int> bins = binary_columns(p);
    const int nb = static_cast<int>(bins.size());
    if (nb > 22) throw std::invalid_argument("enumerate_oracle: more than 22 binary variables");
    const double sgn = p.obj_sense == ObjSense::Maximize ? 1.0 : -1.0;

    std::vector<int> slot_of(p.n_vars, -1);
    for (int s = 0; s < nb; ++s) slot_of[bins[s]] = s;

    std::vector<RowFilter> filters;
    filters.reserve(p.constraints.size());
    for (const auto& c : p.constraints) {
        RowFilter f;
        f.sense = c.sense;
        f.rhs = c.rhs;
        for (const auto& t : c.terms) {
            if (slot_of[t.col] >= 0) {
                f.bin_terms.emplace_back(slot_of[t.col], t.coef);
            } else {
                const double lo = p.lower[t.col], hi = p.upper[t.col];
                f.cont_min += t.coef * (t.coef >= 0 ? lo : hi);
                f.cont_max += t.coef * (t.coef >= 0 ? hi : lo);
            }
        }
        filters.push_back(std::move(f));
    }

    SimplexEngine eng(p);
    std::vector<int> assign(nb, 0);
    for (int s = 0; s < nb; ++s) eng.set_bounds(bins[s], 0.0, 0.0);

    MilpResult res;
    res.status = MilpStatus::Infeasible;
    bool have_best = false;
    double best_key = -kInf;
    bool first_solve = true;

    const std::uint64_t total = 1ULL << nb;
    for (std::uint64_t step = 0; step < total; ++step) {
        if (step > 0) {
            // Gray code: flip exactly one binary per step
            const std::uint64_t g_prev = (step - 1) ^ ((step - 1) >> 1);
            const std::uint64_t g_cur = step ^ (step >> 1);
            const int bit = __builtin_ctzll(g_prev ^ g_cur);
            assign[bit] ^= 1;
            eng.set_bounds(bins[bit], assign[bit], assign[bit]);
        }

        bool provably_infeasible = false;
        for (const auto& f : filters) {
            double b = 0.0;
            for (const auto& [slot, coef] : f.bin_terms) b += coef * assign[slot];
            const double lo = b + f.cont_min, hi = b + f.cont_max;
            if ((f.sense != Sense::GE && lo > f.rhs + 1e-9) ||
                (f.sense != Sense::LE && hi < f.rhs - 1e-9)) {
                provably_infeasible = true;
                break;
            }
        }
        if (provably_infeasible) continue;

        LpStatus st;
        try {
            st = first_solve ? eng.solve() : eng.resolve_dual();
        } catch (const SimplexError&) {
            MilpProblem sub = p;
            for (int s = 0; s < nb; ++s)
                sub.lower[bins[s]] = sub.upper[bins[s]] = static_cast<double>(assign[s]);
            SimplexEngine fresh(sub);
            st = fresh.solve();
            eng = std::move(fresh);
        }
        first_solve = false;
        if (st != LpStatus::Optimal) continue;
        double key = sgn * eng.objective();
        if (!have_best || key > best_key + 1e-12) {
            // candidate improvement: refactorize before trusting the numbers
            eng.refresh();
            if (eng.resolve_dual() != LpStatus::Optimal) continue;
            key = sgn * eng.objective();
            if (have_best && key <= best_key + 1e-12) continue;
            have_best = true;
            best_key = key;
            res.values = eng.values();
            // pin the enumerated binaries exactly
            for (int s = 0; s < nb; ++s) res.values[bins[s]] = assign[s];
        }
    }
    res.nodes_explored = static_cast<long>(total);
    if (have_best) {
        res.status = MilpStatus::Optimal;
        res.objective = p.objective_value(res.values);
        res.best_bound = res.objective;
    }
    return res;
}

}  // namespace clsc
