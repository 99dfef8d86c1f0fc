#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clsc/geo.hpp"
#include "clsc/instance.hpp"
#include "clsc/milp.hpp"

namespace clsc {

// Column index map for the circular-economy model. Per candidate site there
// is a collection-side and a reprocessing-side open decision; y/f run over
// hospital-site arcs, z/g over site-site arcs.
struct VariableLayout {
    int n_hospitals = 0;
    int n_sites = 0;
    int n_disposal = 0;
    int x0 = 0, w0 = 0, y0 = 0, z0 = 0, f0 = 0, g0 = 0, q0 = 0, r0 = 0, d0 = 0;
    int n_vars = 0;

    int x(int j) const { return x0 + j; }                       // open collection
    int w(int k) const { return w0 + k; }                       // open reprocessing
    int y(int i, int j) const { return y0 + i * n_sites + j; }  // hospital->site assignment
    int z(int j, int k) const { return z0 + j * n_sites + k; }  // site->site assignment
    int f(int i, int j) const { return f0 + i * n_sites + j; }  // hospital->site flow
    int g(int j, int k) const { return g0 + j * n_sites + k; }  // site->site flow
    int q(int j) const { return q0 + j; }                       // masks at collection centre
    int r(int k) const { return r0 + k; }                       // masks at reprocessing centre
    int d(int m) const { return d0 + m; }                       // masks at disposal site
};

enum class Objective { Z1, Z2, Z3 };

struct ObjectiveTriple {
    double z1 = 0.0;  // CAD
    double z2 = 0.0;  // kg CO2-equivalent (net advantage)
    double z3 = 0.0;  // job count, integral for integral solutions
};

struct Solution {
    std::vector<double> values;  // by VariableLayout
    ObjectiveTriple objectives;
};

struct BuildResult {
    MilpProblem problem;
    VariableLayout layout;
};

// Effective distance matrices for an instance: the explicit override when
// present, otherwise haversine over the coordinates.
std::pair<DistanceMatrix, DistanceMatrix> instance_distances(const Instance& inst);

VariableLayout layout_for(const Instance& inst);

// Objective coefficient rows over the layout; shared by the model builder
// and the epsilon-bound rows.
std::vector<LinTerm> objective_terms(const Instance& inst, const DistanceMatrix& d_hs,
                                     const DistanceMatrix& d_ss, const VariableLayout& layout,
                                     Objective which);

BuildResult build_circular_model(const Instance& inst, const DistanceMatrix& d_hs,
                                 const DistanceMatrix& d_ss, Objective objective,
                                 std::optional<double> eps2 = std::nullopt,
                                 std::optional<double> eps3 = std::nullopt);

// (Z1, Z2, Z3) recomputed directly from the model equations, independent of
// any solver or MilpProblem. Does not check feasibility.
ObjectiveTriple evaluate_solution(const Instance& inst, const DistanceMatrix& d_hs,
                                  const DistanceMatrix& d_ss, const VariableLayout& layout,
                                  const std::vector<double>& values);

struct FeasViolation {
    std::string family;  // e.g. "link_y", "budget", "flow_balance"
    std::string where;   // indices involved
    double residual = 0.0;
};

std::vector<FeasViolation> check_feasibility(const Instance& inst, const DistanceMatrix& d_hs,
                                             const DistanceMatrix& d_ss,
                                             const VariableLayout& layout,
                                             const std::vector<double>& values,
                                             double tol = 1e-6);

// id lists of facilities open in a solution (binary > 0.5)
std::vector<std::string> open_collection_ids(const Instance& inst, const VariableLayout& layout,
                                             const std::vector<double>& values);
std::vector<std::string> open_reprocessing_ids(const Instance& inst, const VariableLayout& layout,
                                               const std::vector<double>& values);

struct FlowTotals {
    double collected = 0.0;
    double reprocessed = 0.0;
    double disposed = 0.0;
};
FlowTotals flow_totals(const VariableLayout& layout, const std::vector<double>& values);

}  // namespace clsc
