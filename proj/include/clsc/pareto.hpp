#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "clsc/bnb.hpp"
#include "clsc/formulation.hpp"

namespace clsc {

struct ParetoPoint {
    double eps2 = 0.0;  // kg CO2 lower bound
    double eps3 = 0.0;  // job lower bound
    ObjectiveTriple triple;
    std::vector<std::string> open_collection;
    std::vector<std::string> open_reprocessing;
    Solution solution;
};

// Row i = all three objective values at the solution maximizing objective i
// alone; the diagonal is each objective's individual optimum.
struct PayoffTable {
    std::array<ObjectiveTriple, 3> rows;
    std::array<Solution, 3> solutions;

    double z2_min() const;
    double z2_max() const;
    double z3_min() const;
    double z3_max() const;
};

struct InfeasibleObjective : std::runtime_error {
    Objective objective;
    InfeasibleObjective(Objective o, const std::string& msg)
        : std::runtime_error(msg), objective(o) {}
};

PayoffTable payoff_table(const Instance& inst, const DistanceMatrix& d_hs,
                         const DistanceMatrix& d_ss, const SolveOptions& opts = {});

struct SweepResult {
    std::vector<ParetoPoint> points;                     // ordered by (eps2, eps3)
    std::vector<std::pair<double, double>> infeasible;   // skipped grid cells
};

// Even (n2 x n3) grid over the payoff-table ranges of Z2 and Z3, inclusive
// endpoints; each cell maximizes Z1 subject to Z2 >= eps2, Z3 >= eps3.
SweepResult epsilon_sweep(const Instance& inst, const DistanceMatrix& d_hs,
                          const DistanceMatrix& d_ss, int n2, int n3,
                          const SolveOptions& opts = {});

// Strict dominance only; equal triples are all retained, order preserved.
std::vector<ParetoPoint> filter_nondominated(const std::vector<ParetoPoint>& points);

void export_front_csv(const std::vector<ParetoPoint>& points, std::ostream& out);
void export_front_json(const std::vector<ParetoPoint>& points, std::ostream& out);
std::vector<ParetoPoint> import_front_json(std::istream& in);

}  // namespace clsc
