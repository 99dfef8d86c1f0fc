#pragma once

#include <iosfwd>

#include "clsc/pareto.hpp"

namespace clsc {

struct LinearBaselineParams {
    long jobs_low = 20;
    long jobs_high = 30;
};

struct ComparisonReport {
    ObjectiveTriple circular;
    double linear_z1 = 0.0;
    double linear_z2 = 0.0;
    long linear_z3_low = 0;
    long linear_z3_high = 0;
    double delta_z1 = 0.0;  // circular minus linear
    double delta_z2 = 0.0;
    double delta_z3_low = 0.0;
    double delta_z3_high = 0.0;
    FlowTotals flows;
};

// Take-make-dispose baseline: every used mask goes straight to the cheapest
// disposal site. No revenue, so the result is a loss (<= 0).
double linear_profit(const Instance& inst);
// Pure disposal footprint at the lowest-emission site, in the net-advantage
// sign convention (<= 0).
double linear_emissions(const Instance& inst);

struct InfeasiblePoint : std::runtime_error {
    std::vector<FeasViolation> violations;
    explicit InfeasiblePoint(std::vector<FeasViolation> v);
};

ComparisonReport compare(const Instance& inst, const DistanceMatrix& d_hs,
                         const DistanceMatrix& d_ss, const ParetoPoint& circular_point,
                         const LinearBaselineParams& lin = {});

// Text table in the circular-vs-linear comparison shape.
void render_report(const ComparisonReport& report, std::ostream& out);
void report_to_json(const ComparisonReport& report, std::ostream& out);

}  // namespace clsc
