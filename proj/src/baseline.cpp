#include "clsc/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "json.hpp"

namespace clsc {

using json = nlohmann::ordered_json;

InfeasiblePoint::InfeasiblePoint(std::vector<FeasViolation> v)
    : std::runtime_error([&v] {
          std::string msg = "circular point is infeasible:";
          for (const auto& viol : v)
              msg += "\n  " + viol.family + "[" + viol.where + "] residual " +
                     std::to_string(viol.residual);
          return msg;
      }()),
      violations(std::move(v)) {}

double linear_profit(const Instance& inst) {
    double min_cd = kInf;
    for (const auto& d : inst.disposal_sites) min_cd = std::min(min_cd, d.unit_cost);
    if (inst.disposal_sites.empty()) min_cd = 0.0;
    return -inst.total_usage() * min_cd;
}

double linear_emissions(const Instance& inst) {
    double min_ed = kInf;
    for (const auto& d : inst.disposal_sites) min_ed = std::min(min_ed, d.unit_emission);
    if (inst.disposal_sites.empty()) min_ed = 0.0;
    return -inst.total_usage() * min_ed;
}

ComparisonReport compare(const Instance& inst, const DistanceMatrix& d_hs,
                         const DistanceMatrix& d_ss, const ParetoPoint& circular_point,
                         const LinearBaselineParams& lin) {
    if (lin.jobs_low > lin.jobs_high)
        throw std::invalid_argument("compare: jobs_low must be <= jobs_high");
    const VariableLayout layout = layout_for(inst);
    auto violations =
        check_feasibility(inst, d_hs, d_ss, layout, circular_point.solution.values);
    if (!violations.empty()) throw InfeasiblePoint(std::move(violations));

    ComparisonReport rep;
    rep.circular = evaluate_solution(inst, d_hs, d_ss, layout, circular_point.solution.values);
    rep.linear_z1 = linear_profit(inst);
    rep.linear_z2 = linear_emissions(inst);
    rep.linear_z3_low = lin.jobs_low;
    rep.linear_z3_high = lin.jobs_high;
    rep.delta_z1 = rep.circular.z1 - rep.linear_z1;
    rep.delta_z2 = rep.circular.z2 - rep.linear_z2;
    rep.delta_z3_low = rep.circular.z3 - static_cast<double>(lin.jobs_low);
    rep.delta_z3_high = rep.circular.z3 - static_cast<double>(lin.jobs_high);

    const FlowTotals ft = flow_totals(layout, circular_point.solution.values);
    rep.flows.collected = ft.collected;
    rep.flows.reprocessed = ft.reprocessed;
    rep.flows.disposed = ft.collected - ft.reprocessed;  // conservation, exact
    return rep;
}

void render_report(const ComparisonReport& rep, std::ostream& out) {
    out << std::fixed << std::setprecision(6);
    out << "Model Type        Z1 (CAD)              Z2 (kg CO2)           Z3 (jobs)\n";
    out << "Circular Economy  " << std::setw(20) << rep.circular.z1 << "  " << std::setw(20)
        << rep.circular.z2 << "  " << std::llround(rep.circular.z3) << "\n";
    out << "Linear Economy    " << std::setw(20) << rep.linear_z1 << "  " << std::setw(20)
        << rep.linear_z2 << "  " << rep.linear_z3_low << "-" << rep.linear_z3_high << "\n";
    out << "\n";
    out << "Flows (masks): collected=" << rep.flows.collected
        << " reprocessed=" << rep.flows.reprocessed << " disposed=" << rep.flows.disposed << "\n";
}

void report_to_json(const ComparisonReport& rep, std::ostream& out) {
    json doc;
    doc["circular"] = {{"z1", rep.circular.z1}, {"z2", rep.circular.z2}, {"z3", rep.circular.z3}};
    doc["linear"] = {{"z1", rep.linear_z1},
                     {"z2", rep.linear_z2},
                     {"z3_low", rep.linear_z3_low},
                     {"z3_high", rep.linear_z3_high}};
    doc["deltas"] = {{"z1", rep.delta_z1},
                     {"z2", rep.delta_z2},
                     {"z3_low", rep.delta_z3_low},
                     {"z3_high", rep.delta_z3_high}};
    doc["flows"] = {{"collected", rep.flows.collected},
                    {"reprocessed", rep.flows.reprocessed},
                    {"disposed", rep.flows.disposed}};
    out << doc.dump(2) << "\n";
}

}  // namespace clsc
