#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace clsc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LE, EQ, GE };
enum class ObjSense { Maximize, Minimize };

struct LinTerm {
    int col = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<LinTerm> terms;
    Sense sense = Sense::LE;
    double rhs = 0.0;
};

// Single-objective MILP in coefficient form. Binary variables carry
// bounds [0,1] with the integrality flag set.
struct MilpProblem {
    int n_vars = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<char> integer;  // 0/1 flag per column
    std::vector<std::string> var_names;
    std::vector<Constraint> constraints;
    ObjSense obj_sense = ObjSense::Maximize;
    std::vector<LinTerm> objective;
    double obj_constant = 0.0;

    int add_var(const std::string& name, double lo, double hi, bool is_integer);
    void add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense, double rhs);

    double objective_value(const std::vector<double>& values) const;
    // row activity (lhs) for a constraint
    double activity(const Constraint& c, const std::vector<double>& values) const;
};

// Debug dump in LP-style text, one constraint per line, for cross-checking
// against external solvers.
void write_lp_format(const MilpProblem& p, std::ostream& out);

}  // namespace clsc
