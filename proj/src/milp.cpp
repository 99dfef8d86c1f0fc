#include "clsc/milp.hpp"

#include <cassert>
#include <ostream>

namespace clsc {

int MilpProblem::add_var(const std::string& name, double lo, double hi, bool is_integer) {
    lower.push_back(lo);
    upper.push_back(hi);
    integer.push_back(is_integer ? 1 : 0);
    var_names.push_back(name);
    return n_vars++;
}

void MilpProblem::add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense,
                                 double rhs) {
    for (const auto& t : terms) assert(t.col >= 0 && t.col < n_vars);
    constraints.push_back({std::move(name), std::move(terms), sense, rhs});
}

double MilpProblem::objective_value(const std::vector<double>& values) const {
    double v = obj_constant;
    for (const auto& t : objective) v += t.coef * values[t.col];
    return v;
}

double MilpProblem::activity(const Constraint& c, const std::vector<double>& values) const {
    double v = 0.0;
    for (const auto& t : c.terms) v += t.coef * values[t.col];
    return v;
}

namespace {

void write_expr(const std::vector<LinTerm>& terms, const std::vector<std::string>& names,
                std::ostream& out) {
    bool first = true;
    for (const auto& t : terms) {
        if (t.coef == 0.0) continue;
        double c = t.coef;
        if (first) {
            if (c < 0) out << "- ";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        c = c < 0 ? -c : c;
        if (c != 1.0) out << c << " ";
        out << names[t.col];
    }
    if (first) out << "0";
}

}  // namespace

void write_lp_format(const MilpProblem& p, std::ostream& out) {
    out << (p.obj_sense == ObjSense::Maximize ? "Maximize" : "Minimize") << "\n obj: ";
    write_expr(p.objective, p.var_names, out);
    out << "\nSubject To\n";
    for (const auto& c : p.constraints) {
        out << " " << c.name << ": ";
        write_expr(c.terms, p.var_names, out);
        switch (c.sense) {
            case Sense::LE: out << " <= "; break;
            case Sense::EQ: out << " = "; break;
            case Sense::GE: out << " >= "; break;
        }
        out << c.rhs << "\n";
    }
    out << "Bounds\n";
    for (int j = 0; j < p.n_vars; ++j) {
        out << " ";
        if (p.lower[j] == -kInf)
            out << "-inf";
        else
            out << p.lower[j];
        out << " <= " << p.var_names[j] << " <= ";
        if (p.upper[j] == kInf)
            out << "+inf";
        else
            out << p.upper[j];
        out << "\n";
    }
    out << "Binaries\n";
    for (int j = 0; j < p.n_vars; ++j)
        if (p.integer[j]) out << " " << p.var_names[j];
    out << "\nEnd\n";
}

}  // namespace clsc
