#include "hybridbid/lp_writer.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

namespace hybridbid {

namespace {

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string sanitize(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_');
    }
    while (!out.empty() && out.back() == '_') {
        out.pop_back();
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) {
        out.insert(out.begin(), 'v');
    }
    return out;
}

void append_term(std::string& line, double coeff, const std::string& name, bool first) {
    if (coeff == 0.0) {
        return;
    }
    double mag = std::abs(coeff);
    if (first) {
        line += coeff < 0.0 ? "-" : "";
    } else {
        line += coeff < 0.0 ? " - " : " + ";
    }
    if (mag != 1.0) {
        line += format_number(mag);
        line += ' ';
    }
    line += name;
}

}  // namespace

std::vector<std::string> lp_variable_names(const ModelIR& model) {
    std::vector<std::string> names;
    names.reserve(model.num_variables());
    std::unordered_set<std::string> seen;
    for (const VariableDef& var : model.variables()) {
        std::string candidate = sanitize(var.name);
        if (!seen.insert(candidate).second) {
            candidate += "_i" + std::to_string(names.size());
            seen.insert(candidate);
        }
        names.push_back(std::move(candidate));
    }
    return names;
}

void write_lp(const ModelIR& model, std::ostream& out) {
    const std::vector<std::string> names = lp_variable_names(model);

    out << "Maximize\n obj:";
    bool first = true;
    int on_line = 0;
    std::string chunk;
    for (std::size_t i = 0; i < model.num_variables(); ++i) {
        double coeff = model.objective_coeffs()[i];
        if (coeff == 0.0) {
            continue;
        }
        chunk.clear();
        append_term(chunk, coeff, names[i], first);
        first = false;
        out << ' ' << chunk;
        if (++on_line >= 8) {
            out << "\n  ";
            on_line = 0;
        }
    }
    if (first) {
        out << " 0 " << (model.num_variables() > 0 ? names[0] : std::string("x"));
    }
    out << "\nSubject To\n";

    std::unordered_set<std::string> row_seen;
    for (std::size_t r = 0; r < model.rows().size(); ++r) {
        const RowDef& row = model.rows()[r];
        std::string label = sanitize(row.name);
        if (!row_seen.insert(label).second) {
            label += "_i" + std::to_string(r);
        }
        std::string line = " " + label + ":";
        bool row_first = true;
        for (const LinearTerm& term : row.terms) {
            if (term.coeff == 0.0) {
                continue;
            }
            line += ' ';
            std::string piece;
            append_term(piece, term.coeff, names[term.var.index], row_first);
            row_first = false;
            line += piece;
        }
        if (row_first) {
            line += " 0 " + (model.num_variables() > 0 ? names[0] : std::string("x"));
        }
        switch (row.sense) {
            case RowSense::LessEqual: line += " <= "; break;
            case RowSense::Equal: line += " = "; break;
            case RowSense::GreaterEqual: line += " >= "; break;
        }
        line += format_number(row.rhs);
        out << line << '\n';
    }

    out << "Bounds\n";
    for (std::size_t i = 0; i < model.num_variables(); ++i) {
        const VariableDef& var = model.variables()[i];
        double lo = var.lower;
        double hi = var.upper;
        if (var.kind == VarKind::Binary) {
            if (lo > 0.0 || hi < 1.0) {
                out << ' ' << format_number(lo) << " <= " << names[i] << " <= "
                    << format_number(hi) << '\n';
            }
            continue;
        }
        if (lo == 0.0 && hi == kInf) {
            continue;  // LP default
        }
        if (lo == -kInf && hi == kInf) {
            out << ' ' << names[i] << " free\n";
        } else if (lo == hi) {
            out << ' ' << names[i] << " = " << format_number(lo) << '\n';
        } else if (lo == -kInf) {
            out << " -1e+30 <= " << names[i] << " <= " << format_number(hi) << '\n';
        } else if (hi == kInf) {
            out << ' ' << names[i] << " >= " << format_number(lo) << '\n';
        } else {
            out << ' ' << format_number(lo) << " <= " << names[i] << " <= "
                << format_number(hi) << '\n';
        }
    }

    bool any_binary = false;
    for (const VariableDef& var : model.variables()) {
        if (var.kind == VarKind::Binary) {
            any_binary = true;
            break;
        }
    }
    if (any_binary) {
        out << "Binaries\n";
        int count = 0;
        for (std::size_t i = 0; i < model.num_variables(); ++i) {
            if (model.variables()[i].kind != VarKind::Binary) {
                continue;
            }
            out << ' ' << names[i];
            if (++count % 10 == 0) {
                out << '\n';
            }
        }
        if (count % 10 != 0) {
            out << '\n';
        }
    }
    out << "End\n";
}

std::string write_lp_string(const ModelIR& model) {
    std::ostringstream oss;
    write_lp(model, oss);
    return oss.str();
}

}  // namespace hybridbid
