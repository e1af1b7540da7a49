#include "hybridbid/model_ir.hpp"

#include <cmath>
#include <unordered_set>

namespace hybridbid {

VarRef ModelIR::add_variable(std::string name, double lower, double upper, VarKind kind) {
    if (name.empty()) {
        throw ValidationError("variable name must not be empty");
    }
    if (name_index_.count(name) > 0) {
        throw ValidationError("duplicate variable name: " + name);
    }
    VarRef ref{static_cast<std::int32_t>(variables_.size())};
    name_index_.emplace(name, ref.index);
    variables_.push_back(VariableDef{std::move(name), lower, upper, kind});
    objective_coeffs_.push_back(0.0);
    return ref;
}

VarRef ModelIR::add_continuous(std::string name, double lower, double upper) {
    return add_variable(std::move(name), lower, upper, VarKind::Continuous);
}

VarRef ModelIR::add_binary(std::string name) {
    return add_variable(std::move(name), 0.0, 1.0, VarKind::Binary);
}

void ModelIR::check_ref(VarRef ref) const {
    if (!ref.valid() || static_cast<std::size_t>(ref.index) >= variables_.size()) {
        throw ValidationError("variable reference is not registered in this model");
    }
}

void ModelIR::add_row(std::string name, std::vector<LinearTerm> terms, RowSense sense, double rhs) {
    std::vector<LinearTerm> merged;
    merged.reserve(terms.size());
    for (const LinearTerm& term : terms) {
        check_ref(term.var);
        bool found = false;
        for (LinearTerm& existing : merged) {
            if (existing.var == term.var) {
                existing.coeff += term.coeff;
                found = true;
                break;
            }
        }
        if (!found) {
            merged.push_back(term);
        }
    }
    rows_.push_back(RowDef{std::move(name), std::move(merged), sense, rhs});
}

void ModelIR::set_objective_coeff(VarRef var, double coeff) {
    check_ref(var);
    objective_coeffs_[var.index] = coeff;
}

void ModelIR::add_objective_coeff(VarRef var, double coeff) {
    check_ref(var);
    objective_coeffs_[var.index] += coeff;
}

std::optional<VarRef> ModelIR::find_variable(const std::string& name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) {
        return std::nullopt;
    }
    return VarRef{it->second};
}

const VariableDef& ModelIR::variable(VarRef ref) const {
    check_ref(ref);
    return variables_[ref.index];
}

double ModelIR::objective_value(const std::vector<double>& point) const {
    if (point.size() != variables_.size()) {
        throw MissingVariable("point covers " + std::to_string(point.size()) + " of " +
                              std::to_string(variables_.size()) + " variables");
    }
    double value = objective_constant_;
    for (std::size_t i = 0; i < point.size(); ++i) {
        value += objective_coeffs_[i] * point[i];
    }
    return value;
}

void ModelIR::validate() const {
    for (const VariableDef& var : variables_) {
        if (!(var.lower <= var.upper)) {
            throw ValidationError("variable " + var.name + " has lower > upper");
        }
        if (var.kind == VarKind::Binary && (var.lower < 0.0 || var.upper > 1.0)) {
            throw ValidationError("binary variable " + var.name + " has bounds outside [0,1]");
        }
        if (std::isnan(var.lower) || std::isnan(var.upper)) {
            throw ValidationError("variable " + var.name + " has NaN bounds");
        }
    }
    std::unordered_set<std::string> row_names;
    for (const RowDef& row : rows_) {
        if (!row_names.insert(row.name).second) {
            throw ValidationError("duplicate row name: " + row.name);
        }
        if (!std::isfinite(row.rhs)) {
            throw ValidationError("row " + row.name + " has non-finite rhs");
        }
        for (const LinearTerm& term : row.terms) {
            check_ref(term.var);
            if (!std::isfinite(term.coeff)) {
                throw ValidationError("row " + row.name + " has non-finite coefficient");
            }
        }
    }
    for (double coeff : objective_coeffs_) {
        if (!std::isfinite(coeff)) {
            throw ValidationError("objective has non-finite coefficient");
        }
    }
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::TimeLimit: return "time_limit";
        case SolveStatus::NumericFailure: return "numeric_failure";
    }
    return "unknown";
}

namespace {
constexpr double kFeasTol = 1e-6;
}

std::vector<ConstraintViolation> evaluate_constraints(const ModelIR& model,
                                                      const std::vector<double>& point) {
    if (point.size() != model.num_variables()) {
        throw MissingVariable("point covers " + std::to_string(point.size()) + " of " +
                              std::to_string(model.num_variables()) + " variables");
    }
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (std::isnan(point[i])) {
            throw MissingVariable("point has NaN for variable " + model.variables()[i].name);
        }
    }

    std::vector<ConstraintViolation> out;
    for (const RowDef& row : model.rows()) {
        double activity = 0.0;
        for (const LinearTerm& term : row.terms) {
            activity += term.coeff * point[term.var.index];
        }
        double violation = 0.0;
        switch (row.sense) {
            case RowSense::LessEqual: violation = activity - row.rhs; break;
            case RowSense::GreaterEqual: violation = row.rhs - activity; break;
            case RowSense::Equal: violation = std::abs(activity - row.rhs); break;
        }
        if (violation > kFeasTol) {
            out.push_back({row.name, violation});
        }
    }
    for (std::size_t i = 0; i < model.num_variables(); ++i) {
        const VariableDef& var = model.variables()[i];
        double value = point[i];
        double violation = std::max(var.lower - value, value - var.upper);
        if (violation > kFeasTol) {
            out.push_back({"bound:" + var.name, violation});
        }
        if (var.kind == VarKind::Binary) {
            double frac = std::abs(value - std::round(value));
            if (frac > kFeasTol) {
                out.push_back({"integrality:" + var.name, frac});
            }
        }
    }
    return out;
}

}  // namespace hybridbid
