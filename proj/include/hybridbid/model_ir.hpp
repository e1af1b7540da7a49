#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hybridbid/errors.hpp"

namespace hybridbid {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Opaque handle into a ModelIR's variable table.
struct VarRef {
    std::int32_t index = -1;
    bool valid() const { return index >= 0; }
    friend bool operator==(VarRef a, VarRef b) { return a.index == b.index; }
};

enum class VarKind { Continuous, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LinearTerm {
    VarRef var;
    double coeff = 0.0;
};

struct VariableDef {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    VarKind kind = VarKind::Continuous;
};

struct RowDef {
    std::string name;
    std::vector<LinearTerm> terms;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
};

/// Solver-agnostic linear model.  The objective is always maximized.
class ModelIR {
  public:
    VarRef add_continuous(std::string name, double lower, double upper);
    VarRef add_binary(std::string name);

    /// Duplicate variables within `terms` are merged.
    void add_row(std::string name, std::vector<LinearTerm> terms, RowSense sense, double rhs);

    void set_objective_coeff(VarRef var, double coeff);
    void add_objective_coeff(VarRef var, double coeff);
    void set_objective_constant(double value) { objective_constant_ = value; }

    const std::vector<VariableDef>& variables() const { return variables_; }
    const std::vector<RowDef>& rows() const { return rows_; }
    const std::vector<double>& objective_coeffs() const { return objective_coeffs_; }
    double objective_constant() const { return objective_constant_; }
    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_rows() const { return rows_.size(); }

    std::optional<VarRef> find_variable(const std::string& name) const;
    const VariableDef& variable(VarRef ref) const;

    /// Objective evaluated at a full point (indexed by variable).
    double objective_value(const std::vector<double>& point) const;

    /// Throws ValidationError on duplicate names, inverted bounds, binary
    /// bounds outside [0,1], or non-finite data.
    void validate() const;

  private:
    VarRef add_variable(std::string name, double lower, double upper, VarKind kind);
    void check_ref(VarRef ref) const;

    std::vector<VariableDef> variables_;
    std::vector<RowDef> rows_;
    std::vector<double> objective_coeffs_;
    double objective_constant_ = 0.0;
    std::unordered_map<std::string, std::int32_t> name_index_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, NumericFailure };

std::string to_string(SolveStatus status);

struct SolveOptions {
    double mip_gap_tol = 1e-6;
    double time_limit_s = 600.0;
    int threads = 1;
};

struct SolveResult {
    SolveStatus status = SolveStatus::NumericFailure;
    double objective_value = std::numeric_limits<double>::quiet_NaN();
    /// One value per variable; empty unless an incumbent exists.
    std::vector<double> primal;
    double mip_gap = 0.0;
    double wall_time_s = 0.0;
    std::string log_excerpt;

    bool has_primal() const { return !primal.empty(); }
};

struct ConstraintViolation {
    std::string name;
    double violation = 0.0;
};

/// All rows, bounds, and integrality conditions violated by more than 1e-6
/// at `point`.  An empty result means the point is feasible.
std::vector<ConstraintViolation> evaluate_constraints(const ModelIR& model,
                                                      const std::vector<double>& point);

}  // namespace hybridbid
