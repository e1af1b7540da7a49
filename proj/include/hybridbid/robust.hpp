#pragma once

#include <vector>

#include "hybridbid/facility.hpp"
#include "hybridbid/instance.hpp"
#include "hybridbid/model_ir.hpp"

namespace hybridbid {

struct Solution;  // solution.hpp

/// Dual and KKT variables of the robust imbalance-direction subproblem.
/// Matrices are indexed [s][t]; omega is per scenario.
struct RobustVars {
    std::vector<VarRef> omega;                 // budget dual, >= 0
    std::vector<std::vector<VarRef>> z;        // per-hour dual, >= 0
    std::vector<std::vector<VarRef>> y;        // |d| linearization
    std::vector<std::vector<VarRef>> mu1;      // multiplier of y >= d
    std::vector<std::vector<VarRef>> mu2;      // multiplier of y >= -d
    std::vector<std::vector<VarRef>> xd1;      // complementarity switch for y = d
    std::vector<std::vector<VarRef>> xd2;      // complementarity switch for y = -d
    double big_m_dev = 0.0;
    double big_m_mu = 1.0;
};

/// Sets the dualized robust objective on a facility model and adds the
/// dual-feasibility, absolute-value envelope, and complementarity rows.
RobustVars apply_robust_objective(ModelIR& model, const VariableRegistry& vars,
                                  const Instance& instance);

struct InnerWorstCase {
    double value = 0.0;           // worst-case signed imbalance weight (€)
    std::vector<bool> unfavorable;  // hours assigned the unfavorable direction
};

/// Analytic worst case of the imbalance-direction subproblem for one
/// scenario: the adversary flips the sign of the kappa term on up to
/// `gamma` hours, choosing the largest terms lambda*kappa*|d| first (ties
/// go to the lowest hour index).
InnerWorstCase inner_worst_case(const std::vector<double>& deviations,
                                const std::vector<double>& da_price, double kappa, int gamma);

struct DualityFinding {
    int scenario = 0;
    double magnitude = 0.0;
    std::string detail;
};

struct DualityReport {
    std::vector<DualityFinding> findings;
    bool ok() const { return findings.empty(); }
};

/// Checks, per scenario, that the robust contribution embedded in a solved
/// objective equals minus the analytic worst case, and that y == |d|.
/// `tol` is relative.
DualityReport verify_duality(const Solution& solution, const Instance& instance, double tol);

/// Throws DualityGap on the first failed finding.
void require_duality(const Solution& solution, const Instance& instance, double tol);

/// Per-scenario system-direction sequences consistent with the analytic
/// worst case of a solved schedule (used for ex-post self-consistency).
std::vector<DirectionSequence> worst_case_directions(const Solution& solution,
                                                     const Instance& instance);

}  // namespace hybridbid
