#pragma once

#include <optional>

#include "hybridbid/facility.hpp"
#include "hybridbid/instance.hpp"
#include "hybridbid/oracle.hpp"
#include "hybridbid/robust.hpp"
#include "hybridbid/solution.hpp"
#include "hybridbid/solver.hpp"

namespace hybridbid {

/// Facility constraints plus the robust objective, ready to solve.
struct BiddingModel {
    FacilityModel facility;
    RobustVars robust;
};

BiddingModel build_bidding_model(const Instance& instance,
                                 const FacilityBuildOptions& options = {});

struct SolveOutcome {
    SolveResult result;
    Solution solution;       // valid when result carries an incumbent
    ProfitBreakdown breakdown;  // via the analytic worst case
};

/// build -> solve -> extract -> recompute profit with the analytic worst
/// case.  Throws on backend failure; non-optimal statuses are returned.
SolveOutcome solve_bidding(const Instance& instance, const SolverBackend& backend,
                           const SolveOptions& options = {});

}  // namespace hybridbid
