#include "hybridbid/pipeline.hpp"

namespace hybridbid {

BiddingModel build_bidding_model(const Instance& instance, const FacilityBuildOptions& options) {
    BiddingModel bm;
    bm.facility = build_facility(instance, options);
    bm.robust = apply_robust_objective(bm.facility.model, bm.facility.vars, instance);
    return bm;
}

SolveOutcome solve_bidding(const Instance& instance, const SolverBackend& backend,
                           const SolveOptions& options) {
    BiddingModel bm = build_bidding_model(instance);
    SolveOutcome outcome;
    outcome.result = backend.solve(bm.facility.model, options);
    if (outcome.result.has_primal()) {
        outcome.solution = extract_solution(outcome.result, bm.facility, bm.robust, instance);
        std::vector<std::vector<bool>> unfavorable;
        unfavorable.reserve(outcome.solution.scenarios.size());
        for (const ScenarioSolution& sc : outcome.solution.scenarios) {
            InnerWorstCase wc = inner_worst_case(sc.dev, instance.prices.da_price,
                                                 instance.imbalance.kappa,
                                                 instance.imbalance.gamma);
            unfavorable.push_back(wc.unfavorable);
        }
        outcome.breakdown = recompute_profit(outcome.solution, instance, unfavorable);
    }
    return outcome;
}

}  // namespace hybridbid
