#pragma once

#include <vector>

#include "hybridbid/instance.hpp"
#include "hybridbid/solution.hpp"

namespace hybridbid {

/// Profit decomposition evaluated directly from primitive dispatch values.
struct ProfitBreakdown {
    double da_revenue = 0.0;
    double hydrogen_revenue_expected = 0.0;
    double water_cost_expected = 0.0;
    double imbalance_revenue_expected = 0.0;
    double total = 0.0;
};

/// Evaluates the original profit expression from first principles, given a
/// per-(t,s) direction flag: b=false settles the deviation favorably
/// (lambda*d + lambda*kappa*|d|), b=true unfavorably (minus the kappa term).
ProfitBreakdown recompute_profit(const Solution& solution, const Instance& instance,
                                 const std::vector<std::vector<bool>>& unfavorable);

/// First-stage grid point of the exhaustive micro-instance search.
struct TinyFirstStage {
    std::vector<double> ch_da, dis_da, el_da;
    std::vector<int> x_el_on;
};

struct TinyScenarioDispatch {
    std::vector<double> res_used, ch_net, dis_net, el_power;
};

struct TinyEnumeration {
    bool feasible = false;
    double best_profit = 0.0;
    long long nodes = 0;
    TinyFirstStage first_stage;
    std::vector<TinyScenarioDispatch> recourse;
};

/// Exhaustively grids all first- and second-stage decisions of a micro
/// instance (n_periods <= 3, scenarios <= 2) at `grid_step`, applies every
/// facility constraint as an explicit check, and evaluates the profit with
/// the analytic worst case for the robust term.  Throws TooLarge when the
/// number of explored leaves exceeds `node_cap`.
TinyEnumeration enumerate_tiny(const Instance& instance, double grid_step = 0.5,
                               long long node_cap = 10'000'000);

/// Documented Lipschitz envelope for the enumeration bracket: moving any
/// one gridded decision by at most grid_step changes the profit by at most
/// L = dt*2*max|lambda|*(1+kappa) + (lambda_H + lambda_W*eta_w)*alpha/theta,
/// and the MILP optimum can exceed the grid optimum by at most C*grid_step
/// with C = L * (2T + 6TS); the 2TS margin covers battery state-of-energy
/// boundary unwinding when an off-grid optimum is projected onto the grid.
double tiny_lipschitz_constant(const Instance& instance);

}  // namespace hybridbid
