#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hybridbid/instance.hpp"
#include "hybridbid/solver.hpp"

namespace testutil {

inline const hybridbid::SolverBackend& backend() {
    static hybridbid::HighsProcessBackend instance;
    return instance;
}

inline bool approx_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// T-period, S-scenario instance with a 1 MW / 1 MWh battery and a 1 MW
/// electrolyzer; series default to flat values and can be adjusted.
inline hybridbid::Instance small_instance(int T, int S) {
    hybridbid::Instance inst;
    inst.time.n_periods = T;
    inst.time.dt = 1.0;
    inst.prices.da_price.assign(T, 50.0);
    inst.prices.hydrogen_price = 2.0;
    inst.prices.water_price = 0.397;
    inst.pv.forecast.assign(T, 1.0);
    inst.pv.scenarios.assign(S, std::vector<double>(T, 1.0));
    inst.pv.probabilities.assign(S, 1.0 / S);
    inst.battery.capacity = 1.0;
    inst.battery.rated_power = 1.0;
    inst.battery.eta = 0.9;
    inst.battery.initial_soe = 0.0;
    inst.battery.charge_curve_R = {0.0, 0.5, 0.8, 1.0};
    inst.battery.charge_curve_F = {1.0, 1.0, 0.6, 0.2};
    inst.electrolyzer.rated_power = 1.0;
    inst.electrolyzer.min_stable_fraction = 0.1;
    inst.electrolyzer.power_per_kg = 0.0394;
    inst.electrolyzer.alpha = 0.689;
    inst.electrolyzer.beta = 0.011;
    inst.electrolyzer.water_per_kg = 0.010;
    inst.imbalance.kappa = 0.4;
    inst.imbalance.gamma = 0;
    inst.grid.connection_limit = 10.0;
    return inst;
}

/// Grid-friendly randomized micro instance for enumeration brackets.
inline hybridbid::Instance random_micro_instance(std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> price_step(1, 8);
    std::uniform_int_distribution<int> pv_step(0, 4);

    hybridbid::Instance inst = small_instance(2, 1);
    // keep exactly one flexible technology per instance so the grid search
    // stays well under the node cap
    bool use_battery = coin(rng) == 1;
    if (use_battery) {
        inst.electrolyzer.rated_power = 0.0;
        inst.battery.rated_power = 1.0;
        inst.battery.capacity = 1.5;  // dt*eta*rated < capacity keeps curve checks mild
        inst.battery.eta = coin(rng) == 1 ? 1.0 : 0.8;
    } else {
        inst.battery.capacity = 0.0;
        inst.battery.rated_power = 0.0;
        inst.electrolyzer.rated_power = 1.0;
        inst.electrolyzer.min_stable_fraction = coin(rng) == 1 ? 0.5 : 0.0;
    }
    for (int t = 0; t < 2; ++t) {
        inst.prices.da_price[t] = 10.0 * price_step(rng);
        inst.pv.forecast[t] = 0.5 * pv_step(rng);
        inst.pv.scenarios[0][t] = 0.5 * pv_step(rng);
    }
    inst.imbalance.kappa = coin(rng) == 1 ? 0.4 : 0.0;
    inst.imbalance.gamma = std::uniform_int_distribution<int>(0, 2)(rng);
    inst.grid.connection_limit = 5.0;
    return inst;
}

}  // namespace testutil
