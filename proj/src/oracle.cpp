#include "hybridbid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hybridbid/facility.hpp"
#include "hybridbid/robust.hpp"

namespace hybridbid {

ProfitBreakdown recompute_profit(const Solution& sol, const Instance& inst,
                                 const std::vector<std::vector<bool>>& unfavorable) {
    const int T = inst.n_periods();
    const int S = inst.n_scenarios();
    if (sol.n_periods() != T || sol.n_scenarios() != S) {
        throw IncompleteSolution("solution shape does not match instance");
    }
    if (static_cast<int>(unfavorable.size()) != S) {
        throw IncompleteSolution("direction flags must cover every scenario");
    }

    ProfitBreakdown out;
    for (int t = 0; t < T; ++t) {
        out.da_revenue += inst.prices.da_price[t] * sol.mp[t];
    }
    for (int s = 0; s < S; ++s) {
        const ScenarioSolution& sc = sol.scenarios[s];
        if (static_cast<int>(sc.h2_kg.size()) != T || static_cast<int>(sc.dev.size()) != T ||
            static_cast<int>(unfavorable[s].size()) != T) {
            throw IncompleteSolution("scenario " + std::to_string(s) + " is incomplete");
        }
        const double pi = inst.pv.probabilities[s];
        for (int t = 0; t < T; ++t) {
            const double lambda = inst.prices.da_price[t];
            out.hydrogen_revenue_expected += pi * inst.prices.hydrogen_price * sc.h2_kg[t];
            out.water_cost_expected +=
                pi * inst.prices.water_price * inst.electrolyzer.water_per_kg * sc.h2_kg[t];
            const double sign = unfavorable[s][t] ? -1.0 : 1.0;
            out.imbalance_revenue_expected +=
                pi * (lambda * sc.dev[t] +
                      sign * lambda * inst.imbalance.kappa * std::abs(sc.dev[t]));
        }
    }
    out.total = out.da_revenue + out.hydrogen_revenue_expected - out.water_cost_expected +
                out.imbalance_revenue_expected;
    return out;
}

namespace {

// Grid of multiples of `step` from `lo_multiple` to `hi` inclusive.
std::vector<double> grid_range(double lo, double hi, double step) {
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-9; v += step) {
        out.push_back(std::min(v, hi));
    }
    return out;
}

bool divides(double step, double value) {
    if (value == 0.0) {
        return true;
    }
    double q = value / step;
    return std::abs(q - std::round(q)) < 1e-9;
}

// Split `soe` into charge-curve segments minimizing the charge-ability loss
// (fills the smallest-slope segments first), mirroring the freedom the
// segment decomposition rows give the solver.
std::vector<double> cheapest_segment_fill(double soe, const BatteryParams& params) {
    const int J = params.segment_count();
    std::vector<int> order(J);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return params.segment_slope(a) < params.segment_slope(b);
    });
    std::vector<double> segments(J, 0.0);
    double remaining = soe;
    for (int j : order) {
        double take = std::min(remaining, params.segment_width(j));
        segments[j] = take;
        remaining -= take;
    }
    return segments;
}

struct ScenarioContext {
    const Instance* inst;
    int scenario = 0;
    const TinyFirstStage* first;
    double grid_step = 0.5;
    long long* nodes;
    long long node_cap = 0;

    double best = -std::numeric_limits<double>::infinity();
    TinyScenarioDispatch best_dispatch;

    TinyScenarioDispatch current;
    std::vector<double> dev;
    double partial = 0.0;
};

void scenario_dfs(ScenarioContext& ctx, int t, double soe_prev, double charge_limit_mw) {
    const Instance& inst = *ctx.inst;
    const int T = inst.n_periods();
    if (t == T) {
        if (++(*ctx.nodes) > ctx.node_cap) {
            throw TooLarge("enumeration exceeded node cap of " + std::to_string(ctx.node_cap));
        }
        InnerWorstCase wc = inner_worst_case(ctx.dev, inst.prices.da_price,
                                             inst.imbalance.kappa, inst.imbalance.gamma);
        double value = ctx.partial - wc.value;
        if (value > ctx.best) {
            ctx.best = value;
            ctx.best_dispatch = ctx.current;
        }
        return;
    }

    const double dt = inst.time.dt;
    const double eta = inst.battery.eta;
    const double p_bat = inst.battery.rated_power;
    const double p_el = inst.electrolyzer.rated_power;
    const double g = ctx.grid_step;
    const int s = ctx.scenario;
    const double lambda = inst.prices.da_price[t];
    const double h2_margin = inst.prices.hydrogen_price -
                             inst.prices.water_price * inst.electrolyzer.water_per_kg;
    const double ch_da = ctx.first->ch_da[t];
    const double dis_da = ctx.first->dis_da[t];
    const double el_da = ctx.first->el_da[t];
    const double mp = dt * (inst.pv.forecast[t] + dis_da - ch_da - el_da);

    std::vector<double> res_options = grid_range(0.0, inst.pv.scenarios[s][t], g);
    if (res_options.empty() || res_options.back() < inst.pv.scenarios[s][t] - 1e-9) {
        res_options.push_back(inst.pv.scenarios[s][t]);
    }

    std::vector<double> el_options;
    if (ctx.first->x_el_on[t] == 0 || p_el <= 0.0) {
        el_options = {0.0};
    } else {
        const double lo = inst.electrolyzer.min_stable_fraction * p_el;
        el_options = grid_range(std::ceil(lo / g - 1e-9) * g, p_el, g);
        if (el_options.empty() || el_options.front() > lo + 1e-9) {
            el_options.insert(el_options.begin(), lo);
        }
    }

    // reachable net charge/discharge pairs under the balancing-direction binary
    std::vector<std::pair<double, double>> bat_options;
    for (double ch_net : grid_range(ch_da, p_bat, g)) {
        for (double dis_net : grid_range(0.0, dis_da, g)) {
            bat_options.emplace_back(ch_net, dis_net);
        }
    }
    for (double ch_net : grid_range(0.0, ch_da, g)) {
        for (double dis_net : grid_range(dis_da, p_bat, g)) {
            if (std::abs(ch_net - ch_da) < 1e-12 && std::abs(dis_net - dis_da) < 1e-12) {
                continue;  // shared with the first branch
            }
            bat_options.emplace_back(ch_net, dis_net);
        }
    }

    for (const auto& [ch_net, dis_net] : bat_options) {
        if (ch_net > charge_limit_mw + 1e-9) {
            continue;
        }
        double soe = soe_prev + dt * eta * ch_net - dt / eta * dis_net;
        if (soe < -1e-9 || soe > inst.battery.capacity + 1e-9) {
            continue;
        }
        double next_limit = p_bat;
        if (inst.battery.capacity > 0.0 && t + 1 < T) {
            std::vector<double> fill = cheapest_segment_fill(soe, inst.battery);
            next_limit = std::min(
                p_bat, battery_max_charge_power(fill, inst.battery, dt));
        }
        for (double el : el_options) {
            double h2 = 0.0;
            if (ctx.first->x_el_on[t] == 1 && p_el > 0.0) {
                h2 = hydrogen_output(el, true, inst.electrolyzer);
            }
            for (double res : res_options) {
                double r = dt * (res + dis_net - ch_net - el);
                if (std::abs(r) > inst.grid.connection_limit + 1e-9) {
                    continue;
                }
                double d = r - mp;
                ctx.current.res_used[t] = res;
                ctx.current.ch_net[t] = ch_net;
                ctx.current.dis_net[t] = dis_net;
                ctx.current.el_power[t] = el;
                ctx.dev[t] = d;
                double contribution = h2_margin * h2 + lambda * d;
                ctx.partial += contribution;
                scenario_dfs(ctx, t + 1, soe, next_limit);
                ctx.partial -= contribution;
            }
        }
    }
}

}  // namespace

double tiny_lipschitz_constant(const Instance& inst) {
    double lambda_max = 0.0;
    for (double v : inst.prices.da_price) {
        lambda_max = std::max(lambda_max, std::abs(v));
    }
    double sensitivity =
        inst.time.dt * 2.0 * lambda_max * (1.0 + inst.imbalance.kappa) +
        (inst.prices.hydrogen_price +
         inst.prices.water_price * inst.electrolyzer.water_per_kg) *
            inst.electrolyzer.alpha / inst.electrolyzer.power_per_kg;
    const double T = inst.n_periods();
    const double S = inst.n_scenarios();
    return sensitivity * (2.0 * T + 6.0 * T * S);
}

TinyEnumeration enumerate_tiny(const Instance& inst, double grid_step, long long node_cap) {
    inst.validate();
    if (inst.n_periods() > 3 || inst.n_scenarios() > 2) {
        throw TooLarge("enumerate_tiny handles at most 3 periods and 2 scenarios");
    }
    if (!divides(grid_step, inst.battery.rated_power) ||
        !divides(grid_step, inst.electrolyzer.rated_power)) {
        throw ValidationError("grid_step must divide the rated powers");
    }

    const int T = inst.n_periods();
    const int S = inst.n_scenarios();
    const double g = grid_step;
    const double p_bat = inst.battery.rated_power;
    const double p_el = inst.electrolyzer.rated_power;
    const double dt = inst.time.dt;

    // first-stage options per hour: battery charge xor discharge, DA
    // electrolyzer level, electrolyzer commitment
    struct BatOption {
        double ch, dis;
    };
    std::vector<BatOption> bat_options{{0.0, 0.0}};
    for (double v : grid_range(g, p_bat, g)) {
        bat_options.push_back({v, 0.0});
        bat_options.push_back({0.0, v});
    }
    std::vector<double> el_da_options = grid_range(0.0, p_el, g);
    std::vector<int> x_el_options = p_el > 0.0 ? std::vector<int>{0, 1} : std::vector<int>{0};

    TinyEnumeration result;
    result.first_stage.ch_da.assign(T, 0.0);
    result.first_stage.dis_da.assign(T, 0.0);
    result.first_stage.el_da.assign(T, 0.0);
    result.first_stage.x_el_on.assign(T, 0);
    result.best_profit = -std::numeric_limits<double>::infinity();

    TinyFirstStage current;
    current.ch_da.assign(T, 0.0);
    current.dis_da.assign(T, 0.0);
    current.el_da.assign(T, 0.0);
    current.x_el_on.assign(T, 0);

    const std::vector<double> initial_fill =
        greedy_segment_fill(inst.battery.initial_soe, inst.battery);
    const double initial_limit =
        inst.battery.capacity > 0.0
            ? std::min(p_bat, battery_max_charge_power(initial_fill, inst.battery, dt))
            : p_bat;

    std::function<void(int)> first_stage_dfs = [&](int t) {
        if (t == T) {
            double da_revenue = 0.0;
            for (int h = 0; h < T; ++h) {
                double mp = dt * (inst.pv.forecast[h] + current.dis_da[h] - current.ch_da[h] -
                                  current.el_da[h]);
                if (std::abs(mp) > inst.grid.connection_limit + 1e-9) {
                    return;
                }
                da_revenue += inst.prices.da_price[h] * mp;
            }
            double expected = da_revenue;
            std::vector<TinyScenarioDispatch> recourse(S);
            for (int s = 0; s < S; ++s) {
                ScenarioContext ctx;
                ctx.inst = &inst;
                ctx.scenario = s;
                ctx.first = &current;
                ctx.grid_step = g;
                ctx.nodes = &result.nodes;
                ctx.node_cap = node_cap;
                ctx.dev.assign(T, 0.0);
                ctx.current.res_used.assign(T, 0.0);
                ctx.current.ch_net.assign(T, 0.0);
                ctx.current.dis_net.assign(T, 0.0);
                ctx.current.el_power.assign(T, 0.0);
                scenario_dfs(ctx, 0, inst.battery.initial_soe, initial_limit);
                if (!std::isfinite(ctx.best)) {
                    return;  // no feasible recourse for this scenario
                }
                expected += inst.pv.probabilities[s] * ctx.best;
                recourse[s] = std::move(ctx.best_dispatch);
            }
            if (expected > result.best_profit) {
                result.best_profit = expected;
                result.first_stage = current;
                result.recourse = std::move(recourse);
                result.feasible = true;
            }
            return;
        }
        for (const BatOption& bat : bat_options) {
            current.ch_da[t] = bat.ch;
            current.dis_da[t] = bat.dis;
            for (double el_da : el_da_options) {
                current.el_da[t] = el_da;
                for (int x_el : x_el_options) {
                    current.x_el_on[t] = x_el;
                    first_stage_dfs(t + 1);
                }
            }
        }
    };
    first_stage_dfs(0);

    if (!result.feasible) {
        result.best_profit = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace hybridbid
