#include "hybridbid/facility.hpp"

#include <cmath>
#include <string>

namespace hybridbid {

namespace {

std::string idx(const std::string& base, int t) {
    return base + "[" + std::to_string(t) + "]";
}

std::string idx(const std::string& base, int t, int s) {
    return base + "[" + std::to_string(t) + "," + std::to_string(s) + "]";
}

std::string idx(const std::string& base, int t, int s, int j) {
    return base + "[" + std::to_string(t) + "," + std::to_string(s) + "," +
           std::to_string(j) + "]";
}

}  // namespace

std::vector<double> greedy_segment_fill(double soe, const BatteryParams& params) {
    std::vector<double> segments(params.segment_count(), 0.0);
    double remaining = soe;
    for (int j = 0; j < params.segment_count(); ++j) {
        double take = std::min(remaining, params.segment_width(j));
        segments[j] = take;
        remaining -= take;
    }
    return segments;
}

double battery_max_charge_power(std::span<const double> prev_soe_segments,
                                const BatteryParams& params, double dt) {
    if (static_cast<int>(prev_soe_segments.size()) != params.segment_count()) {
        throw ValidationError("prev_soe_segments: expected " +
                              std::to_string(params.segment_count()) + " segments, got " +
                              std::to_string(prev_soe_segments.size()));
    }
    double limit_energy = params.charge_curve_F.front() * params.capacity;
    for (int j = 0; j < params.segment_count(); ++j) {
        double seg = prev_soe_segments[j];
        if (seg < -1e-9 || seg > params.segment_width(j) + 1e-9) {
            throw SegmentOverflow("segment " + std::to_string(j) + " holds " +
                                  std::to_string(seg) + " MWh, width is " +
                                  std::to_string(params.segment_width(j)));
        }
        limit_energy -= seg * params.segment_slope(j);
    }
    return limit_energy / (dt * params.eta);
}

Interval market_position_range(const Instance& inst, int t) {
    const double dt = inst.time.dt;
    const double flex_down = inst.battery.rated_power + inst.electrolyzer.rated_power;
    Interval out;
    out.lo = std::max(-inst.grid.connection_limit,
                      dt * (inst.pv.forecast[t] - flex_down));
    out.hi = std::min(inst.grid.connection_limit,
                      dt * (inst.pv.forecast[t] + inst.battery.rated_power));
    return out;
}

Interval realization_range(const Instance& inst, int t, int s) {
    const double dt = inst.time.dt;
    Interval out;
    out.lo = std::max(-inst.grid.connection_limit,
                      dt * (-(inst.battery.rated_power + inst.electrolyzer.rated_power)));
    out.hi = std::min(inst.grid.connection_limit,
                      dt * (inst.pv.scenarios[s][t] + inst.battery.rated_power));
    return out;
}

Interval deviation_range(const Instance& inst, int t, int s) {
    Interval mp = market_position_range(inst, t);
    Interval r = realization_range(inst, t, s);
    return {r.lo - mp.hi, r.hi - mp.lo};
}

double hydrogen_output(double el_power_mw, bool on, const ElectrolyzerParams& params) {
    constexpr double tol = 1e-9;
    if (!on) {
        if (std::abs(el_power_mw) > tol) {
            throw PowerOutOfRange("electrolyzer off but power is " +
                                  std::to_string(el_power_mw) + " MW");
        }
        return 0.0;
    }
    double lo = params.min_stable_fraction * params.rated_power;
    if (el_power_mw < lo - tol || el_power_mw > params.rated_power + tol) {
        throw PowerOutOfRange("electrolyzer power " + std::to_string(el_power_mw) +
                              " MW outside [" + std::to_string(lo) + ", " +
                              std::to_string(params.rated_power) + "]");
    }
    return (params.alpha * el_power_mw + params.beta * params.rated_power) /
           params.power_per_kg;
}

FacilityModel build_facility(const Instance& inst, const FacilityBuildOptions& options) {
    inst.validate();
    const int T = inst.n_periods();
    const int S = inst.n_scenarios();
    const int J = inst.battery.segment_count();
    const double dt = inst.time.dt;
    const double p_grid = inst.grid.connection_limit;
    const double p_bat = inst.battery.rated_power;
    const double p_el = inst.electrolyzer.rated_power;
    const double eta = inst.battery.eta;
    const double zeta = inst.electrolyzer.min_stable_fraction;
    const double alpha = inst.electrolyzer.alpha;
    const double beta = inst.electrolyzer.beta;
    const double theta = inst.electrolyzer.power_per_kg;

    FacilityModel fm;
    ModelIR& m = fm.model;
    VariableRegistry& v = fm.vars;

    v.mp.resize(T);
    v.ch_da.resize(T);
    v.dis_da.resize(T);
    v.el_da.resize(T);
    v.x_el_on.resize(T);
    v.x_bat_ch_da.resize(T);
    for (int t = 0; t < T; ++t) {
        Interval mp_range = market_position_range(inst, t);
        v.mp[t] = m.add_continuous(idx("mp", t), mp_range.lo, mp_range.hi);
        v.ch_da[t] = m.add_continuous(idx("ch_da", t), 0.0, p_bat);
        v.dis_da[t] = m.add_continuous(idx("dis_da", t), 0.0, p_bat);
        v.el_da[t] = m.add_continuous(idx("el_da", t), 0.0, p_el);
        v.x_el_on[t] = m.add_binary(idx("x_e", t));
        v.x_bat_ch_da[t] = m.add_binary(idx("x_b_da", t));
    }

    auto resize2 = [&](std::vector<std::vector<VarRef>>& grid) {
        grid.assign(S, std::vector<VarRef>(T));
    };
    resize2(v.dev);
    resize2(v.realized);
    resize2(v.res_used);
    resize2(v.ch_bal_up);
    resize2(v.ch_bal_dn);
    resize2(v.dis_bal_up);
    resize2(v.dis_bal_dn);
    resize2(v.el_bal_up);
    resize2(v.el_bal_dn);
    resize2(v.soe);
    resize2(v.x_bat_bal);
    resize2(v.h2_kg);
    resize2(v.el_power);
    resize2(v.el_net);
    if (options.accurate_charging) {
        v.soe_seg.assign(S, std::vector<std::vector<VarRef>>(T, std::vector<VarRef>(J)));
    }

    const double el_net_max = (alpha + beta) * p_el;
    const double h2_max = theta > 0.0 ? el_net_max / theta : 0.0;
    for (int s = 0; s < S; ++s) {
        for (int t = 0; t < T; ++t) {
            Interval d_range = deviation_range(inst, t, s);
            Interval r_range = realization_range(inst, t, s);
            v.dev[s][t] = m.add_continuous(idx("d", t, s), d_range.lo, d_range.hi);
            v.realized[s][t] = m.add_continuous(idx("r", t, s), r_range.lo, r_range.hi);
            v.res_used[s][t] =
                m.add_continuous(idx("res_r", t, s), 0.0, inst.pv.scenarios[s][t]);
            v.ch_bal_up[s][t] = m.add_continuous(idx("ch_b_up", t, s), 0.0, p_bat);
            v.ch_bal_dn[s][t] = m.add_continuous(idx("ch_b_dn", t, s), 0.0, p_bat);
            v.dis_bal_up[s][t] = m.add_continuous(idx("dis_b_up", t, s), 0.0, p_bat);
            v.dis_bal_dn[s][t] = m.add_continuous(idx("dis_b_dn", t, s), 0.0, p_bat);
            v.el_bal_up[s][t] = m.add_continuous(idx("el_b_up", t, s), 0.0, p_el);
            v.el_bal_dn[s][t] = m.add_continuous(idx("el_b_dn", t, s), 0.0, p_el);
            v.soe[s][t] = m.add_continuous(idx("soe", t, s), 0.0, inst.battery.capacity);
            v.x_bat_bal[s][t] = m.add_binary(idx("x_b_bal", t, s));
            v.h2_kg[s][t] = m.add_continuous(idx("chi_h", t, s), 0.0, h2_max);
            v.el_power[s][t] = m.add_continuous(idx("el", t, s), 0.0, p_el);
            v.el_net[s][t] = m.add_continuous(idx("el_hat", t, s), 0.0, el_net_max);
            if (options.accurate_charging) {
                for (int j = 0; j < J; ++j) {
                    v.soe_seg[s][t][j] = m.add_continuous(idx("soe_p", t, s, j), 0.0,
                                                          inst.battery.segment_width(j));
                }
            }
        }
    }

    // first-stage rows
    for (int t = 0; t < T; ++t) {
        m.add_row(idx("mp_def", t),
                  {{v.mp[t], 1.0},
                   {v.dis_da[t], -dt},
                   {v.ch_da[t], dt},
                   {v.el_da[t], dt}},
                  RowSense::Equal, dt * inst.pv.forecast[t]);
        m.add_row(idx("da_dis_sel", t), {{v.dis_da[t], 1.0}, {v.x_bat_ch_da[t], p_bat}},
                  RowSense::LessEqual, p_bat);
        m.add_row(idx("da_ch_sel", t), {{v.ch_da[t], 1.0}, {v.x_bat_ch_da[t], -p_bat}},
                  RowSense::LessEqual, 0.0);
    }

    const std::vector<double> initial_fill = greedy_segment_fill(inst.battery.initial_soe,
                                                                 inst.battery);
    for (int s = 0; s < S; ++s) {
        for (int t = 0; t < T; ++t) {
            m.add_row(idx("dev_def", t, s),
                      {{v.dev[s][t], 1.0}, {v.realized[s][t], -1.0}, {v.mp[t], 1.0}},
                      RowSense::Equal, 0.0);
            m.add_row(idx("real_def", t, s),
                      {{v.realized[s][t], 1.0},
                       {v.res_used[s][t], -dt},
                       {v.dis_da[t], -dt},
                       {v.ch_da[t], dt},
                       {v.el_da[t], dt},
                       {v.dis_bal_up[s][t], -dt},
                       {v.dis_bal_dn[s][t], dt},
                       {v.ch_bal_up[s][t], dt},
                       {v.ch_bal_dn[s][t], -dt},
                       {v.el_bal_up[s][t], dt},
                       {v.el_bal_dn[s][t], -dt}},
                      RowSense::Equal, 0.0);

            // state of energy: charge scaled by eta, discharge by 1/eta
            std::vector<LinearTerm> soe_terms = {{v.soe[s][t], 1.0},
                                                 {v.ch_da[t], -dt * eta},
                                                 {v.ch_bal_up[s][t], -dt * eta},
                                                 {v.ch_bal_dn[s][t], dt * eta},
                                                 {v.dis_da[t], dt / eta},
                                                 {v.dis_bal_up[s][t], dt / eta},
                                                 {v.dis_bal_dn[s][t], -dt / eta}};
            double soe_rhs = 0.0;
            if (t == 0) {
                soe_rhs = inst.battery.initial_soe;
            } else {
                soe_terms.push_back({v.soe[s][t - 1], -1.0});
            }
            m.add_row(idx("soe_bal", t, s), std::move(soe_terms), RowSense::Equal, soe_rhs);

            if (options.accurate_charging) {
                std::vector<LinearTerm> sum_terms = {{v.soe[s][t], 1.0}};
                for (int j = 0; j < J; ++j) {
                    sum_terms.push_back({v.soe_seg[s][t][j], -1.0});
                }
                m.add_row(idx("soe_sum", t, s), std::move(sum_terms), RowSense::Equal, 0.0);

                // admissible charge energy shrinks with the previous hour's SOE
                std::vector<LinearTerm> lim_terms = {{v.ch_da[t], dt * eta},
                                                     {v.ch_bal_up[s][t], dt * eta},
                                                     {v.ch_bal_dn[s][t], -dt * eta}};
                double lim_rhs = inst.battery.charge_curve_F.front() * inst.battery.capacity;
                if (t == 0) {
                    for (int j = 0; j < J; ++j) {
                        lim_rhs -= initial_fill[j] * inst.battery.segment_slope(j);
                    }
                } else {
                    for (int j = 0; j < J; ++j) {
                        lim_terms.push_back(
                            {v.soe_seg[s][t - 1][j], inst.battery.segment_slope(j)});
                    }
                }
                m.add_row(idx("charge_lim", t, s), std::move(lim_terms), RowSense::LessEqual,
                          lim_rhs);
            }

            m.add_row(idx("bal_excl_a", t, s),
                      {{v.ch_bal_up[s][t], 1.0},
                       {v.dis_bal_dn[s][t], 1.0},
                       {v.x_bat_bal[s][t], 2.0 * p_bat}},
                      RowSense::LessEqual, 2.0 * p_bat);
            m.add_row(idx("bal_excl_b", t, s),
                      {{v.ch_bal_dn[s][t], 1.0},
                       {v.dis_bal_up[s][t], 1.0},
                       {v.x_bat_bal[s][t], -2.0 * p_bat}},
                      RowSense::LessEqual, 0.0);
            m.add_row(idx("ch_cap", t, s), {{v.ch_bal_up[s][t], 1.0}, {v.ch_da[t], 1.0}},
                      RowSense::LessEqual, p_bat);
            m.add_row(idx("ch_dn_cap", t, s), {{v.ch_bal_dn[s][t], 1.0}, {v.ch_da[t], -1.0}},
                      RowSense::LessEqual, 0.0);
            m.add_row(idx("dis_cap", t, s), {{v.dis_bal_up[s][t], 1.0}, {v.dis_da[t], 1.0}},
                      RowSense::LessEqual, p_bat);
            m.add_row(idx("dis_dn_cap", t, s), {{v.dis_bal_dn[s][t], 1.0}, {v.dis_da[t], -1.0}},
                      RowSense::LessEqual, 0.0);

            m.add_row(idx("el_def", t, s),
                      {{v.el_power[s][t], 1.0},
                       {v.el_da[t], -1.0},
                       {v.el_bal_up[s][t], -1.0},
                       {v.el_bal_dn[s][t], 1.0}},
                      RowSense::Equal, 0.0);
            m.add_row(idx("el_min", t, s),
                      {{v.el_power[s][t], 1.0}, {v.x_el_on[t], -zeta * p_el}},
                      RowSense::GreaterEqual, 0.0);
            m.add_row(idx("el_max", t, s), {{v.el_power[s][t], 1.0}, {v.x_el_on[t], -p_el}},
                      RowSense::LessEqual, 0.0);
            m.add_row(idx("h2_conv", t, s),
                      {{v.el_net[s][t], 1.0}, {v.h2_kg[s][t], -theta}}, RowSense::Equal, 0.0);
            m.add_row(idx("el_net_def", t, s),
                      {{v.el_net[s][t], 1.0},
                       {v.el_power[s][t], -alpha},
                       {v.x_el_on[t], -beta * p_el}},
                      RowSense::Equal, 0.0);
            m.add_row(idx("el_up_cap", t, s), {{v.el_da[t], 1.0}, {v.el_bal_up[s][t], 1.0}},
                      RowSense::LessEqual, p_el);
            m.add_row(idx("el_dn_cap", t, s), {{v.el_da[t], 1.0}, {v.el_bal_dn[s][t], -1.0}},
                      RowSense::GreaterEqual, 0.0);
        }
    }

    return fm;
}

}  // namespace hybridbid
