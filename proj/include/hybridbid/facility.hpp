#pragma once

#include <span>
#include <vector>

#include "hybridbid/instance.hpp"
#include "hybridbid/model_ir.hpp"

namespace hybridbid {

/// Handles for every decision variable of the facility model.
/// First-stage vectors are indexed [t]; recourse matrices [s][t];
/// SOE segments [s][t][j].
struct VariableRegistry {
    // first stage (day-ahead)
    std::vector<VarRef> mp;          // market position (MWh)
    std::vector<VarRef> ch_da;       // battery charging power (MW)
    std::vector<VarRef> dis_da;      // battery discharging power (MW)
    std::vector<VarRef> el_da;       // electrolyzer consumption (MW)
    std::vector<VarRef> x_el_on;     // electrolyzer on/off
    std::vector<VarRef> x_bat_ch_da; // 1 if the battery charges in the DA stage

    // second stage (per scenario)
    std::vector<std::vector<VarRef>> dev;        // facility deviation d (MWh)
    std::vector<std::vector<VarRef>> realized;   // realized delivery r (MWh)
    std::vector<std::vector<VarRef>> res_used;   // PV power injected (MW)
    std::vector<std::vector<VarRef>> ch_bal_up;  // extra charging (MW)
    std::vector<std::vector<VarRef>> ch_bal_dn;  // reduced charging (MW)
    std::vector<std::vector<VarRef>> dis_bal_up; // extra discharging (MW)
    std::vector<std::vector<VarRef>> dis_bal_dn; // reduced discharging (MW)
    std::vector<std::vector<VarRef>> el_bal_up;  // extra electrolyzer draw (MW)
    std::vector<std::vector<VarRef>> el_bal_dn;  // reduced electrolyzer draw (MW)
    std::vector<std::vector<VarRef>> soe;        // battery state of energy (MWh)
    std::vector<std::vector<VarRef>> x_bat_bal;  // balancing direction selector
    std::vector<std::vector<VarRef>> h2_kg;      // produced hydrogen (kg)
    std::vector<std::vector<VarRef>> el_power;   // actual electrolyzer power (MW)
    std::vector<std::vector<VarRef>> el_net;     // net hydrogen-producing power (MW)
    std::vector<std::vector<std::vector<VarRef>>> soe_seg;  // SOE per segment (MWh)
};

struct FacilityBuildOptions {
    /// Emit the piecewise-linear charging-ability block (SOE segment
    /// decomposition plus the per-hour admissible-charge rows).  Disabling
    /// it yields the simple battery model.
    bool accurate_charging = true;
};

struct FacilityModel {
    ModelIR model;
    VariableRegistry vars;
};

/// Builds every physical and market constraint of the hybrid facility into
/// a fresh ModelIR.  The objective is left empty; the robust module sets it.
FacilityModel build_facility(const Instance& instance, const FacilityBuildOptions& options = {});

/// Closed-form admissible charging power (MW, before the rated-power cap)
/// given the previous hour's SOE split into segments.  Throws
/// SegmentOverflow if a segment exceeds its width by more than 1e-9.
double battery_max_charge_power(std::span<const double> prev_soe_segments,
                                const BatteryParams& params, double dt);

/// Fills `soe` into the charge-curve segments in index order.
std::vector<double> greedy_segment_fill(double soe, const BatteryParams& params);

/// Hydrogen produced (kg) at a given electrolyzer power and on/off state.
/// Throws PowerOutOfRange when the power is incompatible with the state.
double hydrogen_output(double el_power_mw, bool on, const ElectrolyzerParams& params);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Implied range of the market position (MWh) at hour t.
Interval market_position_range(const Instance& instance, int t);

/// Implied range of the realized delivery (MWh) at hour t under scenario s.
Interval realization_range(const Instance& instance, int t, int s);

/// Implied range of the facility deviation (MWh) at hour t under scenario s.
Interval deviation_range(const Instance& instance, int t, int s);

}  // namespace hybridbid
