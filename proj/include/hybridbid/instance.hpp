#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hybridbid/errors.hpp"

namespace hybridbid {

struct TimeGrid {
    int n_periods = 0;   // hours in the horizon
    double dt = 1.0;     // period length in hours
};

struct PriceData {
    std::vector<double> da_price;  // €/MWh per hour, may be negative
    double hydrogen_price = 0.0;   // €/kg
    double water_price = 0.0;      // €/m³
};

struct PvData {
    std::vector<double> forecast;                 // MW per hour
    std::vector<std::vector<double>> scenarios;   // [scenario][hour] MW
    std::vector<double> probabilities;            // per scenario, sums to 1
};

struct BatteryParams {
    double capacity = 0.0;      // MWh
    double rated_power = 0.0;   // MW (inverter limit)
    double eta = 1.0;           // efficiency fraction, applied as stored
    double initial_soe = 0.0;   // MWh at the start of the horizon
    // Piecewise-linear charging-ability curve: at normalized SOE R[i] the
    // admissible charge energy fraction is F[i].
    std::vector<double> charge_curve_R;
    std::vector<double> charge_curve_F;

    int segment_count() const { return static_cast<int>(charge_curve_R.size()) - 1; }
    double segment_width(int j) const {
        return (charge_curve_R[j + 1] - charge_curve_R[j]) * capacity;
    }
    // Reduction of admissible charge energy per MWh stored in segment j.
    double segment_slope(int j) const {
        return (charge_curve_F[j] - charge_curve_F[j + 1]) /
               (charge_curve_R[j + 1] - charge_curve_R[j]);
    }
};

struct ElectrolyzerParams {
    double rated_power = 0.0;        // MW
    double min_stable_fraction = 0.0;
    double power_per_kg = 1.0;       // MW per kg (conversion coefficient)
    double alpha = 1.0;              // variable inefficiency coefficient
    double beta = 0.0;               // fixed inefficiency coefficient
    double water_per_kg = 0.010;     // m³ per kg
};

struct ImbalanceParams {
    double kappa = 0.0;  // imbalance price coefficient, in [0,1)
    int gamma = 0;       // uncertainty budget, in [0, n_periods]
};

struct GridParams {
    double connection_limit = 0.0;  // MW
};

enum class Direction { SystemSurplus, SystemShortage };

/// Realized per-hour system deviation directions for one day.
struct DirectionSequence {
    std::vector<Direction> directions;
};

struct Instance {
    TimeGrid time;
    PriceData prices;
    PvData pv;
    BatteryParams battery;
    ElectrolyzerParams electrolyzer;
    ImbalanceParams imbalance;
    GridParams grid;

    int n_periods() const { return time.n_periods; }
    int n_scenarios() const { return static_cast<int>(pv.scenarios.size()); }

    /// Throws ValidationError naming the offending field path.
    void validate() const;

    Instance with_gamma(int gamma) const;
    Instance without_battery() const;
    Instance without_electrolyzer() const;
};

Instance load_instance(const std::filesystem::path& path);
Instance parse_instance(const std::string& json_text);
std::string serialize_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::filesystem::path& path);

bool instances_equal(const Instance& a, const Instance& b);

/// Reads a CSV of `+`/`-` tokens, one day per row.  Every row must contain
/// exactly `n_periods` tokens; an empty file yields an empty list.
std::vector<DirectionSequence> load_direction_sequences(const std::filesystem::path& path,
                                                        int n_periods);

}  // namespace hybridbid
