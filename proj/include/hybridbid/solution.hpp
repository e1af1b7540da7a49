#pragma once

#include <filesystem>
#include <vector>

#include "hybridbid/facility.hpp"
#include "hybridbid/instance.hpp"
#include "hybridbid/model_ir.hpp"
#include "hybridbid/robust.hpp"

namespace hybridbid {

/// Recourse values for one PV scenario, indexed by hour.
struct ScenarioSolution {
    double probability = 0.0;
    std::vector<double> dev;         // d (MWh)
    std::vector<double> realized;    // r (MWh)
    std::vector<double> res_used;    // MW
    std::vector<double> ch_bal_up, ch_bal_dn;
    std::vector<double> dis_bal_up, dis_bal_dn;
    std::vector<double> el_bal_up, el_bal_dn;
    std::vector<double> soe;         // MWh
    std::vector<double> h2_kg;       // kg
    std::vector<double> el_power;    // MW
    std::vector<double> el_net;      // MW
    std::vector<std::vector<double>> soe_seg;  // [t][j] MWh
    std::vector<int> x_bat_bal;
    // robust block
    std::vector<double> y, z, mu1, mu2;
    std::vector<int> xd1, xd2;
    double omega = 0.0;
};

/// First-stage DA schedule plus per-scenario recourse of one solve.
struct Solution {
    int gamma = 0;
    double objective = 0.0;
    SolveStatus status = SolveStatus::NumericFailure;
    double mip_gap = 0.0;

    std::vector<double> mp;
    std::vector<double> ch_da, dis_da, el_da;
    std::vector<int> x_el_on, x_bat_ch_da;
    std::vector<ScenarioSolution> scenarios;

    int n_periods() const { return static_cast<int>(mp.size()); }
    int n_scenarios() const { return static_cast<int>(scenarios.size()); }
};

/// Pulls a Solution out of a solver result.  Binary variables are rounded.
Solution extract_solution(const SolveResult& result, const FacilityModel& facility,
                          const RobustVars& robust, const Instance& instance);

/// Full variable assignment in model column order (for evaluate_constraints).
std::vector<double> solution_to_point(const Solution& solution, const FacilityModel& facility,
                                      const RobustVars& robust);

std::string serialize_solution(const Solution& solution);
Solution parse_solution(const std::string& json_text);
void save_solution(const Solution& solution, const std::filesystem::path& path);
Solution load_solution(const std::filesystem::path& path);

}  // namespace hybridbid
