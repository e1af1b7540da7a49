#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridbid/instance.hpp"
#include "hybridbid/solution.hpp"
#include "hybridbid/solver.hpp"

namespace hybridbid {

/// One solved point of a budget sweep.  `hydrogen_expected` is net of the
/// water cost (the report schema has no separate water column).
struct SweepRow {
    int gamma = 0;
    bool solved = false;
    std::string error;
    double total_expected = 0.0;
    double da_revenue = 0.0;
    double hydrogen_expected = 0.0;
    double imbalance_expected = 0.0;
    std::optional<double> real_total;
    std::optional<double> real_imbalance;
    Solution solution;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // sorted by gamma
    bool all_solved() const;
};

struct SweepOptions {
    SolveOptions solve;
    const SolverBackend* backend = nullptr;  // required
    int workers = 2;
    double duality_tol = 1e-4;
};

/// Ex-post settlement of one scenario's deviations against realized
/// directions: surplus hours pay (1-kappa)*lambda, shortage (1+kappa)*lambda.
double scenario_imbalance_revenue(const ScenarioSolution& scenario,
                                  const DirectionSequence& directions,
                                  const Instance& instance);

/// Probability-weighted ex-post settlement of a full solution against one
/// realized direction sequence, dispatch held fixed.
double realized_imbalance_revenue(const Solution& solution, const DirectionSequence& directions,
                                  const Instance& instance);

/// One solve per budget value; duality is verified before a row is
/// emitted.  Real-profit columns are filled when direction sequences are
/// supplied (averaged over them).  Failed rows are marked, not fatal.
SweepReport gamma_sweep(const Instance& instance, const std::vector<int>& gammas,
                        const std::vector<DirectionSequence>& directions,
                        const SweepOptions& options);

/// Sweeps the four technology configurations (PV, PV+EL, PV+BAT,
/// PV+EL+BAT), ablations implemented by zeroing rated powers.
std::map<std::string, SweepReport> technology_ablation(const Instance& instance,
                                                       const std::vector<int>& gammas,
                                                       const SweepOptions& options);

/// Writes sweep.csv, positions.csv, soe.csv, electrolyzer.csv under `dir`
/// (UTF-8, 6-decimal fixed notation).  Throws IoError on failure and
/// ValidationError if the report has no solved rows.
void export_report(const SweepReport& report, const std::filesystem::path& dir);

}  // namespace hybridbid
