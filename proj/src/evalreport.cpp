#include "hybridbid/evalreport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "hybridbid/pipeline.hpp"
#include "hybridbid/robust.hpp"

namespace hybridbid {

bool SweepReport::all_solved() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.solved; });
}

double scenario_imbalance_revenue(const ScenarioSolution& sc, const DirectionSequence& seq,
                                  const Instance& inst) {
    const int T = inst.n_periods();
    if (static_cast<int>(seq.directions.size()) != T ||
        static_cast<int>(sc.dev.size()) != T) {
        throw LengthMismatch("direction sequence and deviations must cover every hour");
    }
    double revenue = 0.0;
    for (int t = 0; t < T; ++t) {
        const double lambda = inst.prices.da_price[t];
        const double price = seq.directions[t] == Direction::SystemSurplus
                                 ? lambda * (1.0 - inst.imbalance.kappa)
                                 : lambda * (1.0 + inst.imbalance.kappa);
        revenue += price * sc.dev[t];
    }
    return revenue;
}

double realized_imbalance_revenue(const Solution& sol, const DirectionSequence& seq,
                                  const Instance& inst) {
    if (sol.n_scenarios() != inst.n_scenarios()) {
        throw IncompleteSolution("solution scenario count does not match instance");
    }
    double revenue = 0.0;
    for (int s = 0; s < sol.n_scenarios(); ++s) {
        revenue += inst.pv.probabilities[s] *
                   scenario_imbalance_revenue(sol.scenarios[s], seq, inst);
    }
    return revenue;
}

namespace {

SweepRow solve_row(const Instance& base, int gamma,
                   const std::vector<DirectionSequence>& directions,
                   const SweepOptions& options) {
    SweepRow row;
    row.gamma = gamma;
    try {
        Instance inst = base.with_gamma(gamma);
        SolveOutcome outcome = solve_bidding(inst, *options.backend, options.solve);
        if (outcome.result.status != SolveStatus::Optimal) {
            row.error = "solver status " + to_string(outcome.result.status);
            return row;
        }
        require_duality(outcome.solution, inst, options.duality_tol);
        row.solution = std::move(outcome.solution);
        row.da_revenue = outcome.breakdown.da_revenue;
        row.hydrogen_expected = outcome.breakdown.hydrogen_revenue_expected -
                                outcome.breakdown.water_cost_expected;
        row.imbalance_expected = outcome.breakdown.imbalance_revenue_expected;
        row.total_expected = row.da_revenue + row.hydrogen_expected + row.imbalance_expected;
        if (!directions.empty()) {
            double sum = 0.0;
            for (const DirectionSequence& seq : directions) {
                sum += realized_imbalance_revenue(row.solution, seq, inst);
            }
            row.real_imbalance = sum / static_cast<double>(directions.size());
            row.real_total = row.da_revenue + row.hydrogen_expected + *row.real_imbalance;
        }
        row.solved = true;
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

SweepReport gamma_sweep(const Instance& instance, const std::vector<int>& gammas,
                        const std::vector<DirectionSequence>& directions,
                        const SweepOptions& options) {
    if (options.backend == nullptr) {
        throw BackendUnavailable("gamma_sweep needs a solver backend");
    }
    for (int gamma : gammas) {
        if (gamma < 0 || gamma > instance.n_periods()) {
            throw ValidationError("gamma " + std::to_string(gamma) +
                                  " outside [0, n_periods]");
        }
    }

    SweepReport report;
    report.rows.resize(gammas.size());
    std::atomic<std::size_t> next{0};
    int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(gammas.size())));
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= gammas.size()) {
                return;
            }
            report.rows[i] = solve_row(instance, gammas[i], directions, options);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.gamma < b.gamma; });
    return report;
}

std::map<std::string, SweepReport> technology_ablation(const Instance& instance,
                                                       const std::vector<int>& gammas,
                                                       const SweepOptions& options) {
    std::map<std::string, SweepReport> out;
    const std::vector<DirectionSequence> no_directions;
    out["pv"] = gamma_sweep(instance.without_battery().without_electrolyzer(), gammas,
                            no_directions, options);
    out["pv_el"] = gamma_sweep(instance.without_battery(), gammas, no_directions, options);
    out["pv_bat"] = gamma_sweep(instance.without_electrolyzer(), gammas, no_directions, options);
    out["pv_el_bat"] = gamma_sweep(instance, gammas, no_directions, options);
    return out;
}

namespace {

std::string fixed6(double value) {
    if (std::abs(value) < 5e-7) {
        value = 0.0;  // avoid "-0.000000"
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

}  // namespace

void export_report(const SweepReport& report, const std::filesystem::path& dir) {
    bool any_solved =
        std::any_of(report.rows.begin(), report.rows.end(),
                    [](const SweepRow& r) { return r.solved; });
    if (report.rows.empty() || !any_solved) {
        throw ValidationError("report has no solved rows to export");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    std::ofstream sweep = open_csv(dir / "sweep.csv");
    sweep << "gamma,total_expected,da_revenue,hydrogen_expected,imbalance_expected,"
             "real_total,real_imbalance\n";
    for (const SweepRow& row : report.rows) {
        if (!row.solved) {
            continue;
        }
        sweep << row.gamma << ',' << fixed6(row.total_expected) << ',' << fixed6(row.da_revenue)
              << ',' << fixed6(row.hydrogen_expected) << ',' << fixed6(row.imbalance_expected)
              << ',' << (row.real_total ? fixed6(*row.real_total) : std::string())
              << ',' << (row.real_imbalance ? fixed6(*row.real_imbalance) : std::string())
              << '\n';
    }

    std::ofstream positions = open_csv(dir / "positions.csv");
    positions << "gamma,t,mp\n";
    for (const SweepRow& row : report.rows) {
        if (!row.solved) {
            continue;
        }
        for (int t = 0; t < row.solution.n_periods(); ++t) {
            positions << row.gamma << ',' << t << ',' << fixed6(row.solution.mp[t]) << '\n';
        }
    }

    std::ofstream soe = open_csv(dir / "soe.csv");
    soe << "gamma,scenario,t,soe\n";
    for (const SweepRow& row : report.rows) {
        if (!row.solved) {
            continue;
        }
        for (int s = 0; s < row.solution.n_scenarios(); ++s) {
            for (int t = 0; t < row.solution.n_periods(); ++t) {
                soe << row.gamma << ',' << s << ',' << t << ','
                    << fixed6(row.solution.scenarios[s].soe[t]) << '\n';
            }
        }
    }

    std::ofstream el = open_csv(dir / "electrolyzer.csv");
    el << "gamma,scenario,t,el_power,hydrogen_kg\n";
    for (const SweepRow& row : report.rows) {
        if (!row.solved) {
            continue;
        }
        for (int s = 0; s < row.solution.n_scenarios(); ++s) {
            for (int t = 0; t < row.solution.n_periods(); ++t) {
                el << row.gamma << ',' << s << ',' << t << ','
                   << fixed6(row.solution.scenarios[s].el_power[t]) << ','
                   << fixed6(row.solution.scenarios[s].h2_kg[t]) << '\n';
            }
        }
    }
}

}  // namespace hybridbid
