#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hybridbid/evalreport.hpp"
#include "hybridbid/oracle.hpp"
#include "hybridbid/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hybridbid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerification = 3;

void emit_error(const std::string& type, const std::string& message) {
    nlohmann::json err = {{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << std::endl;
}

std::vector<int> parse_gammas(const std::string& text, int n_periods) {
    std::vector<int> out;
    auto range_pos = text.find("..");
    if (range_pos != std::string::npos) {
        int lo = std::stoi(text.substr(0, range_pos));
        int hi = std::stoi(text.substr(range_pos + 2));
        for (int g = lo; g <= hi; ++g) {
            out.push_back(g);
        }
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) {
                out.push_back(std::stoi(item));
            }
        }
    }
    if (out.empty()) {
        throw ValidationError("gammas: empty selection '" + text + "'");
    }
    for (int g : out) {
        if (g < 0 || g > n_periods) {
            throw ValidationError("gammas: " + std::to_string(g) + " outside [0, " +
                                  std::to_string(n_periods) + "]");
        }
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
}

nlohmann::json breakdown_json(const ProfitBreakdown& b) {
    return {{"da_revenue", b.da_revenue},
            {"hydrogen_revenue_expected", b.hydrogen_revenue_expected},
            {"water_cost_expected", b.water_cost_expected},
            {"imbalance_revenue_expected", b.imbalance_revenue_expected},
            {"total", b.total}};
}

struct CommonArgs {
    std::string instance_path;
    std::string out_dir = ".";
    std::string backend_spec = "highs";
    double time_limit = 600.0;
    double mip_gap = 1e-6;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("--instance", args.instance_path, "instance JSON file")->required();
    if (with_out) {
        cmd->add_option("--out", args.out_dir, "output directory");
    }
    cmd->add_option("--backend", args.backend_spec,
                    "solver backend: highs | highs:<exe> | lp-exec:<cmd {lp} {sol}>");
    cmd->add_option("--time-limit", args.time_limit, "solver time limit (s)");
    cmd->add_option("--mip-gap", args.mip_gap, "relative MIP gap tolerance");
}

SolveOptions solve_options(const CommonArgs& args) {
    SolveOptions opt;
    opt.time_limit_s = args.time_limit;
    opt.mip_gap_tol = args.mip_gap;
    return opt;
}

int run_solve(const CommonArgs& args, std::optional<int> gamma) {
    Instance inst = load_instance(args.instance_path);
    if (gamma) {
        inst = inst.with_gamma(*gamma);
    }
    auto backend = make_backend(args.backend_spec);
    SolveOutcome outcome = solve_bidding(inst, *backend, solve_options(args));
    if (outcome.result.status != SolveStatus::Optimal) {
        emit_error("solver", "status " + to_string(outcome.result.status));
        return kExitSolver;
    }
    fs::create_directories(args.out_dir);
    save_solution(outcome.solution, fs::path(args.out_dir) / "solution.json");
    write_text(fs::path(args.out_dir) / "breakdown.json",
               breakdown_json(outcome.breakdown).dump(2) + "\n");
    std::cout << "status: optimal\n"
              << "objective: " << outcome.result.objective_value << "\n"
              << "da_revenue: " << outcome.breakdown.da_revenue << "\n"
              << "hydrogen_net: "
              << outcome.breakdown.hydrogen_revenue_expected -
                     outcome.breakdown.water_cost_expected
              << "\n"
              << "imbalance_expected: " << outcome.breakdown.imbalance_revenue_expected << "\n"
              << "wall_time_s: " << outcome.result.wall_time_s << "\n";
    return kExitOk;
}

int run_sweep(const CommonArgs& args, const std::string& gammas_text,
              const std::string& directions_path, bool ablate) {
    Instance inst = load_instance(args.instance_path);
    std::vector<int> gammas = parse_gammas(gammas_text, inst.n_periods());
    std::vector<DirectionSequence> directions;
    if (!directions_path.empty()) {
        directions = load_direction_sequences(directions_path, inst.n_periods());
    }
    auto backend = make_backend(args.backend_spec);
    SweepOptions options;
    options.solve = solve_options(args);
    options.backend = backend.get();

    fs::create_directories(args.out_dir);
    bool all_ok = true;
    if (ablate) {
        auto reports = technology_ablation(inst, gammas, options);
        std::ofstream summary(fs::path(args.out_dir) / "ablation.csv");
        summary << "config,gamma,total_expected\n";
        for (const auto& [config, report] : reports) {
            export_report(report, fs::path(args.out_dir) / config);
            for (const SweepRow& row : report.rows) {
                if (row.solved) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.6f", row.total_expected);
                    summary << config << ',' << row.gamma << ',' << buf << '\n';
                } else {
                    all_ok = false;
                }
            }
            for (const SweepRow& row : report.rows) {
                if (!row.solved) {
                    emit_error("solver", config + " gamma " + std::to_string(row.gamma) + ": " +
                                             row.error);
                }
            }
        }
        std::cout << "ablation reports written to " << args.out_dir << "\n";
    } else {
        SweepReport report = gamma_sweep(inst, gammas, directions, options);
        export_report(report, args.out_dir);
        for (const SweepRow& row : report.rows) {
            if (!row.solved) {
                all_ok = false;
                emit_error("solver", "gamma " + std::to_string(row.gamma) + ": " + row.error);
            }
        }
        std::cout << "sweep report written to " << args.out_dir << " ("
                  << report.rows.size() << " rows)\n";
    }
    return all_ok ? kExitOk : kExitSolver;
}

int run_evaluate(const CommonArgs& args, const std::string& solution_path,
                 const std::string& directions_path) {
    Instance inst = load_instance(args.instance_path);
    Solution sol = load_solution(solution_path);
    std::vector<DirectionSequence> directions =
        load_direction_sequences(directions_path, inst.n_periods());
    if (directions.empty()) {
        throw ValidationError("directions file has no rows");
    }
    fs::create_directories(args.out_dir);
    std::ofstream out(fs::path(args.out_dir) / "evaluation.csv");
    out << "sequence,real_imbalance\n";
    double sum = 0.0;
    for (std::size_t i = 0; i < directions.size(); ++i) {
        double value = realized_imbalance_revenue(sol, directions[i], inst);
        sum += value;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        out << i << ',' << buf << '\n';
    }
    std::cout << "sequences: " << directions.size() << "\n"
              << "mean_real_imbalance: " << sum / static_cast<double>(directions.size())
              << "\n";
    return kExitOk;
}

int run_verify(const CommonArgs& args, std::optional<int> gamma,
               const std::string& solution_path) {
    Instance inst = load_instance(args.instance_path);
    if (gamma) {
        inst = inst.with_gamma(*gamma);
    }

    Solution sol;
    try {
        if (!solution_path.empty()) {
            sol = load_solution(solution_path);
            inst = inst.with_gamma(sol.gamma);
        } else {
            auto backend = make_backend(args.backend_spec);
            SolveOutcome outcome = solve_bidding(inst, *backend, solve_options(args));
            if (outcome.result.status != SolveStatus::Optimal) {
                emit_error("solver", "status " + to_string(outcome.result.status));
                return kExitSolver;
            }
            sol = outcome.solution;
        }

        BiddingModel bm = build_bidding_model(inst);
        std::vector<double> point = solution_to_point(sol, bm.facility, bm.robust);
        auto violations = evaluate_constraints(bm.facility.model, point);
        if (!violations.empty()) {
            for (const auto& v : violations) {
                emit_error("feasibility", v.name + " violated by " + std::to_string(v.violation));
            }
            return kExitVerification;
        }
        DualityReport duality = verify_duality(sol, inst, 1e-4);
        if (!duality.ok()) {
            for (const auto& f : duality.findings) {
                emit_error("duality", f.detail);
            }
            return kExitVerification;
        }
        double objective = bm.facility.model.objective_value(point);
        if (std::abs(objective - sol.objective) >
            1e-4 * std::max(1.0, std::abs(sol.objective))) {
            emit_error("objective", "stored objective " + std::to_string(sol.objective) +
                                        " != recomputed " + std::to_string(objective));
            return kExitVerification;
        }
        if (inst.n_periods() <= 3 && inst.n_scenarios() <= 2) {
            TinyEnumeration tiny = enumerate_tiny(inst);
            double slack = tiny_lipschitz_constant(inst) * 0.5;
            if (tiny.feasible &&
                (sol.objective < tiny.best_profit - 1e-4 * std::max(1.0, std::abs(tiny.best_profit)) ||
                 sol.objective > tiny.best_profit + slack)) {
                emit_error("enumeration",
                           "objective " + std::to_string(sol.objective) +
                               " outside [" + std::to_string(tiny.best_profit) + ", " +
                               std::to_string(tiny.best_profit + slack) + "]");
                return kExitVerification;
            }
        }
    } catch (const ParseError& e) {
        emit_error("verification", e.what());
        return kExitVerification;
    } catch (const IncompleteSolution& e) {
        emit_error("verification", e.what());
        return kExitVerification;
    }
    std::cout << "verification passed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day-ahead bidding optimizer for a PV-battery-electrolyzer facility"};
    app.require_subcommand(1);

    CommonArgs solve_args, sweep_args, ablate_args, eval_args, verify_args;
    std::optional<int> solve_gamma, verify_gamma;
    std::string sweep_gammas, ablate_gammas;
    std::string sweep_directions, eval_directions;
    std::string eval_solution, verify_solution;

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one budget value");
    add_common(solve_cmd, solve_args);
    int solve_gamma_value = -1;
    solve_cmd->add_option("--gamma", solve_gamma_value, "uncertainty budget");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve a range of budget values");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--gammas", sweep_gammas, "budget values, e.g. 0..24 or 0,6,12")
        ->required();
    sweep_cmd->add_option("--directions", sweep_directions, "realized directions CSV");

    CLI::App* ablate_cmd = app.add_subcommand("ablate", "technology ablation sweep");
    add_common(ablate_cmd, ablate_args);
    ablate_cmd->add_option("--gammas", ablate_gammas, "budget values")->required();

    CLI::App* eval_cmd = app.add_subcommand("evaluate", "ex-post settlement of a stored solution");
    add_common(eval_cmd, eval_args);
    eval_cmd->add_option("--solution", eval_solution, "solution JSON")->required();
    eval_cmd->add_option("--directions", eval_directions, "realized directions CSV")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "feasibility + duality + oracle checks");
    add_common(verify_cmd, verify_args);
    int verify_gamma_value = -1;
    verify_cmd->add_option("--gamma", verify_gamma_value, "uncertainty budget");
    verify_cmd->add_option("--solution", verify_solution, "stored solution JSON to verify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    if (solve_gamma_value >= 0) {
        solve_gamma = solve_gamma_value;
    }
    if (verify_gamma_value >= 0) {
        verify_gamma = verify_gamma_value;
    }

    try {
        if (solve_cmd->parsed()) {
            return run_solve(solve_args, solve_gamma);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(sweep_args, sweep_gammas, sweep_directions, false);
        }
        if (ablate_cmd->parsed()) {
            return run_sweep(ablate_args, ablate_gammas, "", true);
        }
        if (eval_cmd->parsed()) {
            return run_evaluate(eval_args, eval_solution, eval_directions);
        }
        if (verify_cmd->parsed()) {
            return run_verify(verify_args, verify_gamma, verify_solution);
        }
    } catch (const ParseError& e) {
        emit_error("parse", e.what());
        return kExitValidation;
    } catch (const ValidationError& e) {
        emit_error("validation", e.what());
        return kExitValidation;
    } catch (const LengthMismatch& e) {
        emit_error("validation", e.what());
        return kExitValidation;
    } catch (const BackendUnavailable& e) {
        emit_error("backend", e.what());
        return kExitSolver;
    } catch (const NumericFailure& e) {
        emit_error("solver", e.what());
        return kExitSolver;
    } catch (const Error& e) {
        emit_error("error", e.what());
        return kExitValidation;
    }
    return kExitValidation;
}
