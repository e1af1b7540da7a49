#include "hybridbid/solver.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hybridbid/lp_writer.hpp"

namespace fs = std::filesystem;

namespace hybridbid {

namespace {

std::atomic<unsigned> g_solve_counter{0};

fs::path make_work_dir() {
    fs::path base = fs::temp_directory_path() /
                    ("hybridbid-" + std::to_string(::getpid()) + "-" +
                     std::to_string(g_solve_counter.fetch_add(1)));
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) {
        throw IoError("cannot create solver work directory " + base.string());
    }
    return base;
}

bool keep_solver_files() {
    const char* keep = std::getenv("HYBRIDBID_KEEP_SOLVER_FILES");
    return keep != nullptr && std::string(keep) == "1";
}

int run_process(const std::vector<std::string>& argv, const fs::path& log_path) {
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const std::string& a : argv) {
        args.push_back(const_cast<char*>(a.c_str()));
    }
    args.push_back(nullptr);

    pid_t pid = ::fork();
    if (pid < 0) {
        throw NumericFailure("fork failed: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            ::dup2(fd, STDOUT_FILENO);
            ::dup2(fd, STDERR_FILENO);
            ::close(fd);
        }
        ::execvp(args[0], args.data());
        std::fprintf(stderr, "exec %s failed: %s\n", args[0], std::strerror(errno));
        ::_exit(127);
    }
    int status = 0;
    if (::waitpid(pid, &status, 0) < 0) {
        throw NumericFailure("waitpid failed: " + std::string(std::strerror(errno)));
    }
    if (WIFEXITED(status)) {
        return WEXITSTATUS(status);
    }
    return -1;
}

std::string read_file_tail(const fs::path& path, std::size_t max_bytes = 4000) {
    std::ifstream in(path);
    if (!in) {
        return {};
    }
    std::ostringstream oss;
    oss << in.rdbuf();
    std::string text = oss.str();
    if (text.size() > max_bytes) {
        text = text.substr(text.size() - max_bytes);
    }
    return text;
}

bool executable_on_path(const std::string& name) {
    const char* path_env = std::getenv("PATH");
    if (path_env == nullptr) {
        return false;
    }
    std::stringstream ss(path_env);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
        if (dir.empty()) {
            continue;
        }
        fs::path candidate = fs::path(dir) / name;
        std::error_code ec;
        if (fs::is_regular_file(candidate, ec) && ::access(candidate.c_str(), X_OK) == 0) {
            return true;
        }
    }
    return false;
}

std::vector<std::string> split_command(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string word;
    while (ss >> word) {
        out.push_back(word);
    }
    return out;
}

SolveStatus map_status(const std::string& text) {
    if (text.find("Optimal") != std::string::npos || text.find("optimal") != std::string::npos) {
        return SolveStatus::Optimal;
    }
    if (text.find("nfeasible") != std::string::npos) {
        return SolveStatus::Infeasible;
    }
    if (text.find("nbounded") != std::string::npos) {
        return SolveStatus::Unbounded;
    }
    if (text.find("ime limit") != std::string::npos || text.find("time_limit") != std::string::npos) {
        return SolveStatus::TimeLimit;
    }
    return SolveStatus::NumericFailure;
}

struct ParsedSolution {
    SolveStatus status = SolveStatus::NumericFailure;
    bool has_values = false;
    std::unordered_map<std::string, double> values;
};

ParsedSolution parse_highs_solution(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw NumericFailure("solver produced no solution file at " + path.string());
    }
    ParsedSolution parsed;
    std::string line;
    bool expect_status = false;
    while (std::getline(in, line)) {
        if (line == "Model status") {
            expect_status = true;
            continue;
        }
        if (expect_status && !line.empty()) {
            parsed.status = map_status(line);
            expect_status = false;
            continue;
        }
        if (line.rfind("# Columns", 0) == 0) {
            std::size_t count = std::stoul(line.substr(9));
            for (std::size_t i = 0; i < count && std::getline(in, line); ++i) {
                std::istringstream ls(line);
                std::string name;
                double value = 0.0;
                if (ls >> name >> value) {
                    parsed.values[name] = value;
                }
            }
            parsed.has_values = true;
            break;  // rows / duals / basis are not needed
        }
    }
    return parsed;
}

double parse_log_gap(const fs::path& log_path) {
    std::ifstream in(log_path);
    std::string line;
    double gap = std::numeric_limits<double>::quiet_NaN();
    while (std::getline(in, line)) {
        auto pos = line.find("Gap");
        if (pos == std::string::npos) {
            continue;
        }
        std::istringstream rest(line.substr(pos + 3));
        double value = 0.0;
        if (rest >> value) {
            gap = value / 100.0;
        }
    }
    return gap;
}

SolveResult assemble_result(const ModelIR& model, const ParsedSolution& parsed,
                            const std::vector<std::string>& lp_names,
                            const SolveOptions& options, double wall_time_s,
                            const std::string& log_excerpt) {
    SolveResult result;
    result.status = parsed.status;
    result.wall_time_s = wall_time_s;
    result.log_excerpt = log_excerpt;
    if (parsed.has_values && !parsed.values.empty()) {
        result.primal.assign(model.num_variables(), 0.0);
        std::size_t matched = 0;
        for (std::size_t i = 0; i < lp_names.size(); ++i) {
            auto it = parsed.values.find(lp_names[i]);
            if (it != parsed.values.end()) {
                result.primal[i] = it->second;
                ++matched;
            }
        }
        if (matched != model.num_variables()) {
            throw NumericFailure("solution file names " + std::to_string(matched) + " of " +
                                 std::to_string(model.num_variables()) +
                                 " variables\n" + log_excerpt);
        }
        result.objective_value = model.objective_value(result.primal);
    }
    if (result.status == SolveStatus::Optimal && !result.has_primal() &&
        model.num_variables() > 0) {
        throw NumericFailure("optimal status without primal values\n" + log_excerpt);
    }
    (void)options;
    return result;
}

}  // namespace

std::string locate_bundled_shim() {
    if (const char* env = std::getenv("HYBRIDBID_SHIM")) {
        if (fs::exists(env)) {
            return env;
        }
    }
#ifdef HYBRIDBID_SHIM_DEFAULT
    if (fs::exists(HYBRIDBID_SHIM_DEFAULT)) {
        return HYBRIDBID_SHIM_DEFAULT;
    }
#endif
    fs::path local = fs::path("tools") / "milp-solve.py";
    std::error_code ec;
    if (fs::exists(local, ec)) {
        return fs::absolute(local).string();
    }
    return {};
}

HighsProcessBackend::HighsProcessBackend(std::vector<std::string> command)
    : command_(std::move(command)) {
    if (command_.empty()) {
        if (const char* env = std::getenv("HYBRIDBID_HIGHS")) {
            command_ = split_command(env);
        } else if (executable_on_path("highs")) {
            command_ = {"highs"};
        } else {
            std::string shim = locate_bundled_shim();
            if (!shim.empty()) {
                command_ = {"python3", shim};
            }
        }
    }
    if (command_.empty()) {
        throw BackendUnavailable(
            "no HiGHS-compatible solver found: set HYBRIDBID_HIGHS, put `highs` on PATH, "
            "or keep tools/milp-solve.py available");
    }
}

SolveResult HighsProcessBackend::solve(const ModelIR& model, const SolveOptions& options) const {
    model.validate();
    fs::path dir = make_work_dir();
    fs::path lp_path = dir / "model.lp";
    fs::path opt_path = dir / "highs_options.txt";
    fs::path sol_path = dir / "model.sol";
    fs::path log_path = dir / "solver.log";

    {
        std::ofstream lp(lp_path);
        write_lp(model, lp);
        if (!lp) {
            throw IoError("cannot write " + lp_path.string());
        }
        std::ofstream opt(opt_path);
        opt << "mip_rel_gap = " << options.mip_gap_tol << "\n"
            << "time_limit = " << options.time_limit_s << "\n"
            << "threads = " << options.threads << "\n"
            << "random_seed = 0\n";
    }

    std::vector<std::string> argv = command_;
    argv.push_back(lp_path.string());
    argv.push_back("--options_file");
    argv.push_back(opt_path.string());
    argv.push_back("--solution_file");
    argv.push_back(sol_path.string());

    auto start = std::chrono::steady_clock::now();
    int exit_code = run_process(argv, log_path);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::string log_excerpt = read_file_tail(log_path);
    if (exit_code != 0) {
        throw NumericFailure("solver exited with code " + std::to_string(exit_code) + "\n" +
                             log_excerpt);
    }
    ParsedSolution parsed = parse_highs_solution(sol_path);
    SolveResult result =
        assemble_result(model, parsed, lp_variable_names(model), options, wall, log_excerpt);
    double gap = parse_log_gap(log_path);
    if (!std::isnan(gap)) {
        result.mip_gap = gap;
    } else if (result.status == SolveStatus::Optimal) {
        result.mip_gap = options.mip_gap_tol;
    }
    if (!keep_solver_files()) {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    return result;
}

LpExecBackend::LpExecBackend(std::vector<std::string> command_template)
    : command_template_(std::move(command_template)) {
    if (command_template_.empty()) {
        std::string shim = locate_bundled_shim();
        if (shim.empty()) {
            throw BackendUnavailable("lp-exec backend needs a command or the bundled shim");
        }
        command_template_ = {"python3", shim, "{lp}", "--plain", "{sol}"};
    }
}

SolveResult LpExecBackend::solve(const ModelIR& model, const SolveOptions& options) const {
    model.validate();
    fs::path dir = make_work_dir();
    fs::path lp_path = dir / "model.lp";
    fs::path sol_path = dir / "model.sol";
    fs::path log_path = dir / "solver.log";

    {
        std::ofstream lp(lp_path);
        write_lp(model, lp);
        if (!lp) {
            throw IoError("cannot write " + lp_path.string());
        }
    }

    std::vector<std::string> argv;
    for (std::string arg : command_template_) {
        std::size_t pos;
        while ((pos = arg.find("{lp}")) != std::string::npos) {
            arg.replace(pos, 4, lp_path.string());
        }
        while ((pos = arg.find("{sol}")) != std::string::npos) {
            arg.replace(pos, 5, sol_path.string());
        }
        argv.push_back(std::move(arg));
    }

    auto start = std::chrono::steady_clock::now();
    int exit_code = run_process(argv, log_path);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string log_excerpt = read_file_tail(log_path);
    if (exit_code != 0) {
        throw NumericFailure("solver exited with code " + std::to_string(exit_code) + "\n" +
                             log_excerpt);
    }

    std::ifstream in(sol_path);
    if (!in) {
        throw NumericFailure("solver produced no solution file\n" + log_excerpt);
    }
    ParsedSolution parsed;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "status") {
            std::string value;
            ls >> value;
            parsed.status = map_status(value);
        } else if (head == "var") {
            std::string name;
            double value = 0.0;
            if (ls >> name >> value) {
                parsed.values[name] = value;
                parsed.has_values = true;
            }
        }
    }
    SolveResult result =
        assemble_result(model, parsed, lp_variable_names(model), options, wall, log_excerpt);
    if (result.status == SolveStatus::Optimal) {
        result.mip_gap = options.mip_gap_tol;
    }
    if (!keep_solver_files()) {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    return result;
}

std::unique_ptr<SolverBackend> make_backend(const std::string& spec) {
    if (spec.empty() || spec == "highs") {
        return std::make_unique<HighsProcessBackend>();
    }
    if (spec.rfind("highs:", 0) == 0) {
        return std::make_unique<HighsProcessBackend>(split_command(spec.substr(6)));
    }
    if (spec == "lp-exec") {
        return std::make_unique<LpExecBackend>();
    }
    if (spec.rfind("lp-exec:", 0) == 0) {
        return std::make_unique<LpExecBackend>(split_command(spec.substr(8)));
    }
    throw BackendUnavailable("unknown backend spec: " + spec);
}

std::unique_ptr<SolverBackend> make_default_backend() {
    return std::make_unique<HighsProcessBackend>();
}

}  // namespace hybridbid
