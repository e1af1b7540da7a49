#include "hybridbid/solution.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace hybridbid {

namespace {

double value_at(const SolveResult& result, VarRef ref) {
    return result.primal.at(static_cast<std::size_t>(ref.index));
}

int binary_at(const SolveResult& result, VarRef ref) {
    return static_cast<int>(std::lround(value_at(result, ref)));
}

std::vector<double> series(const SolveResult& result, const std::vector<VarRef>& refs) {
    std::vector<double> out;
    out.reserve(refs.size());
    for (VarRef ref : refs) {
        out.push_back(value_at(result, ref));
    }
    return out;
}

std::vector<int> binary_series(const SolveResult& result, const std::vector<VarRef>& refs) {
    std::vector<int> out;
    out.reserve(refs.size());
    for (VarRef ref : refs) {
        out.push_back(binary_at(result, ref));
    }
    return out;
}

}  // namespace

Solution extract_solution(const SolveResult& result, const FacilityModel& facility,
                          const RobustVars& robust, const Instance& instance) {
    if (!result.has_primal()) {
        throw IncompleteSolution("solve result carries no primal values (status " +
                                 to_string(result.status) + ")");
    }
    const VariableRegistry& v = facility.vars;
    Solution sol;
    sol.gamma = instance.imbalance.gamma;
    sol.objective = result.objective_value;
    sol.status = result.status;
    sol.mip_gap = result.mip_gap;
    sol.mp = series(result, v.mp);
    sol.ch_da = series(result, v.ch_da);
    sol.dis_da = series(result, v.dis_da);
    sol.el_da = series(result, v.el_da);
    sol.x_el_on = binary_series(result, v.x_el_on);
    sol.x_bat_ch_da = binary_series(result, v.x_bat_ch_da);

    const int S = instance.n_scenarios();
    sol.scenarios.resize(S);
    for (int s = 0; s < S; ++s) {
        ScenarioSolution& sc = sol.scenarios[s];
        sc.probability = instance.pv.probabilities[s];
        sc.dev = series(result, v.dev[s]);
        sc.realized = series(result, v.realized[s]);
        sc.res_used = series(result, v.res_used[s]);
        sc.ch_bal_up = series(result, v.ch_bal_up[s]);
        sc.ch_bal_dn = series(result, v.ch_bal_dn[s]);
        sc.dis_bal_up = series(result, v.dis_bal_up[s]);
        sc.dis_bal_dn = series(result, v.dis_bal_dn[s]);
        sc.el_bal_up = series(result, v.el_bal_up[s]);
        sc.el_bal_dn = series(result, v.el_bal_dn[s]);
        sc.soe = series(result, v.soe[s]);
        sc.h2_kg = series(result, v.h2_kg[s]);
        sc.el_power = series(result, v.el_power[s]);
        sc.el_net = series(result, v.el_net[s]);
        sc.x_bat_bal = binary_series(result, v.x_bat_bal[s]);
        if (!v.soe_seg.empty()) {
            sc.soe_seg.resize(v.soe_seg[s].size());
            for (std::size_t t = 0; t < v.soe_seg[s].size(); ++t) {
                sc.soe_seg[t] = series(result, v.soe_seg[s][t]);
            }
        }
        sc.y = series(result, robust.y[s]);
        sc.z = series(result, robust.z[s]);
        sc.mu1 = series(result, robust.mu1[s]);
        sc.mu2 = series(result, robust.mu2[s]);
        sc.xd1 = binary_series(result, robust.xd1[s]);
        sc.xd2 = binary_series(result, robust.xd2[s]);
        sc.omega = value_at(result, robust.omega[s]);
    }
    return sol;
}

std::vector<double> solution_to_point(const Solution& sol, const FacilityModel& facility,
                                      const RobustVars& robust) {
    const VariableRegistry& v = facility.vars;
    std::vector<double> point(facility.model.num_variables(),
                              std::numeric_limits<double>::quiet_NaN());
    auto put = [&](VarRef ref, double value) { point[ref.index] = value; };
    auto put_series = [&](const std::vector<VarRef>& refs, const std::vector<double>& values) {
        if (refs.size() != values.size()) {
            throw IncompleteSolution("stored solution series length mismatch");
        }
        for (std::size_t i = 0; i < refs.size(); ++i) {
            put(refs[i], values[i]);
        }
    };
    auto put_binary = [&](const std::vector<VarRef>& refs, const std::vector<int>& values) {
        if (refs.size() != values.size()) {
            throw IncompleteSolution("stored solution series length mismatch");
        }
        for (std::size_t i = 0; i < refs.size(); ++i) {
            put(refs[i], static_cast<double>(values[i]));
        }
    };

    put_series(v.mp, sol.mp);
    put_series(v.ch_da, sol.ch_da);
    put_series(v.dis_da, sol.dis_da);
    put_series(v.el_da, sol.el_da);
    put_binary(v.x_el_on, sol.x_el_on);
    put_binary(v.x_bat_ch_da, sol.x_bat_ch_da);
    if (static_cast<int>(sol.scenarios.size()) != static_cast<int>(v.dev.size())) {
        throw IncompleteSolution("stored solution scenario count mismatch");
    }
    for (std::size_t s = 0; s < sol.scenarios.size(); ++s) {
        const ScenarioSolution& sc = sol.scenarios[s];
        put_series(v.dev[s], sc.dev);
        put_series(v.realized[s], sc.realized);
        put_series(v.res_used[s], sc.res_used);
        put_series(v.ch_bal_up[s], sc.ch_bal_up);
        put_series(v.ch_bal_dn[s], sc.ch_bal_dn);
        put_series(v.dis_bal_up[s], sc.dis_bal_up);
        put_series(v.dis_bal_dn[s], sc.dis_bal_dn);
        put_series(v.el_bal_up[s], sc.el_bal_up);
        put_series(v.el_bal_dn[s], sc.el_bal_dn);
        put_series(v.soe[s], sc.soe);
        put_series(v.h2_kg[s], sc.h2_kg);
        put_series(v.el_power[s], sc.el_power);
        put_series(v.el_net[s], sc.el_net);
        put_binary(v.x_bat_bal[s], sc.x_bat_bal);
        if (!v.soe_seg.empty()) {
            if (sc.soe_seg.size() != v.soe_seg[s].size()) {
                throw IncompleteSolution("stored solution segment shape mismatch");
            }
            for (std::size_t t = 0; t < v.soe_seg[s].size(); ++t) {
                put_series(v.soe_seg[s][t], sc.soe_seg[t]);
            }
        }
        put_series(robust.y[s], sc.y);
        put_series(robust.z[s], sc.z);
        put_series(robust.mu1[s], sc.mu1);
        put_series(robust.mu2[s], sc.mu2);
        put_binary(robust.xd1[s], sc.xd1);
        put_binary(robust.xd2[s], sc.xd2);
        put(robust.omega[s], sc.omega);
    }
    for (double value : point) {
        if (std::isnan(value)) {
            throw IncompleteSolution("stored solution leaves model variables unassigned");
        }
    }
    return point;
}

std::string serialize_solution(const Solution& sol) {
    json doc;
    doc["gamma"] = sol.gamma;
    doc["objective"] = sol.objective;
    doc["status"] = to_string(sol.status);
    doc["mip_gap"] = sol.mip_gap;
    doc["first_stage"] = {{"mp", sol.mp},       {"ch_da", sol.ch_da},
                          {"dis_da", sol.dis_da}, {"el_da", sol.el_da},
                          {"x_el_on", sol.x_el_on}, {"x_bat_ch_da", sol.x_bat_ch_da}};
    json scenarios = json::array();
    for (const ScenarioSolution& sc : sol.scenarios) {
        scenarios.push_back({{"probability", sc.probability},
                             {"d", sc.dev},
                             {"r", sc.realized},
                             {"res_used", sc.res_used},
                             {"ch_bal_up", sc.ch_bal_up},
                             {"ch_bal_dn", sc.ch_bal_dn},
                             {"dis_bal_up", sc.dis_bal_up},
                             {"dis_bal_dn", sc.dis_bal_dn},
                             {"el_bal_up", sc.el_bal_up},
                             {"el_bal_dn", sc.el_bal_dn},
                             {"soe", sc.soe},
                             {"h2_kg", sc.h2_kg},
                             {"el_power", sc.el_power},
                             {"el_net", sc.el_net},
                             {"soe_seg", sc.soe_seg},
                             {"x_bat_bal", sc.x_bat_bal},
                             {"y", sc.y},
                             {"z", sc.z},
                             {"mu1", sc.mu1},
                             {"mu2", sc.mu2},
                             {"xd1", sc.xd1},
                             {"xd2", sc.xd2},
                             {"omega", sc.omega}});
    }
    doc["scenarios"] = std::move(scenarios);
    return doc.dump(2) + "\n";
}

Solution parse_solution(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("solution JSON: ") + e.what());
    }
    Solution sol;
    try {
        sol.gamma = doc.at("gamma").get<int>();
        sol.objective = doc.at("objective").get<double>();
        std::string status = doc.at("status").get<std::string>();
        if (status == "optimal") {
            sol.status = SolveStatus::Optimal;
        } else if (status == "time_limit") {
            sol.status = SolveStatus::TimeLimit;
        } else if (status == "infeasible") {
            sol.status = SolveStatus::Infeasible;
        } else if (status == "unbounded") {
            sol.status = SolveStatus::Unbounded;
        } else {
            sol.status = SolveStatus::NumericFailure;
        }
        sol.mip_gap = doc.value("mip_gap", 0.0);
        const json& fs = doc.at("first_stage");
        sol.mp = fs.at("mp").get<std::vector<double>>();
        sol.ch_da = fs.at("ch_da").get<std::vector<double>>();
        sol.dis_da = fs.at("dis_da").get<std::vector<double>>();
        sol.el_da = fs.at("el_da").get<std::vector<double>>();
        sol.x_el_on = fs.at("x_el_on").get<std::vector<int>>();
        sol.x_bat_ch_da = fs.at("x_bat_ch_da").get<std::vector<int>>();
        for (const json& item : doc.at("scenarios")) {
            ScenarioSolution sc;
            sc.probability = item.at("probability").get<double>();
            sc.dev = item.at("d").get<std::vector<double>>();
            sc.realized = item.at("r").get<std::vector<double>>();
            sc.res_used = item.at("res_used").get<std::vector<double>>();
            sc.ch_bal_up = item.at("ch_bal_up").get<std::vector<double>>();
            sc.ch_bal_dn = item.at("ch_bal_dn").get<std::vector<double>>();
            sc.dis_bal_up = item.at("dis_bal_up").get<std::vector<double>>();
            sc.dis_bal_dn = item.at("dis_bal_dn").get<std::vector<double>>();
            sc.el_bal_up = item.at("el_bal_up").get<std::vector<double>>();
            sc.el_bal_dn = item.at("el_bal_dn").get<std::vector<double>>();
            sc.soe = item.at("soe").get<std::vector<double>>();
            sc.h2_kg = item.at("h2_kg").get<std::vector<double>>();
            sc.el_power = item.at("el_power").get<std::vector<double>>();
            sc.el_net = item.at("el_net").get<std::vector<double>>();
            sc.soe_seg = item.at("soe_seg").get<std::vector<std::vector<double>>>();
            sc.x_bat_bal = item.at("x_bat_bal").get<std::vector<int>>();
            sc.y = item.at("y").get<std::vector<double>>();
            sc.z = item.at("z").get<std::vector<double>>();
            sc.mu1 = item.at("mu1").get<std::vector<double>>();
            sc.mu2 = item.at("mu2").get<std::vector<double>>();
            sc.xd1 = item.at("xd1").get<std::vector<int>>();
            sc.xd2 = item.at("xd2").get<std::vector<int>>();
            sc.omega = item.at("omega").get<double>();
            sol.scenarios.push_back(std::move(sc));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("solution JSON: ") + e.what());
    }
    return sol;
}

void save_solution(const Solution& solution, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write solution file " + path.string());
    }
    out << serialize_solution(solution);
}

Solution load_solution(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open solution file " + path.string());
    }
    std::ostringstream oss;
    oss << in.rdbuf();
    return parse_solution(oss.str());
}

}  // namespace hybridbid
