#include "hybridbid/robust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hybridbid/solution.hpp"

namespace hybridbid {

namespace {

std::string idx(const std::string& base, int t, int s) {
    return base + "[" + std::to_string(t) + "," + std::to_string(s) + "]";
}

}  // namespace

RobustVars apply_robust_objective(ModelIR& m, const VariableRegistry& v, const Instance& inst) {
    const int T = inst.n_periods();
    const int S = inst.n_scenarios();
    const double kappa = inst.imbalance.kappa;
    const int gamma = inst.imbalance.gamma;
    const double h2_margin = inst.prices.hydrogen_price -
                             inst.prices.water_price * inst.electrolyzer.water_per_kg;

    RobustVars r;
    r.big_m_dev = 4.0 * inst.grid.connection_limit * inst.time.dt;
    r.big_m_mu = 1.0;
    r.omega.resize(S);
    r.z.assign(S, std::vector<VarRef>(T));
    r.y.assign(S, std::vector<VarRef>(T));
    r.mu1.assign(S, std::vector<VarRef>(T));
    r.mu2.assign(S, std::vector<VarRef>(T));
    r.xd1.assign(S, std::vector<VarRef>(T));
    r.xd2.assign(S, std::vector<VarRef>(T));

    for (int s = 0; s < S; ++s) {
        r.omega[s] = m.add_continuous("omega[" + std::to_string(s) + "]", 0.0, kInf);
        for (int t = 0; t < T; ++t) {
            Interval d_range = deviation_range(inst, t, s);
            double y_max = std::max(-d_range.lo, d_range.hi);
            r.z[s][t] = m.add_continuous(idx("z", t, s), 0.0, kInf);
            r.y[s][t] = m.add_continuous(idx("y", t, s), 0.0, y_max);
            r.mu1[s][t] = m.add_continuous(idx("mu1", t, s), 0.0, 1.0);
            r.mu2[s][t] = m.add_continuous(idx("mu2", t, s), 0.0, 1.0);
            r.xd1[s][t] = m.add_binary(idx("x_d1", t, s));
            r.xd2[s][t] = m.add_binary(idx("x_d2", t, s));
        }
    }

    for (int s = 0; s < S; ++s) {
        const double pi = inst.pv.probabilities[s];
        m.set_objective_coeff(r.omega[s], -pi * static_cast<double>(gamma));
        for (int t = 0; t < T; ++t) {
            const double lambda = inst.prices.da_price[t];
            m.set_objective_coeff(v.dev[s][t], pi * lambda);
            m.set_objective_coeff(v.h2_kg[s][t], pi * h2_margin);
            m.set_objective_coeff(r.z[s][t], -pi);
            m.set_objective_coeff(r.y[s][t], pi * lambda * kappa);

            // dual feasibility of the budgeted direction choice
            m.add_row(idx("dual_budget", t, s),
                      {{r.omega[s], 1.0}, {r.z[s][t], 1.0}, {r.y[s][t], -2.0 * lambda * kappa}},
                      RowSense::GreaterEqual, 0.0);
            // absolute-value envelope
            m.add_row(idx("abs_pos", t, s), {{r.y[s][t], 1.0}, {v.dev[s][t], -1.0}},
                      RowSense::GreaterEqual, 0.0);
            m.add_row(idx("abs_neg", t, s), {{r.y[s][t], 1.0}, {v.dev[s][t], 1.0}},
                      RowSense::GreaterEqual, 0.0);
            // stationarity of the |d| minimization
            m.add_row(idx("mu_sum", t, s), {{r.mu1[s][t], 1.0}, {r.mu2[s][t], 1.0}},
                      RowSense::Equal, 1.0);
            // complementarity via big-M switches: xd1 pins y = d, xd2 pins y = -d.
            // Each pair gets the tightest constant its own deviation range
            // admits; the global 4*Pgrid*dt value stays a valid fallback but
            // makes the relaxation too weak to solve at realistic sizes.
            Interval d_range = deviation_range(inst, t, s);
            double y_max = std::max(-d_range.lo, d_range.hi);
            double m_pos = std::min(r.big_m_dev, y_max - d_range.lo);
            double m_neg = std::min(r.big_m_dev, y_max + d_range.hi);
            m.add_row(idx("compl_pos", t, s),
                      {{v.dev[s][t], 1.0}, {r.y[s][t], -1.0}, {r.xd1[s][t], -m_pos}},
                      RowSense::GreaterEqual, -m_pos);
            m.add_row(idx("compl_pos_mu", t, s),
                      {{r.mu1[s][t], 1.0}, {r.xd1[s][t], -r.big_m_mu}}, RowSense::LessEqual,
                      0.0);
            m.add_row(idx("compl_neg", t, s),
                      {{v.dev[s][t], -1.0}, {r.y[s][t], -1.0}, {r.xd2[s][t], -m_neg}},
                      RowSense::GreaterEqual, -m_neg);
            m.add_row(idx("compl_neg_mu", t, s),
                      {{r.mu2[s][t], 1.0}, {r.xd2[s][t], -r.big_m_mu}}, RowSense::LessEqual,
                      0.0);
            // exactly one switch active: every feasible (y, d) assignment is
            // still reachable, and branching on one switch pins the hour
            m.add_row(idx("compl_link", t, s), {{r.xd1[s][t], 1.0}, {r.xd2[s][t], 1.0}},
                      RowSense::Equal, 1.0);
        }
    }

    for (int t = 0; t < T; ++t) {
        m.add_objective_coeff(v.mp[t], inst.prices.da_price[t]);
    }
    return r;
}

InnerWorstCase inner_worst_case(const std::vector<double>& deviations,
                                const std::vector<double>& da_price, double kappa, int gamma) {
    const int T = static_cast<int>(deviations.size());
    if (static_cast<int>(da_price.size()) != T) {
        throw LengthMismatch("deviations and da_price differ in length");
    }
    std::vector<double> weight(T);
    for (int t = 0; t < T; ++t) {
        weight[t] = da_price[t] * kappa * std::abs(deviations[t]);
    }
    std::vector<int> order(T);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (weight[a] != weight[b]) {
            return weight[a] > weight[b];
        }
        return a < b;
    });

    InnerWorstCase out;
    out.unfavorable.assign(T, false);
    int budget = std::min(gamma, T);
    // flipping a non-positive weight never helps the adversary
    for (int k = 0; k < budget && k < T; ++k) {
        if (weight[order[k]] > 0.0) {
            out.unfavorable[order[k]] = true;
        }
    }
    for (int t = 0; t < T; ++t) {
        out.value += out.unfavorable[t] ? weight[t] : -weight[t];
    }
    return out;
}

DualityReport verify_duality(const Solution& sol, const Instance& inst, double tol) {
    DualityReport report;
    const int T = inst.n_periods();
    const double kappa = inst.imbalance.kappa;
    if (sol.n_periods() != T || sol.n_scenarios() != inst.n_scenarios()) {
        throw IncompleteSolution("solution shape does not match instance");
    }
    for (int s = 0; s < sol.n_scenarios(); ++s) {
        const ScenarioSolution& sc = sol.scenarios[s];
        if (static_cast<int>(sc.dev.size()) != T || static_cast<int>(sc.y.size()) != T ||
            static_cast<int>(sc.z.size()) != T) {
            throw IncompleteSolution("scenario " + std::to_string(s) + " lacks robust values");
        }

        for (int t = 0; t < T; ++t) {
            double gap = std::abs(sc.y[t] - std::abs(sc.dev[t]));
            double scale = std::max(1.0, std::abs(sc.dev[t]));
            if (gap > tol * scale) {
                report.findings.push_back(
                    {s, gap,
                     "y[" + std::to_string(t) + "," + std::to_string(s) + "]=" +
                         std::to_string(sc.y[t]) + " but |d|=" +
                         std::to_string(std::abs(sc.dev[t]))});
            }
        }

        // robust contribution as embedded in the solved objective
        double embedded = -sc.omega * static_cast<double>(sol.gamma);
        for (int t = 0; t < T; ++t) {
            embedded += -sc.z[t] + inst.prices.da_price[t] * kappa * sc.y[t];
        }
        InnerWorstCase wc = inner_worst_case(sc.dev, inst.prices.da_price, kappa, sol.gamma);
        double gap = std::abs(embedded - (-wc.value));
        double scale = std::max(1.0, std::max(std::abs(embedded), std::abs(wc.value)));
        if (gap > tol * scale) {
            report.findings.push_back(
                {s, gap,
                 "robust contribution " + std::to_string(embedded) +
                     " != analytic worst case " + std::to_string(-wc.value)});
        }
    }
    return report;
}

void require_duality(const Solution& sol, const Instance& inst, double tol) {
    DualityReport report = verify_duality(sol, inst, tol);
    if (!report.ok()) {
        const DualityFinding& f = report.findings.front();
        throw DualityGap(f.scenario, f.magnitude,
                         "duality check failed (scenario " + std::to_string(f.scenario) +
                             "): " + f.detail);
    }
}

std::vector<DirectionSequence> worst_case_directions(const Solution& sol,
                                                     const Instance& inst) {
    std::vector<DirectionSequence> out;
    out.reserve(sol.n_scenarios());
    for (int s = 0; s < sol.n_scenarios(); ++s) {
        const ScenarioSolution& sc = sol.scenarios[s];
        InnerWorstCase wc = inner_worst_case(sc.dev, inst.prices.da_price,
                                             inst.imbalance.kappa, sol.gamma);
        DirectionSequence seq;
        seq.directions.reserve(inst.n_periods());
        for (int t = 0; t < inst.n_periods(); ++t) {
            bool unfavorable = wc.unfavorable[t];
            // The settlement sign that reproduces the objective term:
            // favorable pays lambda*(d + kappa*|d|), unfavorable the opposite.
            Direction dir;
            if (sc.dev[t] >= 0.0) {
                dir = unfavorable ? Direction::SystemSurplus : Direction::SystemShortage;
            } else {
                dir = unfavorable ? Direction::SystemShortage : Direction::SystemSurplus;
            }
            seq.directions.push_back(dir);
        }
        out.push_back(std::move(seq));
    }
    return out;
}

}  // namespace hybridbid
