#include <doctest.h>

#include <random>

#include "hybridbid/pipeline.hpp"
#include "hybridbid/robust.hpp"
#include "helpers.hpp"

using namespace hybridbid;

namespace {

// Reference evaluation of the direction subproblem: try every 0/1 vector
// within the budget.
double brute_force_worst_case(const std::vector<double>& d, const std::vector<double>& lambda,
                              double kappa, int gamma) {
    const int T = static_cast<int>(d.size());
    double best = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << T); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) > gamma) {
            continue;
        }
        double value = 0.0;
        for (int t = 0; t < T; ++t) {
            double term = lambda[t] * kappa * std::abs(d[t]);
            value += (mask >> t) & 1 ? term : -term;
        }
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

TEST_CASE("worst case flips the largest kappa-weighted deviations first") {
    std::vector<double> d{2.0, -1.0};
    std::vector<double> lambda{50.0, 100.0};

    SUBCASE("tied terms break toward the earlier hour") {
        InnerWorstCase wc = inner_worst_case(d, lambda, 0.4, 1);
        CHECK(wc.value == doctest::Approx(0.0));
        CHECK(wc.unfavorable == std::vector<bool>{true, false});
        CHECK(wc.value == doctest::Approx(brute_force_worst_case(d, lambda, 0.4, 1)));
    }
    SUBCASE("no budget leaves every hour favorable") {
        InnerWorstCase wc = inner_worst_case(d, lambda, 0.4, 0);
        CHECK(wc.value == doctest::Approx(-80.0));
        CHECK(wc.value == doctest::Approx(brute_force_worst_case(d, lambda, 0.4, 0)));
    }
    SUBCASE("full budget flips everything") {
        InnerWorstCase wc = inner_worst_case(d, lambda, 0.4, 2);
        CHECK(wc.value == doctest::Approx(80.0));
        CHECK(wc.value == doctest::Approx(brute_force_worst_case(d, lambda, 0.4, 2)));
    }
}

TEST_CASE("zero deviations make the worst case vanish for every budget") {
    std::vector<double> d{0.0, 0.0, 0.0};
    std::vector<double> lambda{50.0, 60.0, 70.0};
    for (int gamma = 0; gamma <= 3; ++gamma) {
        CHECK(inner_worst_case(d, lambda, 0.4, gamma).value == doctest::Approx(0.0));
    }
}

TEST_CASE("single-hour worst case matches the two-branch arithmetic") {
    CHECK(inner_worst_case({1.0}, {100.0}, 0.4, 0).value == doctest::Approx(-40.0));
    CHECK(inner_worst_case({1.0}, {100.0}, 0.4, 1).value == doctest::Approx(40.0));
}

TEST_CASE("analytic worst case equals subset enumeration on random data") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dev(-3.0, 3.0);
    std::uniform_real_distribution<double> price(-50.0, 120.0);  // negative prices included
    for (int trial = 0; trial < 200; ++trial) {
        int T = 1 + static_cast<int>(rng() % 4);
        std::vector<double> d(T), lambda(T);
        for (int t = 0; t < T; ++t) {
            d[t] = dev(rng);
            lambda[t] = price(rng);
        }
        for (int gamma = 0; gamma <= T; ++gamma) {
            double analytic = inner_worst_case(d, lambda, 0.4, gamma).value;
            double reference = brute_force_worst_case(d, lambda, 0.4, gamma);
            CHECK(analytic == doctest::Approx(reference).epsilon(1e-9));
        }
    }
}

TEST_CASE("continuous relaxation of the direction choice is tight") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> weight(-40.0, 90.0);
    for (int trial = 0; trial < 5; ++trial) {
        const int T = 4;
        std::vector<double> d(T, 1.0), lambda(T);
        for (int t = 0; t < T; ++t) {
            lambda[t] = weight(rng);
        }
        for (int gamma : {0, 1, 2, 4}) {
            // primal subproblem with b relaxed to [0,1]
            ModelIR lp;
            std::vector<VarRef> b(T);
            std::vector<LinearTerm> budget;
            double constant = 0.0;
            for (int t = 0; t < T; ++t) {
                b[t] = lp.add_continuous("b" + std::to_string(t), 0.0, 1.0);
                double term = lambda[t] * 0.4 * std::abs(d[t]);
                lp.set_objective_coeff(b[t], 2.0 * term);
                constant -= term;
                budget.push_back({b[t], 1.0});
            }
            lp.set_objective_constant(constant);
            lp.add_row("budget", budget, RowSense::LessEqual, static_cast<double>(gamma));

            SolveResult res = testutil::backend().solve(lp, {});
            REQUIRE(res.status == SolveStatus::Optimal);
            double analytic = inner_worst_case(d, lambda, 0.4, gamma).value;
            CHECK(res.objective_value == doctest::Approx(analytic).epsilon(1e-9));
        }
    }
}

TEST_CASE("duality verification passes on solved models and catches tampering") {
    Instance inst = testutil::small_instance(3, 2);
    inst.prices.da_price = {30.0, 70.0, 55.0};
    inst.pv.scenarios[0] = {0.0, 2.0, 1.0};
    inst.pv.scenarios[1] = {1.0, 0.5, 2.0};
    inst = inst.with_gamma(1);

    SolveOutcome outcome = solve_bidding(inst, testutil::backend(), {});
    REQUIRE(outcome.result.status == SolveStatus::Optimal);

    DualityReport report = verify_duality(outcome.solution, inst, 1e-4);
    CHECK(report.ok());

    Solution tampered = outcome.solution;
    tampered.scenarios[1].y[2] = std::abs(tampered.scenarios[1].dev[2]) + 0.5;
    DualityReport flagged = verify_duality(tampered, inst, 1e-4);
    CHECK(!flagged.ok());
    CHECK(flagged.findings.front().scenario == 1);
    CHECK_THROWS_AS(require_duality(tampered, inst, 1e-4), DualityGap);
}

TEST_CASE("kappa zero collapses the robust term") {
    Instance inst = testutil::small_instance(3, 2);
    inst.prices.da_price = {30.0, 70.0, 55.0};
    inst.pv.scenarios[0] = {0.0, 2.0, 1.0};
    inst.pv.scenarios[1] = {1.0, 0.5, 2.0};
    inst.imbalance.kappa = 0.0;

    SolveOutcome optimistic = solve_bidding(inst.with_gamma(0), testutil::backend(), {});
    SolveOutcome pessimistic = solve_bidding(inst.with_gamma(3), testutil::backend(), {});
    REQUIRE(optimistic.result.status == SolveStatus::Optimal);
    REQUIRE(pessimistic.result.status == SolveStatus::Optimal);
    CHECK(testutil::approx_rel(optimistic.result.objective_value,
                               pessimistic.result.objective_value, 1e-6));

    DualityReport report = verify_duality(optimistic.solution, inst.with_gamma(0), 1e-6);
    CHECK(report.ok());
}

TEST_CASE("objective is non-increasing in the uncertainty budget") {
    Instance inst = testutil::small_instance(3, 2);
    inst.prices.da_price = {25.0, 85.0, 60.0};
    inst.pv.scenarios[0] = {0.5, 2.0, 0.0};
    inst.pv.scenarios[1] = {1.5, 0.0, 2.0};

    double previous = std::numeric_limits<double>::infinity();
    for (int gamma = 0; gamma <= 3; ++gamma) {
        SolveOutcome outcome = solve_bidding(inst.with_gamma(gamma), testutil::backend(), {});
        REQUIRE(outcome.result.status == SolveStatus::Optimal);
        CHECK(outcome.result.objective_value <=
              previous + 2e-6 * std::max(1.0, std::abs(previous)));
        previous = outcome.result.objective_value;
    }
}

TEST_CASE("worst-case directions reproduce the embedded robust value") {
    Instance inst = testutil::small_instance(2, 1);
    inst.prices.da_price = {40.0, 90.0};
    inst.pv.scenarios[0] = {2.0, 0.0};
    inst = inst.with_gamma(1);

    SolveOutcome outcome = solve_bidding(inst, testutil::backend(), {});
    REQUIRE(outcome.result.status == SolveStatus::Optimal);
    auto sequences = worst_case_directions(outcome.solution, inst);
    REQUIRE(sequences.size() == 1);

    const ScenarioSolution& sc = outcome.solution.scenarios[0];
    double settled = 0.0;
    for (int t = 0; t < inst.n_periods(); ++t) {
        double price = sequences[0].directions[t] == Direction::SystemSurplus
                           ? inst.prices.da_price[t] * (1.0 - inst.imbalance.kappa)
                           : inst.prices.da_price[t] * (1.0 + inst.imbalance.kappa);
        settled += price * sc.dev[t];
    }
    double expected = 0.0;
    InnerWorstCase wc = inner_worst_case(sc.dev, inst.prices.da_price, inst.imbalance.kappa,
                                         inst.imbalance.gamma);
    for (int t = 0; t < inst.n_periods(); ++t) {
        expected += inst.prices.da_price[t] * sc.dev[t];
    }
    expected -= wc.value;
    CHECK(settled == doctest::Approx(expected).epsilon(1e-9));
}
