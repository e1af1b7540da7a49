#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "hybridbid/facility.hpp"
#include "hybridbid/pipeline.hpp"
#include "helpers.hpp"

using namespace hybridbid;

namespace {

BatteryParams paper_battery() {
    BatteryParams b;
    b.capacity = 5.0;
    b.rated_power = 5.0;
    b.eta = 0.92;
    b.initial_soe = 0.0;
    b.charge_curve_R = {0.0, 0.5, 0.8, 1.0};
    b.charge_curve_F = {1.0, 1.0, 0.6, 0.2};
    return b;
}

}  // namespace

TEST_CASE("admissible charge power from the piecewise curve") {
    BatteryParams b = paper_battery();

    SUBCASE("empty battery charges at the full curve value") {
        std::vector<double> empty{0.0, 0.0, 0.0};
        double power = battery_max_charge_power(empty, b, 1.0);
        CHECK(power == doctest::Approx(5.0 / 0.92).epsilon(1e-12));
        CHECK(std::min(power, b.rated_power) == doctest::Approx(5.0));
    }

    SUBCASE("full battery tapers to the last curve fraction") {
        std::vector<double> full{2.5, 1.5, 1.0};
        CHECK(battery_max_charge_power(full, b, 1.0) ==
              doctest::Approx(0.2 * 5.0 / 0.92).epsilon(1e-12));
    }

    SUBCASE("flat curve degenerates to capacity over dt*eta") {
        b.charge_curve_R = {0.0, 1.0};
        b.charge_curve_F = {1.0, 1.0};
        for (double soe : {0.0, 2.0, 5.0}) {
            std::vector<double> fill = greedy_segment_fill(soe, b);
            CHECK(battery_max_charge_power(fill, b, 1.0) ==
                  doctest::Approx(5.0 / 0.92).epsilon(1e-12));
        }
    }

    SUBCASE("segment overflow is rejected") {
        std::vector<double> overflow{2.6, 0.0, 0.0};  // first segment width is 2.5
        CHECK_THROWS_AS(battery_max_charge_power(overflow, b, 1.0), SegmentOverflow);
    }

    SUBCASE("greedy fill packs segments low to high") {
        std::vector<double> fill = greedy_segment_fill(3.0, b);
        CHECK(fill[0] == doctest::Approx(2.5));
        CHECK(fill[1] == doctest::Approx(0.5));
        CHECK(fill[2] == doctest::Approx(0.0));
    }
}

TEST_CASE("hydrogen output from the inefficiency coefficients") {
    ElectrolyzerParams e;
    e.rated_power = 5.0;
    e.min_stable_fraction = 0.1;
    e.power_per_kg = 0.0394;
    e.alpha = 0.689;
    e.beta = 0.011;

    CHECK(hydrogen_output(5.0, true, e) == doctest::Approx(88.8325).epsilon(1e-4));
    CHECK(hydrogen_output(0.5, true, e) == doctest::Approx(10.1396).epsilon(1e-4));
    CHECK(hydrogen_output(0.0, false, e) == 0.0);
    CHECK_THROWS_AS(hydrogen_output(0.3, true, e), PowerOutOfRange);   // below 10% minimum
    CHECK_THROWS_AS(hydrogen_output(5.5, true, e), PowerOutOfRange);
    CHECK_THROWS_AS(hydrogen_output(1.0, false, e), PowerOutOfRange);
}

TEST_CASE("specific hydrogen yield per MWh falls as power rises") {
    ElectrolyzerParams e;
    e.rated_power = 5.0;
    e.min_stable_fraction = 0.1;
    e.power_per_kg = 0.0394;
    e.alpha = 0.689;
    e.beta = 0.011;
    double previous = hydrogen_output(0.5, true, e) / 0.5;
    for (double p = 1.0; p <= 5.0; p += 0.5) {
        double yield = hydrogen_output(p, true, e) / p;
        CHECK(yield < previous);
        previous = yield;
    }
}

TEST_CASE("single-period model contains exactly the hand-enumerated rows") {
    Instance inst = testutil::small_instance(1, 1);
    BiddingModel bm = build_bidding_model(inst);

    std::set<std::string> expected = {
        // per hour
        "mp_def[0]", "da_dis_sel[0]", "da_ch_sel[0]",
        // per hour and scenario
        "dev_def[0,0]", "real_def[0,0]", "soe_bal[0,0]", "soe_sum[0,0]", "charge_lim[0,0]",
        "bal_excl_a[0,0]", "bal_excl_b[0,0]", "ch_cap[0,0]", "ch_dn_cap[0,0]", "dis_cap[0,0]",
        "dis_dn_cap[0,0]", "el_def[0,0]", "el_min[0,0]", "el_max[0,0]", "h2_conv[0,0]",
        "el_net_def[0,0]", "el_up_cap[0,0]", "el_dn_cap[0,0]",
        // robust block
        "dual_budget[0,0]", "abs_pos[0,0]", "abs_neg[0,0]", "mu_sum[0,0]", "compl_pos[0,0]",
        "compl_pos_mu[0,0]", "compl_neg[0,0]", "compl_neg_mu[0,0]"};
    std::set<std::string> actual;
    for (const RowDef& row : bm.facility.model.rows()) {
        actual.insert(row.name);
    }
    CHECK(actual == expected);
    CHECK(bm.facility.model.num_rows() == 29);
    // 6 first-stage + (20 + 3 segments) per (t,s) + 1 budget dual
    CHECK(bm.facility.model.num_variables() == 30);
}

TEST_CASE("row and variable counts scale as 26TS+3T and 6T+23TS+S") {
    Instance inst = testutil::small_instance(24, 8);
    BiddingModel bm = build_bidding_model(inst);
    const int T = 24, S = 8;
    CHECK(bm.facility.model.num_rows() == 26 * T * S + 3 * T);
    CHECK(bm.facility.model.num_variables() == 6 * T + 23 * T * S + S);

    int binaries = 0;
    for (const VariableDef& var : bm.facility.model.variables()) {
        binaries += var.kind == VarKind::Binary ? 1 : 0;
    }
    CHECK(binaries == 2 * T + 3 * T * S);
}

TEST_CASE("technical-minimum row scales with the on binary") {
    Instance inst = testutil::small_instance(1, 1);
    inst.electrolyzer.rated_power = 5.0;
    inst.electrolyzer.min_stable_fraction = 0.1;
    BiddingModel bm = build_bidding_model(inst);

    bool found = false;
    for (const RowDef& row : bm.facility.model.rows()) {
        if (row.name != "el_min[0,0]") {
            continue;
        }
        found = true;
        REQUIRE(row.terms.size() == 2);
        for (const LinearTerm& term : row.terms) {
            const std::string& name = bm.facility.model.variable(term.var).name;
            if (name == "x_e[0]") {
                CHECK(term.coeff == doctest::Approx(-0.5));  // 10% of 5 MW
            }
        }
    }
    CHECK(found);
}

TEST_CASE("solved dispatch honors the physical invariants") {
    Instance inst = testutil::small_instance(3, 2);
    inst.prices.da_price = {20.0, 80.0, 50.0};
    inst.pv.scenarios[0] = {0.5, 2.0, 1.0};
    inst.pv.scenarios[1] = {1.5, 0.0, 2.5};
    inst.imbalance.gamma = 1;
    inst = inst.with_gamma(1);

    BiddingModel bm = build_bidding_model(inst);
    SolveResult result = testutil::backend().solve(bm.facility.model, {});
    REQUIRE(result.status == SolveStatus::Optimal);
    Solution sol = extract_solution(result, bm.facility, bm.robust, inst);

    for (int t = 0; t < inst.n_periods(); ++t) {
        CHECK(std::abs(sol.mp[t]) <= inst.grid.connection_limit + 1e-6);
        CHECK(sol.ch_da[t] * sol.dis_da[t] == doctest::Approx(0.0).epsilon(1e-9));
        for (int s = 0; s < inst.n_scenarios(); ++s) {
            const ScenarioSolution& sc = sol.scenarios[s];
            CHECK(sc.dev[t] ==
                  doctest::Approx(sc.realized[t] - sol.mp[t]).epsilon(1e-9));
            CHECK(std::abs(sc.realized[t]) <= inst.grid.connection_limit + 1e-6);
            CHECK(sc.soe[t] >= -1e-6);
            CHECK(sc.soe[t] <= inst.battery.capacity + 1e-6);
            CHECK(sc.res_used[t] <= inst.pv.scenarios[s][t] + 1e-6);
            CHECK(sc.res_used[t] >= -1e-6);
            double group_a = sc.ch_bal_up[t] + sc.dis_bal_dn[t];
            double group_b = sc.ch_bal_dn[t] + sc.dis_bal_up[t];
            CHECK(group_a * group_b == doctest::Approx(0.0).epsilon(1e-9));
            CHECK(sc.ch_bal_dn[t] <= sol.ch_da[t] + 1e-6);
            CHECK(sc.dis_bal_dn[t] <= sol.dis_da[t] + 1e-6);
            CHECK(sc.el_bal_dn[t] <= sol.el_da[t] + 1e-6);
            CHECK(sc.y[t] == doctest::Approx(std::abs(sc.dev[t])).epsilon(1e-6));
        }
    }
    CHECK(evaluate_constraints(bm.facility.model, result.primal).empty());
}

TEST_CASE("flat charge curve equals the simple battery model") {
    Instance flat = testutil::small_instance(3, 1);
    flat.prices.da_price = {10.0, 90.0, 40.0};
    flat.pv.scenarios[0] = {2.0, 0.0, 1.0};
    flat.battery.charge_curve_R = {0.0, 1.0};
    flat.battery.charge_curve_F = {1.0, 1.0};

    for (int gamma : {0, 3}) {
        Instance inst = flat.with_gamma(gamma);
        BiddingModel accurate = build_bidding_model(inst);
        SolveResult with_curve = testutil::backend().solve(accurate.facility.model, {});

        FacilityBuildOptions simple_options;
        simple_options.accurate_charging = false;
        BiddingModel simple;
        simple.facility = build_facility(inst, simple_options);
        simple.robust = apply_robust_objective(simple.facility.model, simple.facility.vars, inst);
        SolveResult without_curve = testutil::backend().solve(simple.facility.model, {});

        REQUIRE(with_curve.status == SolveStatus::Optimal);
        REQUIRE(without_curve.status == SolveStatus::Optimal);
        CHECK(testutil::approx_rel(with_curve.objective_value, without_curve.objective_value,
                                   2e-6));
    }
}

TEST_CASE("disabled technologies pin their variables to zero") {
    Instance inst = testutil::small_instance(2, 1).without_battery().without_electrolyzer();
    SolveOutcome outcome = solve_bidding(inst, testutil::backend(), {});
    REQUIRE(outcome.result.status == SolveStatus::Optimal);
    for (int t = 0; t < inst.n_periods(); ++t) {
        CHECK(outcome.solution.ch_da[t] == 0.0);
        CHECK(outcome.solution.dis_da[t] == 0.0);
        CHECK(outcome.solution.el_da[t] == 0.0);
        CHECK(outcome.solution.scenarios[0].el_power[t] == 0.0);
        CHECK(outcome.solution.scenarios[0].h2_kg[t] == 0.0);
    }
}
