#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "hybridbid/instance.hpp"
#include "helpers.hpp"

using namespace hybridbid;
using nlohmann::json;

namespace {

const char* kMinimalInstance = R"({
  "time": {"n_periods": 1, "dt": 1.0},
  "prices": {"da": [42.0], "hydrogen": 2.0, "water": 0.397},
  "pv": {"forecast": [1.0], "scenarios": [[1.5]], "probabilities": [1.0]},
  "battery": {"capacity": 5.0, "rated_power": 5.0, "eta": 0.92},
  "electrolyzer": {"rated_power": 5.0, "min_stable_fraction": 0.1,
                   "power_per_kg": 0.0394, "alpha": 0.689, "beta": 0.011},
  "imbalance": {"kappa": 0.4, "gamma": 0},
  "grid": {"connection_limit": 20.0}
})";

std::filesystem::path write_temp(const std::string& text, const std::string& name) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("minimal single-period instance loads") {
    auto path = write_temp(kMinimalInstance, "hybridbid_min_instance.json");
    Instance inst = load_instance(path);
    CHECK(inst.n_periods() == 1);
    CHECK(inst.n_scenarios() == 1);
    CHECK(inst.pv.probabilities[0] == doctest::Approx(1.0));
}

TEST_CASE("case-study parameter block is echoed back") {
    Instance inst = parse_instance(kMinimalInstance);
    CHECK(inst.battery.capacity == 5.0);
    CHECK(inst.battery.rated_power == 5.0);
    CHECK(inst.battery.eta == 0.92);
    CHECK(inst.battery.initial_soe == 0.0);  // default
    CHECK(inst.electrolyzer.rated_power == 5.0);
    CHECK(inst.electrolyzer.min_stable_fraction == 0.1);
    CHECK(inst.electrolyzer.power_per_kg == 0.0394);
    CHECK(inst.electrolyzer.alpha == 0.689);
    CHECK(inst.electrolyzer.beta == 0.011);
    CHECK(inst.imbalance.kappa == 0.4);
    CHECK(inst.grid.connection_limit == 20.0);
    CHECK(inst.prices.hydrogen_price == 2.0);
    CHECK(inst.prices.water_price == 0.397);
    CHECK(inst.electrolyzer.water_per_kg == 0.010);  // default
}

TEST_CASE("bad probability mass is rejected with the field path") {
    json doc = json::parse(kMinimalInstance);
    doc["pv"]["probabilities"] = {0.8};
    CHECK_THROWS_WITH_AS(parse_instance(doc.dump()),
                         doctest::Contains("pv.probabilities"), ValidationError);

    // near-1 sums are renormalized instead
    doc["pv"]["probabilities"] = {1.0000004};
    Instance inst = parse_instance(doc.dump());
    CHECK(inst.pv.probabilities[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("probabilities default to uniform") {
    json doc = json::parse(kMinimalInstance);
    doc["pv"]["scenarios"] = {{1.0}, {2.0}, {0.5}, {1.5}};
    doc["pv"].erase("probabilities");
    Instance inst = parse_instance(doc.dump());
    REQUIRE(inst.n_scenarios() == 4);
    for (double p : inst.pv.probabilities) {
        CHECK(p == doctest::Approx(0.25));
    }
}

TEST_CASE("malformed JSON raises ParseError") {
    CHECK_THROWS_AS(parse_instance("{not json"), ParseError);
    CHECK_THROWS_AS(parse_instance("[1,2,3]"), ParseError);
}

TEST_CASE("serialization round-trips field by field") {
    Instance inst = testutil::small_instance(3, 2);
    inst.prices.da_price = {28.5, -4.0, 94.43};
    inst.pv.forecast = {0.0, 1.25, 0.5};
    Instance reloaded = parse_instance(serialize_instance(inst));
    CHECK(instances_equal(inst, reloaded));
}

TEST_CASE("random single-field corruption never yields a silently bad instance") {
    std::mt19937 rng(20240817);
    const std::vector<std::pair<std::string, std::string>> scalar_fields = {
        {"battery", "eta"},         {"battery", "capacity"},
        {"battery", "initial_soe"}, {"electrolyzer", "alpha"},
        {"electrolyzer", "rated_power"}, {"imbalance", "kappa"},
        {"imbalance", "gamma"},     {"grid", "connection_limit"},
        {"time", "dt"},             {"prices", "hydrogen"},
    };
    std::uniform_int_distribution<std::size_t> pick(0, scalar_fields.size() - 1);
    std::uniform_real_distribution<double> corrupt(-10.0, 10.0);

    int rejected = 0;
    for (int trial = 0; trial < 60; ++trial) {
        json doc = json::parse(serialize_instance(testutil::small_instance(2, 2)));
        const auto& [section, key] = scalar_fields[pick(rng)];
        doc[section][key] = corrupt(rng);
        try {
            Instance inst = parse_instance(doc.dump());
            inst.validate();  // corruption landed in the valid range
        } catch (const ValidationError&) {
            ++rejected;
        } catch (const ParseError&) {
            ++rejected;
        }
    }
    CHECK(rejected > 0);  // the corruptions must not all pass silently
}

TEST_CASE("direction sequences parse and enforce row length") {
    auto path = write_temp("+,-,+\n-,-,-\n", "hybridbid_dirs.csv");
    auto sequences = load_direction_sequences(path, 3);
    REQUIRE(sequences.size() == 2);
    CHECK(sequences[0].directions[0] == Direction::SystemSurplus);
    CHECK(sequences[0].directions[1] == Direction::SystemShortage);
    CHECK(sequences[1].directions[2] == Direction::SystemShortage);

    auto empty = write_temp("", "hybridbid_dirs_empty.csv");
    CHECK(load_direction_sequences(empty, 3).empty());

    auto short_row = write_temp("+,-\n", "hybridbid_dirs_short.csv");
    CHECK_THROWS_AS(load_direction_sequences(short_row, 3), LengthMismatch);

    auto junk = write_temp("+,x,-\n", "hybridbid_dirs_junk.csv");
    CHECK_THROWS_AS(load_direction_sequences(junk, 3), ParseError);
}

TEST_CASE("thirty-day file loads with one sequence per row") {
    std::string text;
    for (int d = 0; d < 30; ++d) {
        for (int t = 0; t < 24; ++t) {
            text += (d + t) % 3 == 0 ? "+" : "-";
            text += t + 1 < 24 ? "," : "";
        }
        text += "\n";
    }
    auto path = write_temp(text, "hybridbid_dirs30.csv");
    auto sequences = load_direction_sequences(path, 24);
    CHECK(sequences.size() == 30);
    CHECK(sequences[0].directions.size() == 24);
}

TEST_CASE("charge curve invariants are enforced") {
    json doc = json::parse(kMinimalInstance);
    doc["battery"]["charge_curve_R"] = {0.0, 0.8, 0.5, 1.0};
    doc["battery"]["charge_curve_F"] = {1.0, 1.0, 0.6, 0.2};
    CHECK_THROWS_WITH_AS(parse_instance(doc.dump()),
                         doctest::Contains("charge_curve_R"), ValidationError);

    doc["battery"]["charge_curve_R"] = {0.0, 0.5, 0.8, 1.0};
    doc["battery"]["charge_curve_F"] = {1.0, 1.0, 1.2, 0.2};
    CHECK_THROWS_WITH_AS(parse_instance(doc.dump()),
                         doctest::Contains("charge_curve_F"), ValidationError);
}

TEST_CASE("gamma outside the horizon is rejected") {
    json doc = json::parse(kMinimalInstance);
    doc["imbalance"]["gamma"] = 5;  // n_periods is 1
    CHECK_THROWS_WITH_AS(parse_instance(doc.dump()), doctest::Contains("imbalance.gamma"),
                         ValidationError);
}
