#include "hybridbid/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace hybridbid {

namespace {

void require(bool condition, const std::string& field, const std::string& message) {
    if (!condition) {
        throw ValidationError(field + ": " + message);
    }
}

void require_finite(const std::vector<double>& values, const std::string& field) {
    for (double v : values) {
        require(std::isfinite(v), field, "must be finite");
    }
}

std::vector<double> get_series(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || !obj.at(key).is_array()) {
        throw ValidationError(path + ": missing or not an array");
    }
    std::vector<double> out;
    for (const auto& v : obj.at(key)) {
        if (!v.is_number()) {
            throw ValidationError(path + ": non-numeric entry");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw ValidationError(path + ": missing or not a number");
    }
    return obj.at(key).get<double>();
}

double get_number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return obj.at(key).get<double>();
}

const json& get_object(const json& obj, const std::string& key) {
    if (!obj.contains(key) || !obj.at(key).is_object()) {
        throw ValidationError(key + ": missing or not an object");
    }
    return obj.at(key);
}

}  // namespace

void Instance::validate() const {
    const int T = time.n_periods;
    require(T >= 1, "time.n_periods", "must be >= 1");
    require(time.dt > 0.0 && std::isfinite(time.dt), "time.dt", "must be > 0");

    require(static_cast<int>(prices.da_price.size()) == T, "prices.da",
            "length must equal n_periods");
    require_finite(prices.da_price, "prices.da");
    require(std::isfinite(prices.hydrogen_price) && prices.hydrogen_price >= 0.0,
            "prices.hydrogen", "must be >= 0");
    require(std::isfinite(prices.water_price) && prices.water_price >= 0.0, "prices.water",
            "must be >= 0");

    require(static_cast<int>(pv.forecast.size()) == T, "pv.forecast",
            "length must equal n_periods");
    require_finite(pv.forecast, "pv.forecast");
    for (double v : pv.forecast) {
        require(v >= 0.0, "pv.forecast", "must be >= 0");
    }
    require(!pv.scenarios.empty(), "pv.scenarios", "need at least one scenario");
    for (std::size_t s = 0; s < pv.scenarios.size(); ++s) {
        const std::string field = "pv.scenarios[" + std::to_string(s) + "]";
        require(static_cast<int>(pv.scenarios[s].size()) == T, field,
                "length must equal n_periods");
        require_finite(pv.scenarios[s], field);
        for (double v : pv.scenarios[s]) {
            require(v >= 0.0, field, "must be >= 0");
        }
    }
    require(pv.probabilities.size() == pv.scenarios.size(), "pv.probabilities",
            "length must equal scenario count");
    double prob_sum = 0.0;
    for (double p : pv.probabilities) {
        require(std::isfinite(p) && p >= 0.0, "pv.probabilities", "must be >= 0");
        prob_sum += p;
    }
    require(std::abs(prob_sum - 1.0) <= 1e-9, "pv.probabilities", "must sum to 1");

    require(std::isfinite(battery.capacity) && battery.capacity >= 0.0, "battery.capacity",
            "must be >= 0");
    require(std::isfinite(battery.rated_power) && battery.rated_power >= 0.0,
            "battery.rated_power", "must be >= 0");
    require(battery.eta > 0.0 && battery.eta <= 1.0, "battery.eta", "must be in (0,1]");
    require(battery.initial_soe >= 0.0 && battery.initial_soe <= battery.capacity,
            "battery.initial_soe", "must be in [0, capacity]");
    const auto& R = battery.charge_curve_R;
    const auto& F = battery.charge_curve_F;
    require(R.size() == F.size(), "battery.charge_curve_F", "must match charge_curve_R length");
    require(R.size() >= 2, "battery.charge_curve_R", "needs at least two breakpoints");
    require(std::abs(R.front()) <= 1e-12, "battery.charge_curve_R", "must start at 0");
    require(std::abs(R.back() - 1.0) <= 1e-12, "battery.charge_curve_R", "must end at 1");
    for (std::size_t i = 1; i < R.size(); ++i) {
        require(R[i] > R[i - 1], "battery.charge_curve_R", "must be strictly increasing");
        require(F[i] <= F[i - 1] + 1e-12, "battery.charge_curve_F", "must be non-increasing");
    }
    require(F.front() <= 1.0 + 1e-12, "battery.charge_curve_F", "first value must be <= 1");
    for (double f : F) {
        require(f >= 0.0, "battery.charge_curve_F", "must be >= 0");
    }

    require(std::isfinite(electrolyzer.rated_power) && electrolyzer.rated_power >= 0.0,
            "electrolyzer.rated_power", "must be >= 0");
    require(electrolyzer.min_stable_fraction >= 0.0 && electrolyzer.min_stable_fraction < 1.0,
            "electrolyzer.min_stable_fraction", "must be in [0,1)");
    require(electrolyzer.power_per_kg > 0.0, "electrolyzer.power_per_kg", "must be > 0");
    require(electrolyzer.alpha > 0.0 && electrolyzer.alpha <= 1.0, "electrolyzer.alpha",
            "must be in (0,1]");
    require(electrolyzer.beta >= 0.0, "electrolyzer.beta", "must be >= 0");
    require(electrolyzer.water_per_kg >= 0.0, "electrolyzer.water_per_kg", "must be >= 0");

    require(imbalance.kappa >= 0.0 && imbalance.kappa < 1.0, "imbalance.kappa",
            "must be in [0,1)");
    require(imbalance.gamma >= 0 && imbalance.gamma <= T, "imbalance.gamma",
            "must be in [0, n_periods]");

    require(std::isfinite(grid.connection_limit) && grid.connection_limit > 0.0,
            "grid.connection_limit", "must be > 0");
}

Instance Instance::with_gamma(int gamma) const {
    Instance copy = *this;
    copy.imbalance.gamma = gamma;
    copy.validate();
    return copy;
}

Instance Instance::without_battery() const {
    Instance copy = *this;
    copy.battery.capacity = 0.0;
    copy.battery.rated_power = 0.0;
    copy.battery.initial_soe = 0.0;
    return copy;
}

Instance Instance::without_electrolyzer() const {
    Instance copy = *this;
    copy.electrolyzer.rated_power = 0.0;
    return copy;
}

Instance parse_instance(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("instance JSON: top level must be an object");
    }

    Instance inst;
    try {
        const json& time = get_object(doc, "time");
        inst.time.n_periods = static_cast<int>(get_number(time, "n_periods", "time.n_periods"));
        inst.time.dt = get_number(time, "dt", "time.dt");

        const json& prices = get_object(doc, "prices");
        inst.prices.da_price = get_series(prices, "da", "prices.da");
        inst.prices.hydrogen_price = get_number(prices, "hydrogen", "prices.hydrogen");
        inst.prices.water_price = get_number(prices, "water", "prices.water");

        const json& pv = get_object(doc, "pv");
        inst.pv.forecast = get_series(pv, "forecast", "pv.forecast");
        if (!pv.contains("scenarios") || !pv.at("scenarios").is_array()) {
            throw ValidationError("pv.scenarios: missing or not an array");
        }
        for (const auto& row : pv.at("scenarios")) {
            std::vector<double> series;
            for (const auto& v : row) {
                series.push_back(v.get<double>());
            }
            inst.pv.scenarios.push_back(std::move(series));
        }
        if (pv.contains("probabilities")) {
            inst.pv.probabilities = get_series(pv, "probabilities", "pv.probabilities");
            double sum = 0.0;
            for (double p : inst.pv.probabilities) {
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-6) {
                throw ValidationError("pv.probabilities: sum " + std::to_string(sum) +
                                      " is not within 1e-6 of 1");
            }
            if (sum > 0.0) {
                for (double& p : inst.pv.probabilities) {
                    p /= sum;
                }
            }
        } else if (!inst.pv.scenarios.empty()) {
            inst.pv.probabilities.assign(inst.pv.scenarios.size(),
                                         1.0 / static_cast<double>(inst.pv.scenarios.size()));
        }

        const json& battery = get_object(doc, "battery");
        inst.battery.capacity = get_number(battery, "capacity", "battery.capacity");
        inst.battery.rated_power = get_number(battery, "rated_power", "battery.rated_power");
        inst.battery.eta = get_number(battery, "eta", "battery.eta");
        inst.battery.initial_soe = get_number_or(battery, "initial_soe", 0.0);
        if (battery.contains("charge_curve_R") || battery.contains("charge_curve_F")) {
            inst.battery.charge_curve_R =
                get_series(battery, "charge_curve_R", "battery.charge_curve_R");
            inst.battery.charge_curve_F =
                get_series(battery, "charge_curve_F", "battery.charge_curve_F");
        } else {
            // Full admissible power up to mid-SOE, tapering toward full.
            inst.battery.charge_curve_R = {0.0, 0.5, 0.8, 1.0};
            inst.battery.charge_curve_F = {1.0, 1.0, 0.6, 0.2};
        }

        const json& el = get_object(doc, "electrolyzer");
        inst.electrolyzer.rated_power = get_number(el, "rated_power", "electrolyzer.rated_power");
        inst.electrolyzer.min_stable_fraction =
            get_number(el, "min_stable_fraction", "electrolyzer.min_stable_fraction");
        inst.electrolyzer.power_per_kg = get_number(el, "power_per_kg", "electrolyzer.power_per_kg");
        inst.electrolyzer.alpha = get_number(el, "alpha", "electrolyzer.alpha");
        inst.electrolyzer.beta = get_number(el, "beta", "electrolyzer.beta");
        inst.electrolyzer.water_per_kg = get_number_or(el, "water_per_kg", 0.010);

        const json& imbalance = get_object(doc, "imbalance");
        inst.imbalance.kappa = get_number(imbalance, "kappa", "imbalance.kappa");
        inst.imbalance.gamma =
            static_cast<int>(get_number_or(imbalance, "gamma", 0.0));

        const json& grid = get_object(doc, "grid");
        inst.grid.connection_limit = get_number(grid, "connection_limit", "grid.connection_limit");
    } catch (const json::exception& e) {
        throw ParseError(std::string("instance JSON: ") + e.what());
    }

    inst.validate();
    return inst;
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open instance file " + path.string());
    }
    std::ostringstream oss;
    oss << in.rdbuf();
    return parse_instance(oss.str());
}

std::string serialize_instance(const Instance& inst) {
    json doc;
    doc["time"] = {{"n_periods", inst.time.n_periods}, {"dt", inst.time.dt}};
    doc["prices"] = {{"da", inst.prices.da_price},
                     {"hydrogen", inst.prices.hydrogen_price},
                     {"water", inst.prices.water_price}};
    doc["pv"] = {{"forecast", inst.pv.forecast},
                 {"scenarios", inst.pv.scenarios},
                 {"probabilities", inst.pv.probabilities}};
    doc["battery"] = {{"capacity", inst.battery.capacity},
                      {"rated_power", inst.battery.rated_power},
                      {"eta", inst.battery.eta},
                      {"initial_soe", inst.battery.initial_soe},
                      {"charge_curve_R", inst.battery.charge_curve_R},
                      {"charge_curve_F", inst.battery.charge_curve_F}};
    doc["electrolyzer"] = {{"rated_power", inst.electrolyzer.rated_power},
                           {"min_stable_fraction", inst.electrolyzer.min_stable_fraction},
                           {"power_per_kg", inst.electrolyzer.power_per_kg},
                           {"alpha", inst.electrolyzer.alpha},
                           {"beta", inst.electrolyzer.beta},
                           {"water_per_kg", inst.electrolyzer.water_per_kg}};
    doc["imbalance"] = {{"kappa", inst.imbalance.kappa}, {"gamma", inst.imbalance.gamma}};
    doc["grid"] = {{"connection_limit", inst.grid.connection_limit}};
    return doc.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write instance file " + path.string());
    }
    out << serialize_instance(instance);
}

bool instances_equal(const Instance& a, const Instance& b) {
    return a.time.n_periods == b.time.n_periods && a.time.dt == b.time.dt &&
           a.prices.da_price == b.prices.da_price &&
           a.prices.hydrogen_price == b.prices.hydrogen_price &&
           a.prices.water_price == b.prices.water_price && a.pv.forecast == b.pv.forecast &&
           a.pv.scenarios == b.pv.scenarios && a.pv.probabilities == b.pv.probabilities &&
           a.battery.capacity == b.battery.capacity &&
           a.battery.rated_power == b.battery.rated_power && a.battery.eta == b.battery.eta &&
           a.battery.initial_soe == b.battery.initial_soe &&
           a.battery.charge_curve_R == b.battery.charge_curve_R &&
           a.battery.charge_curve_F == b.battery.charge_curve_F &&
           a.electrolyzer.rated_power == b.electrolyzer.rated_power &&
           a.electrolyzer.min_stable_fraction == b.electrolyzer.min_stable_fraction &&
           a.electrolyzer.power_per_kg == b.electrolyzer.power_per_kg &&
           a.electrolyzer.alpha == b.electrolyzer.alpha &&
           a.electrolyzer.beta == b.electrolyzer.beta &&
           a.electrolyzer.water_per_kg == b.electrolyzer.water_per_kg &&
           a.imbalance.kappa == b.imbalance.kappa && a.imbalance.gamma == b.imbalance.gamma &&
           a.grid.connection_limit == b.grid.connection_limit;
}

std::vector<DirectionSequence> load_direction_sequences(const std::filesystem::path& path,
                                                        int n_periods) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open directions file " + path.string());
    }
    std::vector<DirectionSequence> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip comments and whitespace-only lines
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        bool blank = true;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        }
        if (blank) {
            continue;
        }
        DirectionSequence seq;
        std::stringstream ss(line);
        std::string token;
        while (std::getline(ss, token, ',')) {
            std::string trimmed;
            for (char c : token) {
                if (!std::isspace(static_cast<unsigned char>(c))) {
                    trimmed.push_back(c);
                }
            }
            if (trimmed == "+") {
                seq.directions.push_back(Direction::SystemSurplus);
            } else if (trimmed == "-") {
                seq.directions.push_back(Direction::SystemShortage);
            } else {
                throw ParseError("directions file line " + std::to_string(line_no) +
                                 ": token '" + trimmed + "' is not '+' or '-'");
            }
        }
        if (static_cast<int>(seq.directions.size()) != n_periods) {
            throw LengthMismatch("directions file line " + std::to_string(line_no) + ": " +
                                 std::to_string(seq.directions.size()) + " tokens, expected " +
                                 std::to_string(n_periods));
        }
        out.push_back(std::move(seq));
    }
    return out;
}

}  // namespace hybridbid
