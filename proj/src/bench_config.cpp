#include "adbench/bench/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace adbench::bench {

using nlohmann::json;

std::string_view to_string(CorruptionMode mode) noexcept {
    switch (mode) {
    case CorruptionMode::Duplicate: return "duplicate";
    case CorruptionMode::Irrelevant: return "irrelevant";
    case CorruptionMode::Flip: return "flip";
    }
    return "?";
}

std::optional<CorruptionMode> corruption_mode_from_string(std::string_view s) noexcept {
    for (auto m : {CorruptionMode::Duplicate, CorruptionMode::Irrelevant, CorruptionMode::Flip})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items())
        require(allowed.contains(key), Err::ParseError,
                "unknown key '" + key + "' in " + where);
}

detectors::DetectorSpec parse_algorithm(const json& entry);

std::vector<detectors::DetectorSpec> parse_roster(const json& arr) {
    std::vector<detectors::DetectorSpec> roster;
    for (const auto& e : arr) roster.push_back(parse_algorithm(e));
    return roster;
}

detectors::DetectorSpec parse_algorithm(const json& entry) {
    if (entry.is_string()) return detectors::DetectorSpec::make(entry.get<std::string>());
    require(entry.is_object(), Err::ParseError, "algorithm entry must be a name or object");
    reject_unknown_keys(entry, {"name", "params", "roster"}, "algorithm entry");
    require(entry.contains("name"), Err::ParseError, "algorithm entry needs 'name'");
    std::map<std::string, double> params;
    if (entry.contains("params")) {
        require(entry["params"].is_object(), Err::ParseError, "'params' must be an object");
        for (const auto& [key, value] : entry["params"].items()) {
            require(value.is_number(), Err::ParseError, "parameter '" + key + "' must be numeric");
            params[key] = value.get<double>();
        }
    }
    std::optional<std::vector<detectors::DetectorSpec>> roster;
    if (entry.contains("roster")) {
        require(entry["roster"].is_array(), Err::ParseError, "'roster' must be an array");
        roster = parse_roster(entry["roster"]);
    }
    return detectors::DetectorSpec::make(entry["name"].get<std::string>(), std::move(params),
                                         std::move(roster));
}

TypeSetting parse_type_setting(const json& entry) {
    TypeSetting setting;
    std::string name;
    if (entry.is_string()) {
        name = entry.get<std::string>();
    } else {
        require(entry.is_object(), Err::ParseError, "anomaly_types entry must be a name or object");
        reject_unknown_keys(entry, {"type", "alpha", "gamma_l"}, "anomaly_types entry");
        require(entry.contains("type"), Err::ParseError, "anomaly_types entry needs 'type'");
        name = entry["type"].get<std::string>();
        if (entry.contains("gamma_l")) setting.gamma_l = entry["gamma_l"].get<double>();
    }
    const auto type = synth::anomaly_type_from_string(name);
    require(type.has_value(), Err::ParseError, "unknown anomaly type '" + name + "'");
    setting.type = *type;
    setting.alpha = synth::default_alpha(*type);
    if (entry.is_object() && entry.contains("alpha")) setting.alpha = entry["alpha"].get<double>();
    require(setting.alpha > 0.0, Err::ParseError, "alpha must be > 0");
    return setting;
}

CorruptionSetting parse_corruption(const json& entry) {
    require(entry.is_object(), Err::ParseError, "corruptions entries must be objects");
    reject_unknown_keys(entry, {"mode", "level", "gamma_l"}, "corruptions entry");
    require(entry.contains("mode") && entry.contains("level"), Err::ParseError,
            "corruptions entry needs 'mode' and 'level'");
    CorruptionSetting setting;
    const auto mode = corruption_mode_from_string(entry["mode"].get<std::string>());
    require(mode.has_value(), Err::ParseError, "unknown corruption mode");
    setting.mode = *mode;
    setting.level = entry["level"].get<double>();
    if (entry.contains("gamma_l")) setting.gamma_l = entry["gamma_l"].get<double>();
    return setting;
}

} // namespace

BenchmarkConfig BenchmarkConfig::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        fail(Err::ParseError, std::string("config is not valid JSON: ") + e.what());
    }
    require(root.is_object(), Err::ParseError, "config root must be an object");
    reject_unknown_keys(root,
                        {"datasets", "algorithms", "supervision", "anomaly_types", "corruptions",
                         "n_repeats", "train_frac", "seed", "threads", "out_dir",
                         "record_timings"},
                        "config");

    BenchmarkConfig config;
    require(root.contains("datasets") && root["datasets"].is_array(), Err::ParseError,
            "config needs a 'datasets' array");
    for (const auto& d : root["datasets"]) config.datasets.push_back(d.get<std::string>());

    require(root.contains("algorithms") && root["algorithms"].is_array(), Err::ParseError,
            "config needs an 'algorithms' array");
    for (const auto& a : root["algorithms"]) config.algorithms.push_back(parse_algorithm(a));

    if (root.contains("supervision"))
        for (const auto& g : root["supervision"]) config.supervision.push_back(g.get<double>());
    if (root.contains("anomaly_types"))
        for (const auto& t : root["anomaly_types"])
            config.anomaly_types.push_back(parse_type_setting(t));
    if (root.contains("corruptions"))
        for (const auto& c : root["corruptions"]) config.corruptions.push_back(parse_corruption(c));

    if (root.contains("n_repeats")) config.n_repeats = root["n_repeats"].get<int>();
    if (root.contains("train_frac")) config.train_frac = root["train_frac"].get<double>();
    if (root.contains("seed")) config.seed = root["seed"].get<Seed>();
    if (root.contains("threads")) config.threads = root["threads"].get<int>();
    if (root.contains("out_dir")) config.out_dir = root["out_dir"].get<std::string>();
    if (root.contains("record_timings")) config.record_timings = root["record_timings"].get<bool>();

    config.validate();
    return config;
}

BenchmarkConfig BenchmarkConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), Err::IoError, "cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

void BenchmarkConfig::validate() const {
    require(!datasets.empty(), Err::ParseError, "at least one dataset required");
    require(!algorithms.empty(), Err::ParseError, "at least one algorithm required");
    require(n_repeats >= 1, Err::ParseError, "n_repeats must be >= 1");
    require(train_frac > 0.0 && train_frac < 1.0, Err::RatioOutOfRange,
            "train_frac must lie strictly between 0 and 1");
    require(threads >= 0, Err::ParseError, "threads must be >= 0");
    for (double g : supervision) {
        static constexpr double kGammaGrid[] = {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0};
        const bool known = std::any_of(std::begin(kGammaGrid), std::end(kGammaGrid),
                                       [&](double v) { return v == g; });
        require(known, Err::RatioOutOfRange,
                "supervision entries must come from {0.01,0.05,0.1,0.25,0.5,0.75,1}");
    }
    for (const auto& c : corruptions) {
        switch (c.mode) {
        case CorruptionMode::Duplicate:
            require(c.level >= 1.0 && c.level <= 6.0 && c.level == std::floor(c.level),
                    Err::FactorOutOfRange, "duplicate level must be an integer in [1, 6]");
            break;
        case CorruptionMode::Irrelevant:
        case CorruptionMode::Flip:
            require(c.level >= 0.0 && c.level <= 0.5, Err::RatioOutOfRange,
                    "noise/flip level must lie in [0, 0.5]");
            break;
        }
        if (c.gamma_l)
            require(*c.gamma_l > 0.0 && *c.gamma_l <= 1.0, Err::RatioOutOfRange,
                    "gamma_l must lie in (0,1]");
    }
    for (const auto& t : anomaly_types)
        if (t.gamma_l)
            require(*t.gamma_l > 0.0 && *t.gamma_l <= 1.0, Err::RatioOutOfRange,
                    "gamma_l must lie in (0,1]");
}

} // namespace adbench::bench
