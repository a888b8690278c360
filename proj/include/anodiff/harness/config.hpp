#pragma once

#include "../discretization.hpp"
#include "../errors.hpp"
#include "../micromacro.hpp"
#include "../model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace anodiff::harness {

enum class SchemeKind { MicroMacro, Duhamel, Implicit, Limit };

inline std::string_view to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::MicroMacro: return "micromacro";
        case SchemeKind::Duhamel: return "duhamel";
        case SchemeKind::Implicit: return "implicit";
        case SchemeKind::Limit: return "limit";
    }
    return "?";
}

enum class InitialProfile { Sine, Constant };

/// Everything a run or sweep needs. Unset optionals fall back to the
/// per-case / per-scheme defaults (beta 2.5 or 0.5, dt 1e-3 or 1e-2).
struct RunConfig {
    CaseKind model = CaseKind::HeavyTail;
    std::optional<double> beta;
    double nu0 = 1.0;
    double eps = 1e-5;
    std::optional<double> dt;
    double final_time = 0.1;
    std::size_t nx = 64;
    double v_max = 5.0;
    std::size_t nv = 200;
    double w_scale = 1.0;
    std::size_t nw = 800;
    SchemeKind scheme = SchemeKind::MicroMacro;
    MacroClosure closure = MacroClosure::Implicit;
    InitialProfile initial = InitialProfile::Sine;
    std::size_t record_every = 0;  // 0: first and last step only
    std::string output;
    std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<double> dt_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};

    double beta_value() const { return beta.value_or(model == CaseKind::HeavyTail ? 2.5 : 0.5); }
    double dt_value() const { return dt.value_or(scheme == SchemeKind::Duhamel ? 1e-2 : 1e-3); }

    ModelCase model_case() const {
        return model == CaseKind::HeavyTail ? ModelCase::heavy_tail(beta_value())
                                            : ModelCase::degenerate(beta_value(), nu0);
    }

    InitialData initial_data() const {
        return initial == InitialProfile::Sine ? InitialData::well_prepared() : InitialData::constant(1.0);
    }

    Discretization discretization(double eps_override, double dt_override) const {
        return Discretization::for_model(model_case(), eps_override, dt_override, final_time, nx, v_max, nv,
                                         w_scale, nw);
    }
    Discretization discretization() const { return discretization(eps, dt_value()); }

    /// Throws ConfigError on any inconsistent field.
    void validate() const {
        (void)model_case();
        if (!(eps > 0.0)) throw ConfigError("eps must be positive");
        if (!(dt_value() > 0.0)) throw ConfigError("dt must be positive");
        if (!(final_time > 0.0)) throw ConfigError("T must be positive");
        if (nx < 2 || nx % 2 != 0) throw ConfigError("nx must be even and >= 2");
        for (double e : eps_list) {
            if (!(e > 0.0)) throw ConfigError("eps_list entries must be positive");
        }
        for (double d : dt_list) {
            if (!(d > 0.0)) throw ConfigError("dt_list entries must be positive");
        }
        (void)discretization();
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
        throw ConfigError("'" + key + "': not a number: '" + value + "'");
    }
    return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& value) {
    std::size_t out = 0;
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), last, out);
    if (ec != std::errc() || ptr != last) throw ConfigError("'" + key + "': not a non-negative integer: '" + value + "'");
    return out;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

}  // namespace detail

/// Keys accepted in config files and as --key overrides.
inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "case", "beta", "nu0", "eps", "dt", "T", "nx", "v_max", "nv", "w_scale", "nw",
        "scheme", "closure", "initial", "record_every", "output", "eps_list", "dt_list"};
    return keys;
}

/// Apply one key=value setting.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& raw) {
    using detail::parse_count;
    using detail::parse_double;
    const std::string value = detail::trim(raw);
    if (key == "case") {
        if (value == "heavy_tail" || value == "1") cfg.model = CaseKind::HeavyTail;
        else if (value == "degenerate" || value == "2") cfg.model = CaseKind::Degenerate;
        else throw ConfigError("case must be heavy_tail or degenerate, got '" + value + "'");
    } else if (key == "beta") {
        cfg.beta = parse_double(key, value);
    } else if (key == "nu0") {
        cfg.nu0 = parse_double(key, value);
    } else if (key == "eps") {
        cfg.eps = parse_double(key, value);
    } else if (key == "dt") {
        cfg.dt = parse_double(key, value);
    } else if (key == "T") {
        cfg.final_time = parse_double(key, value);
    } else if (key == "nx") {
        cfg.nx = parse_count(key, value);
    } else if (key == "v_max") {
        cfg.v_max = parse_double(key, value);
    } else if (key == "nv") {
        cfg.nv = parse_count(key, value);
    } else if (key == "w_scale") {
        cfg.w_scale = parse_double(key, value);
    } else if (key == "nw") {
        cfg.nw = parse_count(key, value);
    } else if (key == "scheme") {
        if (value == "micromacro") cfg.scheme = SchemeKind::MicroMacro;
        else if (value == "duhamel") cfg.scheme = SchemeKind::Duhamel;
        else if (value == "implicit") cfg.scheme = SchemeKind::Implicit;
        else if (value == "limit") cfg.scheme = SchemeKind::Limit;
        else throw ConfigError("unknown scheme '" + value + "'");
    } else if (key == "closure") {
        if (value == "implicit") cfg.closure = MacroClosure::Implicit;
        else if (value == "explicit") cfg.closure = MacroClosure::Explicit;
        else throw ConfigError("closure must be implicit or explicit, got '" + value + "'");
    } else if (key == "initial") {
        if (value == "sine") cfg.initial = InitialProfile::Sine;
        else if (value == "constant") cfg.initial = InitialProfile::Constant;
        else throw ConfigError("initial must be sine or constant, got '" + value + "'");
    } else if (key == "record_every") {
        cfg.record_every = parse_count(key, value);
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "eps_list") {
        cfg.eps_list = detail::parse_list(key, value);
    } else if (key == "dt_list") {
        cfg.dt_list = detail::parse_list(key, value);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

/// Parse flat `key = value` text; '#' starts a comment, blank lines are skipped.
inline std::map<std::string, std::string> parse_settings(std::istream& in, const std::string& origin = "config") {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": expected key = value");
        }
        const std::string key = detail::trim(std::string_view(text).substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(number) + ": empty key");
        out[key] = detail::trim(std::string_view(text).substr(eq + 1));
    }
    return out;
}

inline std::map<std::string, std::string> read_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_settings(in, path);
}

/// defaults < file < overrides.
inline RunConfig resolve_config(const std::map<std::string, std::string>& file,
                                const std::map<std::string, std::string>& overrides) {
    RunConfig cfg;
    for (const auto& [k, v] : file) apply_setting(cfg, k, v);
    for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
}

}  // namespace anodiff::harness
