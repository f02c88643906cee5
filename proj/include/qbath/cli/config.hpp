// config.hpp — Run configuration: flat "key = value" files with '#' comments,
// every key also accepted as a "--key value" flag (flags win).

#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbath/errors.hpp"
#include "qbath/model.hpp"

namespace qbath::cli {

struct RunConfig {
    std::string command;

    // model; unset values take command-specific defaults
    std::optional<double> omega0, eta, omega_c;
    std::optional<InverseTemperature> beta;

    // aperture and temperature in units of d
    double d{1.0};
    double sigma_over_d{0.05};
    std::optional<double> l_th_over_d;

    std::optional<std::vector<double>> times;
    std::optional<std::string> time_unit;  // abs | t_mix | tau_flo
    std::optional<std::string> mode;       // oscillator | free | no-dissipation

    // x grid in units of d; x_count = 0 selects an automatic grid
    double x_min{-2.0}, x_max{2.0};
    std::size_t x_count{0};
    std::size_t min_points{801};

    int fig{0};
    std::string output{"-"};
    std::string svg;

    // bath-check
    std::size_t n_modes{2000};
    double t_max{5.0};

    // fock-check
    std::vector<std::size_t> dims{12, 12, 12};
    std::vector<double> bath_omegas{1.0, 1.5};
    std::vector<double> bath_couplings{0.3, 0.4};
    double a{0.3}, b{-0.2}, u{0.25}, v{0.4};
    double max_budget{1e-6};
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || std::isnan(v))
        throw ConfigError("invalid number for '" + key + "': '" + text + "'");
    return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9)
        throw ConfigError("'" + key + "' must be a non-negative integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> r;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) r.push_back(parse_double(key, item));
    if (r.empty()) throw ConfigError("'" + key + "' needs at least one value");
    return r;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [](std::optional<double> RunConfig::*f) {
            return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = parse_double(k, v); };
        };
        auto plain = [](double RunConfig::*f) {
            return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = parse_double(k, v); };
        };
        auto count = [](std::size_t RunConfig::*f) {
            return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = parse_count(k, v); };
        };
        auto text = [](std::string RunConfig::*f) {
            return [f](RunConfig& c, const std::string&, const std::string& v) { c.*f = v; };
        };
        t["omega0"] = num(&RunConfig::omega0);
        t["eta"] = num(&RunConfig::eta);
        t["omega_c"] = num(&RunConfig::omega_c);
        t["l_th_over_d"] = num(&RunConfig::l_th_over_d);
        t["beta"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const double b = parse_double(k, v);
            c.beta = std::isinf(b) ? InverseTemperature::infinite() : InverseTemperature::finite(b);
        };
        t["d"] = plain(&RunConfig::d);
        t["sigma_over_d"] = plain(&RunConfig::sigma_over_d);
        t["x_min"] = plain(&RunConfig::x_min);
        t["x_max"] = plain(&RunConfig::x_max);
        t["x_count"] = count(&RunConfig::x_count);
        t["min_points"] = count(&RunConfig::min_points);
        t["times"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.times = parse_list(k, v); };
        t["time_unit"] = [](RunConfig& c, const std::string&, const std::string& v) {
            if (v != "abs" && v != "t_mix" && v != "tau_flo")
                throw ConfigError("time_unit must be abs, t_mix or tau_flo, got '" + v + "'");
            c.time_unit = v;
        };
        t["mode"] = [](RunConfig& c, const std::string&, const std::string& v) {
            if (v != "oscillator" && v != "free" && v != "no-dissipation")
                throw ConfigError("mode must be oscillator, free or no-dissipation, got '" + v + "'");
            c.mode = v;
        };
        t["fig"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const std::size_t f = parse_count(k, v);
            if (f < 1 || f > 4) throw ConfigError("fig must be 1, 2, 3 or 4");
            c.fig = static_cast<int>(f);
        };
        t["output"] = text(&RunConfig::output);
        t["svg"] = text(&RunConfig::svg);
        t["n_modes"] = count(&RunConfig::n_modes);
        t["t_max"] = plain(&RunConfig::t_max);
        t["dims"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.dims.clear();
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) c.dims.push_back(parse_count(k, item));
        };
        t["bath_omegas"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.bath_omegas = parse_list(k, v); };
        t["bath_couplings"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.bath_couplings = parse_list(k, v);
        };
        t["a"] = plain(&RunConfig::a);
        t["b"] = plain(&RunConfig::b);
        t["u"] = plain(&RunConfig::u);
        t["v"] = plain(&RunConfig::v);
        t["max_budget"] = plain(&RunConfig::max_budget);
        return t;
    }();
    return table;
}

} // namespace detail

inline void set_key(RunConfig& c, const std::string& key, const std::string& value) {
    const auto& t = detail::setters();
    const auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(c, key, detail::trim(value));
}

inline void apply_text(RunConfig& c, const std::string& text, const std::string& origin = "config") {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        try {
            set_key(c, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void apply_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_text(c, ss.str(), path);
}

// qbath <command> [--config FILE] [--key value]...
inline RunConfig parse_args(const std::vector<std::string>& args) {
    if (args.empty()) throw ConfigError("missing command");
    RunConfig c;
    c.command = args[0];
    std::vector<std::pair<std::string, std::string>> flags;
    std::optional<std::string> file;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + a + "'");
        std::string key = a.substr(2), value;
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.erase(eq);
        } else {
            if (i + 1 >= args.size()) throw ConfigError("flag '" + a + "' needs a value");
            value = args[++i];
        }
        if (key == "config")
            file = value;
        else
            flags.emplace_back(key, value);
    }
    if (file) apply_file(c, *file);
    for (const auto& [k, v] : flags) set_key(c, k, v);
    return c;
}

} // namespace qbath::cli
