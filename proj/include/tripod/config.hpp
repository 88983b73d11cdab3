#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tripod/params.hpp"
#include "tripod/propagation.hpp"
#include "tripod/spectra.hpp"

namespace tripod {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputSpec {
    enum class Format { csv, jsonl } format = Format::csv;
    std::string path;
};

// one run: physics, sweep window, solver knobs, output destinations.
// Config files carry the bench-unit convention (frequencies in MHz, lengths
// in mm, density in cm^-3, dipoles in C m); conversion to internal units
// happens here and nowhere else.
struct RunConfig {
    SystemParams params;
    double sweep_start = 3.0, sweep_stop = 10.0;  // probe detuning window [MHz]
    int sweep_points = 200;
    TriggerMode trigger = TriggerMode::both;
    PopulationMode populations = PopulationMode::computed;
    SolveOptions solver;
    std::vector<OutputSpec> outputs;  // empty means stdout (csv)
    bool unwrapped_column = false;
    std::vector<std::string> notices;  // default fills and soft warnings
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, const std::string& where) {
    const char* first = v.data();
    const char* last = v.data() + v.size();
    double out{};
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(where + ": expected a number, got '" + v + "'");
    return out;
}

inline int parse_int(const std::string& v, const std::string& where) {
    const char* first = v.data();
    const char* last = v.data() + v.size();
    int out{};
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(where + ": expected true or false, got '" + v + "'");
}

// full registry, used for key lookup and for bare --set resolution
inline const std::vector<std::pair<std::string, std::string>>& key_registry() {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"physics", "omega_c_plus"}, {"physics", "omega_c_minus"},
        {"physics", "omega_p0"}, {"physics", "omega_t0"},
        {"physics", "delta2"}, {"physics", "delta3"},
        {"physics", "gamma10"}, {"physics", "gamma20"}, {"physics", "gamma30"},
        {"physics", "gamma11"}, {"physics", "gamma22"}, {"physics", "gamma33"},
        {"physics", "gamma12"}, {"physics", "gamma13"}, {"physics", "gamma23"},
        {"physics", "delta_omega1"}, {"physics", "density"},
        {"physics", "dipole_p"}, {"physics", "dipole_t"},
        {"physics", "length"}, {"physics", "lambda"},
        {"sweep", "start"}, {"sweep", "stop"}, {"sweep", "points"},
        {"sweep", "trigger"}, {"sweep", "populations"},
        {"solver", "tolerance"}, {"solver", "max_iterations"},
        {"solver", "grid_points"}, {"solver", "damping"}, {"solver", "bvp"},
        {"solver", "recompute_populations"}, {"solver", "coupling_intensity"},
        {"output", "csv"}, {"output", "jsonl"}, {"output", "unwrapped"},
    };
    return keys;
}

// applies one key=value with unit conversion; `where` names the source for
// error messages (file line or --set)
inline void apply_key(RunConfig& c, const std::string& section, const std::string& key,
                      const std::string& value, const std::string& where) {
    auto num = [&] { return parse_double(value, where); };
    if (section == "physics") {
        SystemParams& p = c.params;
        if (key == "omega_c_plus") p.omega_c_plus = num();          // MHz
        else if (key == "omega_c_minus") p.omega_c_minus = num();   // MHz
        else if (key == "omega_p0") p.omega_p0 = num();             // MHz
        else if (key == "omega_t0") p.omega_t0 = num();             // MHz
        else if (key == "delta2") p.delta2 = num();                 // MHz
        else if (key == "delta3") p.delta3 = num();                 // MHz
        else if (key == "gamma10") p.gamma10 = num();               // MHz
        else if (key == "gamma20") p.gamma20 = num();               // MHz
        else if (key == "gamma30") p.gamma30 = num();               // MHz
        else if (key == "gamma11") p.gamma11 = num();               // MHz
        else if (key == "gamma22") p.gamma22 = num();               // MHz
        else if (key == "gamma33") p.gamma33 = num();               // MHz
        else if (key == "gamma12") p.gamma12 = num();               // MHz
        else if (key == "gamma13") p.gamma13 = num();               // MHz
        else if (key == "gamma23") p.gamma23 = num();               // MHz
        else if (key == "delta_omega1") p.delta_omega1 = num();     // MHz
        else if (key == "density") p.density = num() * 1e6;         // cm^-3 -> m^-3
        else if (key == "dipole_p") p.dipole_p = num();             // C m
        else if (key == "dipole_t") p.dipole_t = num();             // C m
        else if (key == "length") p.length = num() * 1e-3;          // mm -> m
        else if (key == "lambda") p.lambda_p = num() * 1e-3;        // mm -> m
        else throw ConfigError(where + ": unknown key '" + key + "' in [physics]");
        return;
    }
    if (section == "sweep") {
        if (key == "start") c.sweep_start = num();  // MHz
        else if (key == "stop") c.sweep_stop = num();  // MHz
        else if (key == "points") c.sweep_points = parse_int(value, where);
        else if (key == "trigger") {
            if (value == "on") c.trigger = TriggerMode::on;
            else if (value == "off") c.trigger = TriggerMode::off;
            else if (value == "both") c.trigger = TriggerMode::both;
            else throw ConfigError(where + ": trigger must be on, off or both");
        } else if (key == "populations") {
            if (value == "computed") c.populations = PopulationMode::computed;
            else if (value == "balanced") c.populations = PopulationMode::balanced;
            else throw ConfigError(where + ": populations must be computed or balanced");
        } else throw ConfigError(where + ": unknown key '" + key + "' in [sweep]");
        return;
    }
    if (section == "solver") {
        SolveOptions& s = c.solver;
        if (key == "tolerance") s.tol = num();
        else if (key == "max_iterations") s.max_iter = parse_int(value, where);
        else if (key == "grid_points") s.grid_points = parse_int(value, where);
        else if (key == "damping") s.damping = num();
        else if (key == "bvp") {
            if (value == "backward") s.bvp = BvpMethod::backward;
            else if (value == "superpose") s.bvp = BvpMethod::superpose;
            else throw ConfigError(where + ": bvp must be backward or superpose");
        } else if (key == "recompute_populations") {
            s.recompute_populations = parse_bool(value, where);
        } else if (key == "coupling_intensity") {
            if (value == "mean") s.pop_coupling = CouplingIntensity::mean_square;
            else if (value == "coherent") s.pop_coupling = CouplingIntensity::coherent_sum_square;
            else if (value == "forward") s.pop_coupling = CouplingIntensity::forward_only;
            else throw ConfigError(where + ": coupling_intensity must be mean, coherent or forward");
        } else throw ConfigError(where + ": unknown key '" + key + "' in [solver]");
        return;
    }
    if (section == "output") {
        if (key == "csv") c.outputs.push_back({OutputSpec::Format::csv, value});
        else if (key == "jsonl") c.outputs.push_back({OutputSpec::Format::jsonl, value});
        else if (key == "unwrapped") c.unwrapped_column = parse_bool(value, where);
        else throw ConfigError(where + ": unknown key '" + key + "' in [output]");
        return;
    }
    throw ConfigError(where + ": unknown section [" + section + "]");
}

} // namespace detail

inline RunConfig default_config() { return RunConfig{}; }

// flat sectioned key=value text; '#' or ';' starts a comment, output paths
// may repeat, all other keys are single-valued
inline void validate_config(RunConfig& c);

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    RunConfig c;
    std::string line, section;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        std::string where = path + ":" + std::to_string(lineno);
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(where + ": malformed section header '" + t + "'");
            section = detail::trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value, got '" + t + "'");
        std::string key = detail::trim(t.substr(0, eq));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        if (section.empty())
            throw ConfigError(where + ": key '" + key + "' before any [section]");
        bool repeatable = section == "output" && (key == "csv" || key == "jsonl");
        if (!repeatable && !seen.insert(section + "." + key).second)
            throw ConfigError(where + ": duplicate key '" + key + "' in [" + section + "]");
        detail::apply_key(c, section, key, value, where);
    }

    std::string missing;
    for (const auto& [sec, key] : detail::key_registry()) {
        if (sec != "physics") continue;
        if (!seen.count(sec + "." + key)) missing += (missing.empty() ? "" : ", ") + key;
    }
    if (!missing.empty())
        c.notices.push_back("config: physics defaults used for: " + missing);
    validate_config(c);
    return c;
}

// --set section.key=value (bare keys accepted when unambiguous)
inline void apply_set_override(RunConfig& c, const std::string& spec) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + spec + "'");
    std::string key = detail::trim(spec.substr(0, eq));
    std::string value = detail::trim(spec.substr(eq + 1));
    if (key.empty() || value.empty())
        throw ConfigError("--set expects key=value, got '" + spec + "'");

    std::string section;
    size_t dot = key.find('.');
    if (dot != std::string::npos) {
        section = key.substr(0, dot);
        key = key.substr(dot + 1);
    } else {
        int hits = 0;
        for (const auto& [sec, k] : detail::key_registry())
            if (k == key) {
                section = sec;
                ++hits;
            }
        if (hits == 0) throw ConfigError("--set: unknown key '" + key + "'");
        if (hits > 1)
            throw ConfigError("--set: key '" + key + "' is ambiguous, qualify with section.");
    }
    detail::apply_key(c, section, key, value, "--set " + spec);
}

// hard constraint check plus soft warnings appended to notices
inline void validate_config(RunConfig& c) {
    auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
    if (c.sweep_points < 1) fail("sweep_points must be >= 1, got " + std::to_string(c.sweep_points));
    if (!(c.sweep_stop >= c.sweep_start)) fail("sweep stop must be >= start");
    if (!(c.solver.tol > 0)) fail("tolerance must be > 0");
    if (c.solver.max_iter < 1) fail("max_iterations must be >= 1");
    if (c.solver.grid_points < 2) fail("grid_points must be >= 2");
    if (!(c.solver.damping > 0) || c.solver.damping > 1) fail("damping must be in (0, 1]");
    std::vector<std::string> warnings = validate_params(c.params);  // throws on hard errors
    for (auto& w : warnings) {
        std::string notice = "config: " + w;
        if (std::find(c.notices.begin(), c.notices.end(), notice) == c.notices.end())
            c.notices.push_back(notice);
    }
}

} // namespace tripod
