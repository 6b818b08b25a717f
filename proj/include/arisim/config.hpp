// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Flat key-value configuration files with [section] headers. Every
// simulation parameter lives here; dB/dBm appear only in this layer and
// are converted to linear units when the typed config is materialized.
// Unknown keys are rejected so typos fail loudly. Files carry a
// `schema_version` key (currently 1).

#ifndef ARISIM_CONFIG_HPP
#define ARISIM_CONFIG_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arisim/geometry.hpp"
#include "arisim/solver.hpp"
#include "arisim/system.hpp"

namespace arisim {

class IniFile {
public:
    static IniFile parse(const std::string& text) {
        IniFile ini;
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw std::runtime_error("config line " + std::to_string(lineno) +
                                             ": unterminated section header");
                section = trim(t.substr(1, t.size() - 2));
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": expected key = value");
            const std::string key = trim(t.substr(0, eq));
            const std::string value = trim(t.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": empty key");
            ini.values_[qualify(section, key)] = value;
        }
        return ini;
    }

    static IniFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(qualify(section, key)) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const auto it = values_.find(qualify(section, key));
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        return it->second;
    }

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        const auto it = values_.find(qualify(section, key));
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw std::runtime_error("config key " + it->first + ": not a number: '" +
                                     it->second + "'");
        }
    }

    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        const auto it = values_.find(qualify(section, key));
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        std::int64_t v = 0;
        const auto [p, ec] =
            std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
        if (ec != std::errc() || p != it->second.data() + it->second.size())
            throw std::runtime_error("config key " + it->first + ": not an integer: '" +
                                     it->second + "'");
        return v;
    }

    std::uint64_t get_uint(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const {
        const auto it = values_.find(qualify(section, key));
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        std::uint64_t v = 0;
        const auto [p, ec] =
            std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
        if (ec != std::errc() || p != it->second.data() + it->second.size())
            throw std::runtime_error("config key " + it->first + ": not an unsigned integer: '" +
                                     it->second + "'");
        return v;
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
        const auto it = values_.find(qualify(section, key));
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        std::vector<double> out;
        for (const std::string& tok : split(it->second, ',')) {
            try {
                out.push_back(std::stod(trim(tok)));
            } catch (...) {
                throw std::runtime_error("config key " + it->first + ": bad list entry '" +
                                         tok + "'");
            }
        }
        return out;
    }

    /// Keys present in the file but never read by the typed loader.
    std::vector<std::string> unconsumed() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!consumed_.count(k)) out.push_back(k);
        return out;
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == sep) {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    }

    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

private:
    static std::string qualify(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

inline SolverMode parse_mode(const std::string& name) {
    if (name == "practical_active") return SolverMode::practical_active;
    if (name == "ideal_active") return SolverMode::ideal_active;
    if (name == "passive") return SolverMode::passive;
    throw std::runtime_error("unknown solver mode: " + name);
}

/// Everything a simulation needs, as read from one config file.
struct SimulationConfig {
    SystemConfig system;
    Geometry geometry;
    PathLossParams pathloss;
    double rician_beta = 1.0;
    SolverOptions solver;

    // experiment block
    std::uint64_t seed = 1;
    int realizations = 50;
    std::vector<SolverMode> modes = {SolverMode::practical_active, SolverMode::ideal_active,
                                     SolverMode::passive};
    std::vector<double> power_values_dbm = {6, 9, 12, 15, 18, 21};
    std::vector<double> position_values_m = {350, 375, 400, 425, 450};
    std::vector<double> element_values = {16, 32, 64, 128};
    int threads = 0; // 0 = hardware concurrency

    static SimulationConfig from_ini(const IniFile& ini) {
        SimulationConfig c;
        const std::int64_t ver = ini.get_int("", "schema_version", 1);
        if (ver != 1)
            throw std::runtime_error("unsupported schema_version " + std::to_string(ver));

        c.system.num_antennas = static_cast<int>(ini.get_int("system", "num_antennas", 4));
        c.system.num_users = static_cast<int>(ini.get_int("system", "num_users", 4));
        c.system.num_elements = static_cast<int>(ini.get_int("system", "num_elements", 64));
        c.system.p_bs_mw = dbm_to_mw(ini.get_double("system", "p_bs_dbm", 10.0));
        c.system.p_elem_mw = dbm_to_mw(ini.get_double("system", "p_elem_dbm", 0.1));
        c.system.sigma_v2_mw = dbm_to_mw(ini.get_double("system", "sigma_v2_dbm", -90.0));
        c.system.sigma2_mw = dbm_to_mw(ini.get_double("system", "sigma2_dbm", -90.0));

        AmplifierModel& a = c.system.amplifier;
        a.p_in_min_dbm = ini.get_double("amplifier", "p_in_min_dbm", a.p_in_min_dbm);
        a.p_in_m_dbm = ini.get_double("amplifier", "p_in_m_dbm", a.p_in_m_dbm);
        a.p_in_max_dbm = ini.get_double("amplifier", "p_in_max_dbm", a.p_in_max_dbm);
        a.linear_slope = ini.get_double("amplifier", "linear_slope", a.linear_slope);
        a.linear_intercept_db =
            ini.get_double("amplifier", "linear_intercept_db", a.linear_intercept_db);

        c.geometry.bs_position = {ini.get_double("geometry", "bs_x_m", 0.0),
                                  ini.get_double("geometry", "bs_y_m", -40.0)};
        c.geometry.ris_position = {ini.get_double("geometry", "ris_x_m", 400.0),
                                   ini.get_double("geometry", "ris_y_m", 15.0)};
        c.geometry.user_center = {ini.get_double("geometry", "user_center_x_m", 400.0),
                                  ini.get_double("geometry", "user_center_y_m", 0.0)};
        c.geometry.user_radius = ini.get_double("geometry", "user_radius_m", 8.0);

        c.pathloss.c0_db = ini.get_double("channel", "c0_db", -30.0);
        c.pathloss.alpha_bs_ris = ini.get_double("channel", "alpha_bs_ris", 3.2);
        c.pathloss.alpha_ris_user = ini.get_double("channel", "alpha_ris_user", 2.7);
        c.rician_beta = ini.get_double("channel", "rician_beta", 1.0);

        c.solver.outer_tol = ini.get_double("solver", "outer_tol", 1e-4);
        c.solver.max_outer_iters =
            static_cast<int>(ini.get_int("solver", "max_outer_iters", 100));
        c.solver.qcqp_tol = ini.get_double("solver", "qcqp_tol", 1e-7);
        c.solver.qcqp_max_iter = static_cast<int>(ini.get_int("solver", "qcqp_max_iter", 5000));
        c.solver.ideal_gain_cap =
            db_to_linear(ini.get_double("solver", "ideal_gain_cap_db", 22.46));
        c.solver.init_strategy =
            ini.get_string("solver", "init_strategy", "mrt_power_scaled");

        c.seed = ini.get_uint("experiment", "seed", 1);
        c.realizations = static_cast<int>(ini.get_int("experiment", "realizations", 50));
        c.threads = static_cast<int>(ini.get_int("experiment", "threads", 0));
        const std::string modes =
            ini.get_string("experiment", "modes", "practical_active,ideal_active,passive");
        c.modes.clear();
        for (const std::string& tok : IniFile::split(modes, ','))
            c.modes.push_back(parse_mode(IniFile::trim(tok)));
        c.power_values_dbm =
            ini.get_double_list("experiment", "power_values_dbm", c.power_values_dbm);
        c.position_values_m =
            ini.get_double_list("experiment", "position_values_m", c.position_values_m);
        c.element_values = ini.get_double_list("experiment", "element_values", c.element_values);

        const auto unknown = ini.unconsumed();
        if (!unknown.empty()) {
            std::string msg = "unknown config keys:";
            for (const auto& k : unknown) msg += " " + k;
            throw std::runtime_error(msg);
        }
        c.system.validate();
        return c;
    }

    static SimulationConfig load(const std::string& path) {
        return from_ini(IniFile::load(path));
    }

    /// Default configuration rendered as a config file (the schema doc).
    static std::string default_text() {
        return R"(# arisim simulation configuration
schema_version = 1

[system]
num_antennas = 4
num_users = 4
num_elements = 64
p_bs_dbm = 10.0
p_elem_dbm = 0.1
sigma_v2_dbm = -90.0
sigma2_dbm = -90.0

[amplifier]
p_in_min_dbm = -102.0
p_in_m_dbm = 10.0
p_in_max_dbm = 20.0
linear_slope = -0.195
linear_intercept_db = 22.46

[geometry]
bs_x_m = 0.0
bs_y_m = -40.0
ris_x_m = 400.0
ris_y_m = 15.0
user_center_x_m = 400.0
user_center_y_m = 0.0
user_radius_m = 8.0

[channel]
rician_beta = 1.0
c0_db = -30.0
alpha_bs_ris = 3.2
alpha_ris_user = 2.7

[solver]
outer_tol = 1e-4
max_outer_iters = 100
qcqp_tol = 1e-7
qcqp_max_iter = 5000
ideal_gain_cap_db = 22.46
init_strategy = mrt_power_scaled

[experiment]
seed = 1
realizations = 50
threads = 0
modes = practical_active,ideal_active,passive
power_values_dbm = 6,9,12,15,18,21
position_values_m = 350,375,400,425,450
element_values = 16,32,64,128
)";
    }
};

} // namespace arisim

#endif // ARISIM_CONFIG_HPP
