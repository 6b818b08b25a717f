// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Seeded Monte Carlo sweeps over transmit power, user position, or element
// count. Each (sweep point, realization) cell derives its own seed, so the
// grid is reproducible cell-by-cell and cells can run on parallel workers.
// Modes within a cell share one channel realization.

#ifndef ARISIM_SWEEP_HPP
#define ARISIM_SWEEP_HPP

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "arisim/config.hpp"
#include "arisim/solver.hpp"

namespace arisim {

enum class SweepVariable { p_bs_dbm, user_center_x_m, num_elements };

inline const char* sweep_variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::p_bs_dbm: return "p_bs_dbm";
        case SweepVariable::user_center_x_m: return "user_center_x_m";
        case SweepVariable::num_elements: return "num_elements";
    }
    return "?";
}

struct ExperimentConfig {
    SimulationConfig base;
    SweepVariable variable = SweepVariable::p_bs_dbm;
    std::vector<double> values;

    void validate() const {
        if (values.empty()) throw std::invalid_argument("sweep values must be nonempty");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1]))
                throw std::invalid_argument("sweep values must be strictly increasing");
        if (variable == SweepVariable::num_elements)
            for (const double v : values)
                if (v < 1.0 || std::round(v) != v)
                    throw std::invalid_argument(
                        "num_elements sweep values must be integers >= 1");
        if (base.realizations < 1)
            throw std::invalid_argument("realizations must be >= 1");
        if (base.modes.empty()) throw std::invalid_argument("need at least one mode");
    }
};

/// splitmix64 mixing step; the standard 64-bit finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Per-cell seed: base seed xor a hash of (point index, realization index).
inline std::uint64_t derive_cell_seed(std::uint64_t seed, std::size_t point,
                                      std::size_t realization) {
    return seed ^ mix64(mix64(0x5851f42d4c957f2dull + point) + realization);
}

struct CellResult {
    double sum_rate = 0.0; // hardware-evaluated
    bool converged = false;
    int outer_iters = 0;
    bool failed = false;
    std::string fail_reason;
    // fraction of elements in each amplifier region at the final state:
    // below / linear / saturation / above
    std::array<double, 4> region_fractions{0.0, 0.0, 0.0, 0.0};
};

struct SweepSeries {
    SolverMode mode = SolverMode::practical_active;
    double value = 0.0;
    std::vector<CellResult> cells; // indexed by realization
    double mean_sum_rate = 0.0;
    double std_err = 0.0;
    int n_failed = 0;

    void aggregate() {
        double acc = 0.0;
        int n = 0;
        n_failed = 0;
        for (const auto& c : cells) {
            if (c.failed) { ++n_failed; continue; }
            acc += c.sum_rate;
            ++n;
        }
        mean_sum_rate = (n > 0) ? acc / n : 0.0;
        double ss = 0.0;
        for (const auto& c : cells)
            if (!c.failed) ss += (c.sum_rate - mean_sum_rate) * (c.sum_rate - mean_sum_rate);
        std_err = (n > 1) ? std::sqrt(ss / (n - 1) / n) : 0.0;
    }
};

struct SweepResult {
    SweepVariable variable = SweepVariable::p_bs_dbm;
    std::vector<SweepSeries> series; // ordered by (mode, value)

    const SweepSeries& at(SolverMode mode, double value) const {
        for (const auto& s : series)
            if (s.mode == mode && s.value == value) return s;
        throw std::out_of_range("no such sweep series");
    }
};

namespace detail {

inline void apply_sweep_value(SimulationConfig& cfg, SweepVariable var, double value) {
    switch (var) {
        case SweepVariable::p_bs_dbm:
            cfg.system.p_bs_mw = dbm_to_mw(value);
            break;
        case SweepVariable::user_center_x_m:
            cfg.geometry.user_center[0] = value;
            break;
        case SweepVariable::num_elements: {
            const double rounded = std::round(value);
            if (rounded < 1.0 || rounded != value)
                throw std::invalid_argument("num_elements sweep values must be integers >= 1");
            cfg.system.num_elements = static_cast<int>(rounded);
            break;
        }
    }
}

inline std::array<double, 4> region_fractions(const ChannelSet& ch, const BeamformerState& w,
                                              const SystemConfig& cfg) {
    std::array<double, 4> f{0.0, 0.0, 0.0, 0.0};
    const RVec p = incident_power(ch, w);
    for (Eigen::Index l = 0; l < p.size(); ++l)
        f[static_cast<std::size_t>(amplifier_region(mw_to_dbm(p(l)), cfg.amplifier))] += 1.0;
    for (auto& x : f) x /= static_cast<double>(p.size());
    return f;
}

} // namespace detail

/// Run the full sweep grid. Deterministic given the config; cells run on
/// `base.threads` workers (0 = hardware concurrency).
inline SweepResult run_sweep(const ExperimentConfig& exp) {
    exp.validate();
    const std::size_t n_points = exp.values.size();
    const std::size_t n_modes = exp.base.modes.size();
    const std::size_t reals = static_cast<std::size_t>(exp.base.realizations);

    SweepResult result;
    result.variable = exp.variable;
    result.series.resize(n_modes * n_points);
    for (std::size_t mi = 0; mi < n_modes; ++mi)
        for (std::size_t pi = 0; pi < n_points; ++pi) {
            SweepSeries& s = result.series[mi * n_points + pi];
            s.mode = exp.base.modes[mi];
            s.value = exp.values[pi];
            s.cells.resize(reals);
        }

    const std::size_t n_cells = n_points * reals;
    std::atomic<std::size_t> next{0};
    int n_threads = exp.base.threads > 0
                        ? exp.base.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;

    auto worker = [&]() {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= n_cells) return;
            const std::size_t pi = cell / reals;
            const std::size_t ri = cell % reals;

            SimulationConfig cfg = exp.base;
            ChannelSet ch;
            bool gen_ok = true;
            std::string gen_err;
            try {
                detail::apply_sweep_value(cfg, exp.variable, exp.values[pi]);
                std::mt19937_64 rng(derive_cell_seed(cfg.seed, pi, ri));
                ch = make_channel_set(cfg.geometry, cfg.pathloss, cfg.rician_beta,
                                      cfg.system.num_antennas, cfg.system.num_users,
                                      cfg.system.num_elements, rng);
            } catch (const std::exception& e) {
                gen_ok = false;
                gen_err = e.what();
            }

            for (std::size_t mi = 0; mi < n_modes; ++mi) {
                CellResult& out = result.series[mi * n_points + pi].cells[ri];
                if (!gen_ok) {
                    out.failed = true;
                    out.fail_reason = "channel generation: " + gen_err;
                    continue;
                }
                SolverOptions opts = cfg.solver;
                opts.mode = exp.base.modes[mi];
                try {
                    std::mt19937_64 solver_rng(derive_cell_seed(cfg.seed, pi, ri) ^
                                               0xa5a5a5a5a5a5a5a5ull);
                    const SolveOutput so = run_bcd(ch, cfg.system, opts, solver_rng);
                    out.sum_rate = so.trace.final_evaluated_rate;
                    out.converged = so.trace.converged;
                    out.outer_iters = static_cast<int>(so.trace.iters.size());
                    out.region_fractions = detail::region_fractions(ch, so.w, cfg.system);
                } catch (const std::exception& e) {
                    out.failed = true;
                    out.fail_reason = e.what();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (auto& s : result.series) s.aggregate();
    return result;
}

// ---- tabular output ----

namespace detail {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Summary table, one row per (mode, sweep value).
inline constexpr const char* kSummaryHeader =
    "mode,sweep_variable,sweep_value,mean_sum_rate_bps_hz,std_err,n_realizations,n_failed";

inline void write_results(const SweepResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << kSummaryHeader << "\n";
    for (const auto& s : result.series) {
        out << mode_name(s.mode) << ',' << sweep_variable_name(result.variable) << ','
            << detail::format_g17(s.value) << ',' << detail::format_g17(s.mean_sum_rate) << ','
            << detail::format_g17(s.std_err) << ',' << s.cells.size() << ',' << s.n_failed
            << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Optional long-format table, one row per (mode, sweep value, realization).
inline void write_results_long(const SweepResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "mode,sweep_variable,sweep_value,realization,sum_rate_bps_hz,converged,outer_iters,"
           "failed,frac_below,frac_linear,frac_saturation,frac_above\n";
    for (const auto& s : result.series) {
        for (std::size_t r = 0; r < s.cells.size(); ++r) {
            const CellResult& c = s.cells[r];
            out << mode_name(s.mode) << ',' << sweep_variable_name(result.variable) << ','
                << detail::format_g17(s.value) << ',' << r << ','
                << detail::format_g17(c.sum_rate) << ',' << (c.converged ? 1 : 0) << ','
                << c.outer_iters << ',' << (c.failed ? 1 : 0) << ','
                << detail::format_g17(c.region_fractions[0]) << ','
                << detail::format_g17(c.region_fractions[1]) << ','
                << detail::format_g17(c.region_fractions[2]) << ','
                << detail::format_g17(c.region_fractions[3]) << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace arisim

#endif // ARISIM_SWEEP_HPP
