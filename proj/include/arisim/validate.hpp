// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Fast self-checks behind the `validate` CLI subcommand: statistical
// channel calibration, amplifier response shape, surrogate tightness,
// minorant property, solver certificates, and end-to-end determinism.

#ifndef ARISIM_VALIDATE_HPP
#define ARISIM_VALIDATE_HPP

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arisim/sweep.hpp"

namespace arisim {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline CheckResult check_channel_calibration() {
    CheckResult r{"channel_calibration", false, ""};
    Geometry geo;
    PathLossParams pl;
    const double gain = path_loss(geo.bs_ris_distance(), pl.alpha_bs_ris, pl.c0_db);
    std::mt19937_64 rng(2024);
    double acc = 0.0, acc2 = 0.0;
    std::size_t n = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const CMat h = gen_bs_ris_channel(geo, pl, 0.0, 20, 50, rng);
        for (Eigen::Index i = 0; i < h.size(); ++i) {
            const double p = std::norm(h(i));
            acc += p;
            acc2 += p * p;
            ++n;
        }
    }
    const double mean = acc / n;
    const double var = acc2 / n - mean * mean;
    const double se = std::sqrt(var / n);
    const double dev = std::abs(mean - gain);
    std::ostringstream ss;
    ss << "mean |h|^2 dev " << dev << " vs 3*SE " << 3.0 * se << " (N=" << n << ")";
    r.detail = ss.str();
    r.pass = dev <= 3.0 * se;
    return r;
}

inline CheckResult check_amplifier_model() {
    CheckResult r{"amplifier_model", false, ""};
    const AmplifierModel m;
    const double g0 = reflection_gain_db(0.0, m);
    const double g10 = reflection_gain_db(10.0, m);
    const double cont = std::abs(m.gain_linear_law_db(m.p_in_m_dbm) -
                                 (m.p_out_sat_dbm() - m.p_in_m_dbm));
    const bool outside = reflection_gain_db(m.p_in_min_dbm - 1.0, m) == 0.0 &&
                         reflection_gain_db(m.p_in_max_dbm + 1.0, m) == 0.0;
    std::ostringstream ss;
    ss << "gain(0dBm)=" << g0 << " gain(10dBm)=" << g10 << " continuity " << cont;
    r.detail = ss.str();
    r.pass = std::abs(g0 - 22.46) < 1e-12 && std::abs(g10 - 20.51) < 1e-12 &&
             cont < 1e-9 && outside;
    return r;
}

inline CheckResult check_fp_tightness() {
    CheckResult r{"fp_tightness", false, ""};
    Geometry geo;
    PathLossParams pl;
    SystemConfig cfg;
    cfg.num_elements = 16;
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        const ChannelSet ch = make_channel_set(geo, pl, 1.0, 4, 4, 16, rng);
        std::normal_distribution<double> n01(0.0, 1.0);
        BeamformerState w;
        w.w.resize(4);
        for (auto& wk : w.w) {
            wk.resize(4);
            for (int i = 0; i < 4; ++i) wk(i) = cplx(n01(rng), n01(rng));
            wk *= std::sqrt(cfg.p_bs_mw / 8.0) / wk.norm();
        }
        CVec psi(16);
        for (int i = 0; i < 16; ++i) psi(i) = std::polar(1.0 + n01(rng) * n01(rng), n01(rng));
        const double rate = sum_rate(ch, w, psi, cfg);
        const RVec rho = update_rho(ch, w, psi, cfg);
        const CVec mu = update_mu(ch, w, psi, rho, cfg);
        const double f1 = eval_f1(ch, w, psi, rho, cfg);
        const double f2 = eval_f2(ch, w, psi, rho, mu, cfg);
        worst = std::max({worst, std::abs(f1 - rate), std::abs(f2 - f1)});
    }
    std::ostringstream ss;
    ss << "max |f1-rate|,|f2-f1| = " << worst;
    r.detail = ss.str();
    r.pass = worst < 1e-9;
    return r;
}

inline CheckResult check_minorant_property() {
    CheckResult r{"mm_minorant", false, ""};
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n01(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        CMat a(3, 3);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(n01(rng), n01(rng));
        const CMat g = a * a.adjoint() / 3.0;
        CVec xt(3), x(3);
        for (int i = 0; i < 3; ++i) {
            xt(i) = cplx(n01(rng), n01(rng));
            x(i) = cplx(n01(rng), n01(rng));
        }
        const auto m = qcqp::mm_linearize(g, xt);
        worst = std::max(worst, m.value(x) - x.dot(g * x).real());
    }
    std::ostringstream ss;
    ss << "max minorant excess " << worst;
    r.detail = ss.str();
    r.pass = worst <= 1e-10;
    return r;
}

inline CheckResult check_solver_certificates() {
    CheckResult r{"qcqp_certificates", false, ""};
    std::mt19937_64 rng(31337);
    std::normal_distribution<double> n01(0.0, 1.0);
    double worst_kkt = 0.0;
    bool all_converged = true;
    for (int rep = 0; rep < 5; ++rep) {
        CMat a(3, 3);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(n01(rng), n01(rng));
        qcqp::QuadraticObjective obj;
        obj.quad = a * a.adjoint() / 3.0;
        obj.lin = CVec(3);
        for (int i = 0; i < 3; ++i) obj.lin(i) = cplx(n01(rng), n01(rng));
        qcqp::ConstraintSet cons;
        cons.ball_radius2 = 1.5;
        const auto res = qcqp::solve_ball_quadratic(obj, cons, CVec::Zero(3), 1e-8, 5000);
        all_converged = all_converged && res.status == qcqp::SolveStatus::converged;
        worst_kkt = std::max(worst_kkt, res.kkt_residual);

        const auto res2 =
            qcqp::solve_disk_quadratic(obj, RVec::Ones(3) * 0.7, CVec::Zero(3), 1e-10, 5000);
        all_converged = all_converged && res2.status == qcqp::SolveStatus::converged;
        worst_kkt = std::max(worst_kkt, res2.kkt_residual);
    }
    std::ostringstream ss;
    ss << "max KKT residual " << worst_kkt;
    r.detail = ss.str();
    r.pass = all_converged && worst_kkt < 1e-5;
    return r;
}

inline CheckResult check_bcd_monotone() {
    CheckResult r{"bcd_monotone", false, ""};
    Geometry geo;
    PathLossParams pl;
    SystemConfig cfg;
    cfg.num_elements = 16;
    SolverOptions opts;
    double worst_drop = 0.0;
    bool converged = true;
    for (unsigned seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng(seed);
        const ChannelSet ch = make_channel_set(geo, pl, 1.0, 4, 4, 16, rng);
        std::mt19937_64 r0(0);
        const SolveOutput out = run_bcd(ch, cfg, opts, r0);
        converged = converged && out.trace.converged;
        for (std::size_t i = 1; i < out.trace.iters.size(); ++i)
            worst_drop = std::max(worst_drop, out.trace.iters[i - 1].sum_rate -
                                                  out.trace.iters[i].sum_rate);
    }
    std::ostringstream ss;
    ss << "worst per-iteration drop " << worst_drop;
    r.detail = ss.str();
    r.pass = converged && worst_drop <= 1e-6;
    return r;
}

inline CheckResult check_seed_derivation() {
    CheckResult r{"seed_derivation", false, ""};
    std::set<std::uint64_t> seen;
    std::size_t collisions = 0;
    for (std::size_t p = 0; p < 64; ++p)
        for (std::size_t k = 0; k < 256; ++k)
            if (!seen.insert(derive_cell_seed(1, p, k)).second) ++collisions;
    std::ostringstream ss;
    ss << collisions << " collisions over 16384 cells";
    r.detail = ss.str();
    r.pass = collisions == 0;
    return r;
}

} // namespace detail

/// All self-checks; each is independent and fast.
inline std::vector<CheckResult> run_validation_suite() {
    return {detail::check_channel_calibration(), detail::check_amplifier_model(),
            detail::check_fp_tightness(),        detail::check_minorant_property(),
            detail::check_solver_certificates(), detail::check_bcd_monotone(),
            detail::check_seed_derivation()};
}

} // namespace arisim

#endif // ARISIM_VALIDATE_HPP
