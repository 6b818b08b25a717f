// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Joint transmit / reflection beamforming by block coordinate descent on
// the fractional-programming surrogate of the sum-rate:
//
//   1. rho update   closed form (per-user SINR)
//   2. mu update    closed form (quadratic-transform auxiliary)
//   3. w update     convex QCQP over the stacked beams; the lower
//                   incident-power bounds are handled by MM minorants
//   4. gain update  per-element amplification from the hardware response
//   5. psi update   concave QP with per-element disk constraints
//
// Three modes: practical_active (hardware-aware gains and incident-power
// interval), ideal_active (constant assumed gain, interval dropped, final
// state re-evaluated under the hardware response), passive (unit-modulus
// reflection only).
//
// The surrogates f1/f2 are evaluated with a natural-log core and scaled by
// 1/ln 2, so values are in bits/s/Hz while the closed-form auxiliary
// updates remain exact maximizers.

#ifndef ARISIM_SOLVER_HPP
#define ARISIM_SOLVER_HPP

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arisim/qcqp.hpp"
#include "arisim/system.hpp"

namespace arisim {

enum class SolverMode { practical_active, ideal_active, passive };

inline const char* mode_name(SolverMode m) {
    switch (m) {
        case SolverMode::practical_active: return "practical_active";
        case SolverMode::ideal_active: return "ideal_active";
        case SolverMode::passive: return "passive";
    }
    return "?";
}

struct SolverOptions {
    SolverMode mode = SolverMode::practical_active;
    double outer_tol = 1e-4;      // relative sum-rate change
    int max_outer_iters = 100;
    double qcqp_tol = 1e-7;
    int qcqp_max_iter = 5000;
    double ideal_gain_cap = 176.19785065; // assumed constant power gain (22.46 dB)
    std::string init_strategy = "mrt_power_scaled";
};

struct IterationRecord {
    double sum_rate = 0.0; // design-state rate at the end of the outer iteration
    double f1 = 0.0;       // surrogate right after the rho update
    double f2 = 0.0;       // surrogate right after the mu update
    ConstraintReport report;
    RVec incident_mw;
    std::vector<AmpRegion> regions;
};

struct IterationTrace {
    std::vector<IterationRecord> iters;
    bool converged = false;
    double final_design_rate = 0.0;    // objective the optimizer saw
    double final_evaluated_rate = 0.0; // rate under the hardware gain response
    ConstraintReport final_report;
};

struct SolveOutput {
    BeamformerState w;
    ReflectionState refl;
    IterationTrace trace;
};

// ---- stacked-beam helpers ----

inline CVec stack_beams(const std::vector<CVec>& w) {
    Eigen::Index n = 0;
    for (const auto& wk : w) n += wk.size();
    CVec out(n);
    Eigen::Index at = 0;
    for (const auto& wk : w) {
        out.segment(at, wk.size()) = wk;
        at += wk.size();
    }
    return out;
}

inline std::vector<CVec> unstack_beams(const CVec& w, int m, int k) {
    if (w.size() != static_cast<Eigen::Index>(m) * k)
        throw std::invalid_argument("unstack_beams: size mismatch");
    std::vector<CVec> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = w.segment(i * m, m);
    return out;
}

namespace detail {

/// Per-user quantities shared by the auxiliary updates and surrogates.
struct LinkStats {
    std::vector<CVec> hbar;             // effective channels
    std::vector<std::vector<cplx>> hw;  // hw[k][i] = hbar_k^H w_i
    RVec signal;                        // |hbar_k^H w_k|^2
    RVec denom;                         // sum_i |hbar_k^H w_i|^2 + noise_k
    RVec noise;                         // forwarded RIS noise + user noise
};

inline LinkStats link_stats(const ChannelSet& ch, const BeamformerState& w,
                            const CVec& psi, const SystemConfig& cfg) {
    const int k = static_cast<int>(w.w.size());
    LinkStats s;
    s.hbar.resize(static_cast<std::size_t>(k));
    s.hw.assign(static_cast<std::size_t>(k), std::vector<cplx>(static_cast<std::size_t>(k)));
    s.signal.resize(k);
    s.denom.resize(k);
    s.noise.resize(k);
    for (int u = 0; u < k; ++u) {
        s.hbar[static_cast<std::size_t>(u)] = effective_channel(ch, psi, u);
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            const cplx v = s.hbar[static_cast<std::size_t>(u)].dot(w.w[static_cast<std::size_t>(i)]);
            s.hw[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)] = v;
            total += std::norm(v);
        }
        s.signal(u) = std::norm(s.hw[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)]);
        s.noise(u) = forwarded_noise_gain(ch, psi, u) * cfg.sigma_v2_mw + cfg.sigma2_mw;
        s.denom(u) = total + s.noise(u);
    }
    return s;
}

constexpr double kInvLn2 = 1.4426950408889634074;

} // namespace detail

/// Optimal FP auxiliary rho: per-user SINR at the current state.
inline RVec update_rho(const ChannelSet& ch, const BeamformerState& w, const CVec& psi,
                       const SystemConfig& cfg) {
    const detail::LinkStats s = detail::link_stats(ch, w, psi, cfg);
    RVec rho(s.signal.size());
    for (Eigen::Index k = 0; k < rho.size(); ++k)
        rho(k) = s.signal(k) / (s.denom(k) - s.signal(k));
    return rho;
}

/// Optimal quadratic-transform auxiliary mu. The denominator includes the
/// own-signal term (i = k).
inline CVec update_mu(const ChannelSet& ch, const BeamformerState& w, const CVec& psi,
                      const RVec& rho, const SystemConfig& cfg) {
    const detail::LinkStats s = detail::link_stats(ch, w, psi, cfg);
    CVec mu(rho.size());
    for (Eigen::Index k = 0; k < rho.size(); ++k)
        mu(k) = std::sqrt(1.0 + rho(k)) *
                s.hw[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] / s.denom(k);
    return mu;
}

/// Lagrangian-dual-transform surrogate, in bits/s/Hz. Equals the sum-rate
/// when rho is the update_rho output.
inline double eval_f1(const ChannelSet& ch, const BeamformerState& w, const CVec& psi,
                      const RVec& rho, const SystemConfig& cfg) {
    const detail::LinkStats s = detail::link_stats(ch, w, psi, cfg);
    double f = 0.0;
    for (Eigen::Index k = 0; k < rho.size(); ++k)
        f += std::log1p(rho(k)) - rho(k) + (1.0 + rho(k)) * s.signal(k) / s.denom(k);
    return f * detail::kInvLn2;
}

/// Quadratic-transform surrogate, in bits/s/Hz. Equals f1 when mu is the
/// update_mu output.
inline double eval_f2(const ChannelSet& ch, const BeamformerState& w, const CVec& psi,
                      const RVec& rho, const CVec& mu, const SystemConfig& cfg) {
    const detail::LinkStats s = detail::link_stats(ch, w, psi, cfg);
    double f = 0.0;
    for (Eigen::Index k = 0; k < rho.size(); ++k) {
        const cplx hww = s.hw[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        f += std::log1p(rho(k)) - rho(k) +
             2.0 * std::sqrt(1.0 + rho(k)) * std::real(std::conj(mu(k)) * hww) -
             std::norm(mu(k)) * s.denom(k);
    }
    return f * detail::kInvLn2;
}

/// Which element-level constraints the w subproblem should carry.
struct WSubproblemPolicy {
    bool incident_interval = true;        // upper bound + MM lower bounds
    std::vector<bool> lower_active;       // per element; empty = all active
    // Lower bounds carry a hair of headroom so a strictly feasible solver
    // output stays on the locked side of the hardware threshold.
    double lower_headroom = 1e-6;
};

/// Build the stacked-beam QCQP: objective from the quadratic transform,
/// constraints = BS power ball, per-element output power, and (optionally)
/// the incident-power interval with MM-linearized lower bounds at w_t.
inline std::pair<qcqp::QuadraticObjective, qcqp::ConstraintSet> assemble_w_subproblem(
    const ChannelSet& ch, const CVec& psi, const RVec& rho, const CVec& mu,
    const SystemConfig& cfg, const CVec& w_t,
    const WSubproblemPolicy& policy = WSubproblemPolicy{}) {
    const int m = static_cast<int>(ch.num_antennas());
    const int k = static_cast<int>(ch.num_users());
    const int l = static_cast<int>(ch.num_elements());
    const Eigen::Index mk = static_cast<Eigen::Index>(m) * k;
    if (w_t.size() != mk) throw std::invalid_argument("assemble_w_subproblem: anchor size");

    qcqp::QuadraticObjective obj;
    obj.lin = CVec::Zero(mk);
    CMat b_block = CMat::Zero(m, m);
    for (int u = 0; u < k; ++u) {
        const CVec hbar = effective_channel(ch, psi, u);
        obj.lin.segment(u * m, m) = 2.0 * std::sqrt(1.0 + rho(u)) * mu(u) * hbar;
        b_block += std::norm(mu(u)) * (hbar * hbar.adjoint());
    }
    obj.quad = CMat::Zero(mk, mk);
    for (int u = 0; u < k; ++u) obj.quad.block(u * m, u * m, m, m) = b_block;

    qcqp::ConstraintSet cons;
    cons.ball_radius2 = cfg.p_bs_mw;

    const double p_lo = dbm_to_mw(cfg.amplifier.p_in_min_dbm);
    const double p_hi = dbm_to_mw(cfg.amplifier.p_in_m_dbm);

    for (int el = 0; el < l; ++el) {
        // G_el = I_K (x) h h^H acting on the stacked beams
        const CVec h = ch.h_bs_ris.row(el).adjoint();
        CMat g = CMat::Zero(mk, mk);
        const CMat hh = h * h.adjoint();
        for (int u = 0; u < k; ++u) g.block(u * m, u * m, m, m) = hh;

        const double psi2 = std::norm(psi(el));
        if (psi2 > 1e-300)
            cons.quad_upper.emplace_back(g, cfg.p_elem_mw / psi2 - cfg.sigma_v2_mw);

        if (policy.incident_interval) {
            cons.quad_upper.emplace_back(g, p_hi);
            const bool active = policy.lower_active.empty()
                                    ? true
                                    : policy.lower_active[static_cast<std::size_t>(el)];
            if (active) {
                qcqp::ConstraintSet::AffineLower low;
                low.minorant = qcqp::mm_linearize(g, w_t);
                low.bound = p_lo * (1.0 + policy.lower_headroom);
                cons.affine_lower.push_back(std::move(low));
            }
        }
    }
    return {std::move(obj), std::move(cons)};
}

/// Build the reflection QP over psi: concave quadratic objective from the
/// quadratic transform, per-element disk radii = hardware gain cap
/// intersected with the output-power budget cap.
inline std::pair<qcqp::QuadraticObjective, RVec> assemble_psi_subproblem(
    const ChannelSet& ch, const BeamformerState& w, const RVec& rho, const CVec& mu,
    const SystemConfig& cfg, const RVec& a_hw) {
    const int k = static_cast<int>(ch.num_users());
    const Eigen::Index l = ch.num_elements();
    if (a_hw.size() != l) throw std::invalid_argument("assemble_psi_subproblem: a_hw size");

    std::vector<CVec> u(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        u[static_cast<std::size_t>(i)] = ch.h_bs_ris * w.w[static_cast<std::size_t>(i)];

    qcqp::QuadraticObjective obj;
    obj.lin = CVec::Zero(l);
    obj.quad = CMat::Zero(l, l);
    for (int uk = 0; uk < k; ++uk) {
        const CVec& hu = ch.h_ris_user[static_cast<std::size_t>(uk)];
        // s_{k,i} entries: h_{r,k,l} * conj((H_r w_i)_l); hbar_k^H w_i = s_{k,i}^H psi
        for (int i = 0; i < k; ++i) {
            const CVec s = hu.cwiseProduct(u[static_cast<std::size_t>(i)].conjugate());
            if (i == uk)
                obj.lin += 2.0 * std::sqrt(1.0 + rho(uk)) * mu(uk) * s;
            obj.quad += std::norm(mu(uk)) * (s * s.adjoint());
        }
        obj.quad += (std::norm(mu(uk)) * cfg.sigma_v2_mw) *
                    CMat(hu.cwiseAbs2().asDiagonal().toDenseMatrix().cast<cplx>());
    }

    const RVec p_in = incident_power(ch, w);
    RVec radii2(l);
    for (Eigen::Index el = 0; el < l; ++el)
        radii2(el) = std::min(a_hw(el), cfg.p_elem_mw / (p_in(el) + cfg.sigma_v2_mw));
    return {std::move(obj), std::move(radii2)};
}

namespace detail {

inline CVec unit_modulus(const CVec& psi, const CVec& fallback_phase_src) {
    CVec out(psi.size());
    for (Eigen::Index l = 0; l < psi.size(); ++l) {
        const cplx src = (std::abs(psi(l)) > 0.0) ? psi(l) : fallback_phase_src(l);
        const double mag = std::abs(src);
        out(l) = (mag > 0.0) ? src / mag : cplx(1.0, 0.0);
    }
    return out;
}

/// Re-synchronize the reflection magnitudes with the hardware response at
/// the realized incident powers (phases kept). Passive states are already
/// physical and are returned unchanged.
inline ReflectionState resync_with_hardware(const ChannelSet& ch, const BeamformerState& w,
                                            const CVec& psi, const SystemConfig& cfg,
                                            SolverMode mode) {
    ReflectionState out;
    if (mode == SolverMode::passive) {
        out.psi = psi;
        out.sync_from_psi();
        return out;
    }
    const RVec p_in = incident_power(ch, w);
    const RVec a_hw = update_amplification(ch, w.w, cfg.amplifier);
    out.psi.resize(psi.size());
    for (Eigen::Index l = 0; l < psi.size(); ++l) {
        const double budget = cfg.p_elem_mw / (p_in(l) + cfg.sigma_v2_mw);
        const double a = std::min(a_hw(l), budget);
        const double mag = std::abs(psi(l));
        const cplx phase = (mag > 0.0) ? psi(l) / mag : cplx(1.0, 0.0);
        out.psi(l) = std::sqrt(a) * phase;
    }
    out.sync_from_psi();
    return out;
}

/// Starting point of one BCD trajectory.
struct BcdInit {
    BeamformerState w;
    CVec psi;
    RVec a_hw;
};

/// Default initialization: per-user MRT through the flat (unit) surface at
/// full power, scaled down in the practical mode only when needed to keep
/// every element inside the linear interval's upper end.
inline BcdInit default_init(const ChannelSet& ch, const SystemConfig& cfg,
                            const SolverOptions& opts) {
    const int m = static_cast<int>(ch.num_antennas());
    const int k = static_cast<int>(ch.num_users());
    const Eigen::Index l = ch.num_elements();
    const bool practical = opts.mode == SolverMode::practical_active;
    const bool passive = opts.mode == SolverMode::passive;

    BcdInit s;
    const CVec psi_flat = CVec::Ones(l);
    s.w.w.resize(static_cast<std::size_t>(k));
    const double per_user = cfg.p_bs_mw / k;
    for (int u = 0; u < k; ++u) {
        CVec dir = effective_channel(ch, psi_flat, u);
        const double nrm = dir.norm();
        if (nrm > 0.0) dir /= nrm;
        else { dir = CVec::Zero(m); dir(0) = 1.0; }
        s.w.w[static_cast<std::size_t>(u)] = std::sqrt(per_user) * dir;
    }
    if (practical) {
        // Largest common power factor keeping every element at or below the
        // linear interval's end; it also minimizes the total lock-in
        // shortfall when full locking is out of reach.
        const double p_hi = dbm_to_mw(cfg.amplifier.p_in_m_dbm);
        const double pmax = incident_power(ch, s.w).maxCoeff();
        if (pmax > p_hi)
            for (auto& wk : s.w.w) wk *= std::sqrt(p_hi / pmax);
    }

    if (practical) s.a_hw = update_amplification(ch, s.w.w, cfg.amplifier);
    else if (passive) s.a_hw = RVec::Ones(l);
    else s.a_hw = RVec::Constant(l, opts.ideal_gain_cap);

    s.psi.resize(l);
    for (Eigen::Index el = 0; el < l; ++el) s.psi(el) = std::sqrt(s.a_hw(el));
    if (!passive) {
        const RVec p0 = incident_power(ch, s.w);
        for (Eigen::Index el = 0; el < l; ++el) {
            const double cap = cfg.p_elem_mw / (p0(el) + cfg.sigma_v2_mw);
            s.psi(el) = std::sqrt(std::min(s.a_hw(el), cap));
        }
    }
    return s;
}

/// One BCD trajectory from a given starting state.
inline SolveOutput run_bcd_from(const ChannelSet& ch, const SystemConfig& cfg,
                                const SolverOptions& opts, BcdInit init) {
    const int m = static_cast<int>(ch.num_antennas());
    const int k = static_cast<int>(ch.num_users());
    const Eigen::Index l = ch.num_elements();

    const bool practical = opts.mode == SolverMode::practical_active;
    const bool passive = opts.mode == SolverMode::passive;

    BeamformerState w = std::move(init.w);
    CVec psi = std::move(init.psi);
    RVec a_hw = std::move(init.a_hw);

    // The incident-power interval is enforced as a whole: its lower-bound
    // family activates once the iterate satisfies every element's bound
    // (from initialization scaling or discovered mid-run) and stays active
    // afterwards. Below that the surrogate runs unconstrained-in-interval
    // and the hardware response alone prices the lock-in mechanism.
    auto all_locked = [&](const RVec& p) {
        for (Eigen::Index el = 0; el < l; ++el)
            if (amplifier_region(mw_to_dbm(p(el)), cfg.amplifier) != AmpRegion::linear)
                return false;
        return true;
    };
    WSubproblemPolicy policy;
    policy.incident_interval = practical;
    bool lower_enforced = false;
    if (practical) {
        lower_enforced = all_locked(incident_power(ch, w));
        policy.lower_active.assign(static_cast<std::size_t>(l), lower_enforced);
    }

    SolveOutput out;
    IterationTrace& trace = out.trace;
    double rate_prev = sum_rate(ch, w, psi, cfg);

    for (int it = 0; it < opts.max_outer_iters; ++it) {
        IterationRecord rec;

        const RVec rho = update_rho(ch, w, psi, cfg);
        rec.f1 = eval_f1(ch, w, psi, rho, cfg);
        const CVec mu = update_mu(ch, w, psi, rho, cfg);
        rec.f2 = eval_f2(ch, w, psi, rho, mu, cfg);

        // ---- w update ----
        CVec w_stacked = stack_beams(w.w);
        auto [w_obj, w_cons] = assemble_w_subproblem(ch, psi, rho, mu, cfg, w_stacked, policy);
        qcqp::SolveResult w_res =
            qcqp::solve_ball_quadratic(w_obj, w_cons, w_stacked, opts.qcqp_tol, opts.qcqp_max_iter);
        if (w_res.status == qcqp::SolveStatus::infeasible && practical) {
            // lock-in interval unreachable from here: drop the lower-bound
            // family and let it re-activate once an iterate locks everything
            WSubproblemPolicy relaxed = policy;
            relaxed.lower_active.assign(static_cast<std::size_t>(l), false);
            auto [obj2, cons2] = assemble_w_subproblem(ch, psi, rho, mu, cfg, w_stacked, relaxed);
            w_res = qcqp::solve_ball_quadratic(obj2, cons2, w_stacked, opts.qcqp_tol,
                                               opts.qcqp_max_iter);
            policy = relaxed;
            lower_enforced = false;
        }
        if (w_res.status == qcqp::SolveStatus::infeasible)
            throw std::runtime_error(
                "run_bcd: transmit subproblem infeasible (per-element output power budget "
                "cannot be met)");
        const std::vector<CVec> w_anchor = w.w;
        const std::vector<CVec> w_cand = unstack_beams(w_res.x, m, k);

        // ---- amplification + psi update with a monotone safeguard ----
        // The gain update re-prices the reflection radii, which can clip psi
        // and undo more rate than the w step gained. Backtracking the beam
        // step toward the anchor always terminates: at the anchor the gains
        // are unchanged and the psi ascent cannot decrease the rate.
        double rate_new = rate_prev;
        RVec p_in;
        for (double alpha = 1.0;; alpha *= 0.5) {
            const bool at_anchor = alpha < 1e-4;
            for (int u = 0; u < k; ++u)
                w.w[static_cast<std::size_t>(u)] =
                    at_anchor ? w_anchor[static_cast<std::size_t>(u)]
                              : w_anchor[static_cast<std::size_t>(u)] +
                                    alpha * (w_cand[static_cast<std::size_t>(u)] -
                                             w_anchor[static_cast<std::size_t>(u)]);
            RVec a_try = a_hw;
            if (practical) a_try = update_amplification(ch, w.w, cfg.amplifier);
            auto [p_obj, radii2] = assemble_psi_subproblem(ch, w, rho, mu, cfg, a_try);
            if (passive) radii2 = RVec::Ones(l);
            const qcqp::SolveResult p_res = qcqp::solve_disk_quadratic(
                p_obj, radii2, psi, opts.qcqp_tol, opts.qcqp_max_iter);
            const CVec psi_try = passive ? unit_modulus(p_res.x, psi) : p_res.x;
            const double rate_try = sum_rate(ch, w, psi_try, cfg);
            if (rate_try >= rate_prev - 1e-9 || at_anchor) {
                a_hw = std::move(a_try);
                psi = psi_try;
                rate_new = rate_try;
                break;
            }
        }
        p_in = incident_power(ch, w);
        if (practical && !lower_enforced && all_locked(p_in)) {
            lower_enforced = true;
            policy.lower_active.assign(static_cast<std::size_t>(l), true);
        }

        // ---- bookkeeping ----
        rec.sum_rate = rate_new;
        rec.incident_mw = p_in;
        rec.regions.resize(static_cast<std::size_t>(l));
        for (Eigen::Index el = 0; el < l; ++el)
            rec.regions[static_cast<std::size_t>(el)] =
                amplifier_region(mw_to_dbm(p_in(el)), cfg.amplifier);
        rec.report = check_constraints(ch, w, psi, cfg);
        trace.iters.push_back(std::move(rec));

        const double rate = trace.iters.back().sum_rate;
        if (it > 0 && std::abs(rate - rate_prev) <= opts.outer_tol * std::max(rate_prev, 1e-12)) {
            trace.converged = true;
            rate_prev = rate;
            break;
        }
        rate_prev = rate;
    }

    out.w = w;
    trace.final_design_rate = rate_prev;
    out.refl = resync_with_hardware(ch, w, psi, cfg, opts.mode);
    trace.final_evaluated_rate = sum_rate(ch, w, out.refl.psi, cfg);
    trace.final_report = check_constraints(ch, w, out.refl.psi, cfg);
    return out;
}

} // namespace detail

/// Algorithm driver. `rng` is reserved for randomized initialization
/// strategies; the default MRT initialization is deterministic.
///
/// The practical mode runs two trajectories: one from the default
/// initialization and one warm-started from the hardware-re-synchronized
/// ideal-model solution, returning the better evaluated state. A
/// model-aware design should never fall below the model-unaware baseline
/// evaluated under the true response, and block ascent from the re-synced
/// anchor preserves that floor.
template <typename Rng>
SolveOutput run_bcd(const ChannelSet& ch, const SystemConfig& cfg, const SolverOptions& opts,
                    Rng& rng) {
    (void)rng;
    cfg.validate();
    if (opts.init_strategy != "mrt_power_scaled")
        throw std::invalid_argument("run_bcd: unknown init strategy " + opts.init_strategy);
    if (ch.num_antennas() != cfg.num_antennas || ch.num_users() != cfg.num_users ||
        ch.num_elements() != cfg.num_elements)
        throw std::invalid_argument("run_bcd: channel/config dimension mismatch");

    SolveOutput direct = detail::run_bcd_from(ch, cfg, opts, detail::default_init(ch, cfg, opts));
    if (opts.mode != SolverMode::practical_active) return direct;

    SolverOptions ideal_opts = opts;
    ideal_opts.mode = SolverMode::ideal_active;
    SolveOutput ideal =
        detail::run_bcd_from(ch, cfg, ideal_opts, detail::default_init(ch, cfg, ideal_opts));

    detail::BcdInit warm;
    warm.w = ideal.w;
    warm.psi = ideal.refl.psi; // already hardware-synced
    warm.a_hw = update_amplification(ch, ideal.w.w, cfg.amplifier);
    SolveOutput refined = detail::run_bcd_from(ch, cfg, opts, std::move(warm));

    // ideal's evaluated state is itself a valid practical-mode output
    SolveOutput* best = &direct;
    if (refined.trace.final_evaluated_rate > best->trace.final_evaluated_rate) best = &refined;
    if (ideal.trace.final_evaluated_rate > best->trace.final_evaluated_rate) best = &ideal;
    return std::move(*best);
}

/// Passive baseline: unit-modulus reflection, no amplifier, interval dropped.
template <typename Rng>
SolveOutput run_passive_mode(const ChannelSet& ch, const SystemConfig& cfg,
                             const SolverOptions& opts, Rng& rng) {
    SolverOptions o = opts;
    o.mode = SolverMode::passive;
    return run_bcd(ch, cfg, o, rng);
}

/// Ideal-model baseline: constant assumed gain, interval dropped; the
/// returned state is re-evaluated under the hardware response.
template <typename Rng>
SolveOutput run_ideal_mode(const ChannelSet& ch, const SystemConfig& cfg,
                           const SolverOptions& opts, Rng& rng) {
    SolverOptions o = opts;
    o.mode = SolverMode::ideal_active;
    return run_bcd(ch, cfg, o, rng);
}

} // namespace arisim

#endif // ARISIM_SOLVER_HPP
