// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Signal model for the amplifying-RIS downlink: system state containers,
// effective channels, per-user SINR, sum-rate, and feasibility reporting
// for the design constraints (BS power budget, per-element output power,
// incident-power interval).

#ifndef ARISIM_SYSTEM_HPP
#define ARISIM_SYSTEM_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "arisim/amplifier.hpp"
#include "arisim/channel.hpp"

namespace arisim {

struct SystemConfig {
    int num_antennas = 4;   // M
    int num_users = 4;      // K
    int num_elements = 64;  // L
    double p_bs_mw = 10.0;          // BS transmit power budget
    double p_elem_mw = 1.0233;      // per-element output power budget (0.1 dBm)
    double sigma_v2_mw = 1e-9;      // amplifier noise power (-90 dBm)
    double sigma2_mw = 1e-9;        // user noise power (-90 dBm)
    AmplifierModel amplifier;

    void validate() const {
        if (num_antennas < 1 || num_users < 1 || num_elements < 1)
            throw std::invalid_argument("SystemConfig: counts must be >= 1");
        if (!(p_bs_mw > 0.0 && p_elem_mw > 0.0 && sigma_v2_mw > 0.0 && sigma2_mw > 0.0))
            throw std::invalid_argument("SystemConfig: powers must be > 0");
        amplifier.validate();
    }
};

/// K transmit beamforming vectors of length M.
struct BeamformerState {
    std::vector<CVec> w;

    double total_power() const {
        double p = 0.0;
        for (const auto& wk : w) p += wk.squaredNorm();
        return p;
    }
};

/// Per-element reflection state. `psi` is the combined coefficient
/// sqrt(a_l) * exp(j theta_l); `a` and `theta` track the amplifier gain and
/// phase blocks separately. |psi_l|^2 == a_l holds when synchronized.
struct ReflectionState {
    RVec a;
    RVec theta;
    CVec psi;

    static ReflectionState from_parts(const RVec& a, const RVec& theta) {
        ReflectionState s;
        s.a = a;
        s.theta = theta;
        s.psi.resize(a.size());
        for (Eigen::Index l = 0; l < a.size(); ++l)
            s.psi(l) = std::polar(std::sqrt(a(l)), theta(l));
        return s;
    }

    /// Reset a and theta from psi (|psi_l|^2 -> a_l, arg psi_l -> theta_l).
    void sync_from_psi() {
        a = psi.cwiseAbs2();
        theta.resize(psi.size());
        for (Eigen::Index l = 0; l < psi.size(); ++l) theta(l) = std::arg(psi(l));
    }
};

/// FP auxiliaries: rho is the SINR-like ratio block, mu the quadratic
/// transform block.
struct AuxiliaryState {
    RVec rho;
    CVec mu;
};

/// p_in,l = sum_k |h_{r,l}^H w_k|^2, in mW.
inline RVec incident_power(const ChannelSet& ch, const BeamformerState& w) {
    return incident_power_mw(ch.h_bs_ris, w.w);
}

/// Effective BS->user-k channel through the surface, as a column vector:
/// hbar_k = H_r^H diag(psi)^H h_{r,k}, i.e. hbar_k^H = h_{r,k}^H diag(psi) H_r.
inline CVec effective_channel(const ChannelSet& ch, const CVec& psi, int k) {
    const CVec& hu = ch.h_ris_user.at(static_cast<std::size_t>(k));
    if (psi.size() != hu.size())
        throw std::invalid_argument("effective_channel: psi dimension mismatch");
    return ch.h_bs_ris.adjoint() * psi.conjugate().cwiseProduct(hu);
}

/// Noise power forwarded by the surface into user k's receiver, divided by
/// sigma_v^2: ||h_{r,k}^H diag(psi)||^2.
inline double forwarded_noise_gain(const ChannelSet& ch, const CVec& psi, int k) {
    const CVec& hu = ch.h_ris_user.at(static_cast<std::size_t>(k));
    return hu.cwiseAbs2().dot(psi.cwiseAbs2());
}

inline double sinr(const ChannelSet& ch, const BeamformerState& w, const CVec& psi,
                   const SystemConfig& cfg, int k) {
    const CVec hbar = effective_channel(ch, psi, k);
    double interference = 0.0;
    double signal = 0.0;
    for (int i = 0; i < static_cast<int>(w.w.size()); ++i) {
        const double p = std::norm(hbar.dot(w.w[static_cast<std::size_t>(i)]));
        if (i == k) signal = p; else interference += p;
    }
    const double noise = forwarded_noise_gain(ch, psi, k) * cfg.sigma_v2_mw + cfg.sigma2_mw;
    return signal / (interference + noise);
}

/// sum_k log2(1 + gamma_k), in bits/s/Hz.
inline double sum_rate(const ChannelSet& ch, const BeamformerState& w, const CVec& psi,
                       const SystemConfig& cfg) {
    double r = 0.0;
    for (int k = 0; k < static_cast<int>(w.w.size()); ++k)
        r += std::log2(1.0 + sinr(ch, w, psi, cfg, k));
    return r;
}

/// Slack report for the design constraints. Positive slack = satisfied.
/// Violations are flagged beyond a 1e-8 relative tolerance.
struct ConstraintReport {
    double bs_power_slack = 0.0;        // p_bs - sum ||w_k||^2
    RVec elem_power_slack;              // P_l - |psi_l|^2 (p_in,l + sigma_v^2)
    RVec incident_lower_slack;          // p_in,l - P_in_min
    RVec incident_upper_slack;          // P_in_m - p_in,l
    bool bs_power_ok = true;
    bool elem_power_ok = true;
    bool incident_lower_ok = true;
    bool incident_upper_ok = true;

    static constexpr double kRelTol = 1e-8;

    bool ok(bool include_incident_interval) const {
        return bs_power_ok && elem_power_ok &&
               (!include_incident_interval || (incident_lower_ok && incident_upper_ok));
    }
};

inline ConstraintReport check_constraints(const ChannelSet& ch, const BeamformerState& w,
                                          const CVec& psi, const SystemConfig& cfg) {
    ConstraintReport rep;
    const double tol = ConstraintReport::kRelTol;

    rep.bs_power_slack = cfg.p_bs_mw - w.total_power();
    rep.bs_power_ok = rep.bs_power_slack >= -tol * cfg.p_bs_mw;

    const RVec p_in = incident_power(ch, w);
    const Eigen::Index nl = p_in.size();
    rep.elem_power_slack.resize(nl);
    rep.incident_lower_slack.resize(nl);
    rep.incident_upper_slack.resize(nl);

    const double p_lo = dbm_to_mw(cfg.amplifier.p_in_min_dbm);
    const double p_hi = dbm_to_mw(cfg.amplifier.p_in_m_dbm);
    for (Eigen::Index l = 0; l < nl; ++l) {
        const double out = std::norm(psi(l)) * (p_in(l) + cfg.sigma_v2_mw);
        rep.elem_power_slack(l) = cfg.p_elem_mw - out;
        rep.incident_lower_slack(l) = p_in(l) - p_lo;
        rep.incident_upper_slack(l) = p_hi - p_in(l);
        if (rep.elem_power_slack(l) < -tol * cfg.p_elem_mw) rep.elem_power_ok = false;
        if (rep.incident_lower_slack(l) < -tol * p_lo) rep.incident_lower_ok = false;
        if (rep.incident_upper_slack(l) < -tol * p_hi) rep.incident_upper_ok = false;
    }
    return rep;
}

} // namespace arisim

#endif // ARISIM_SYSTEM_HPP
