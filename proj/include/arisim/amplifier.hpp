// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Reflection-amplifier response. Each element amplifies only when the
// incident signal power falls inside its lock-in interval:
//
//   p_in in [p_in_min, p_in_m]   linear amplification, gain from the
//                                fitted law  slope * p_in + intercept
//   p_in in (p_in_m, p_in_max]   saturation: constant output power, so
//                                the gain falls off as p_out_sat - p_in
//   otherwise                    plain reflection, 0 dB
//
// The saturated output power is pinned to the linear law at p_in_m, which
// makes the response continuous at that boundary by construction.

#ifndef ARISIM_AMPLIFIER_HPP
#define ARISIM_AMPLIFIER_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "arisim/channel.hpp"
#include "arisim/units.hpp"

namespace arisim {

enum class AmpRegion { reflect_below, linear, saturation, reflect_above };

struct AmplifierModel {
    double p_in_min_dbm = -102.0;
    double p_in_m_dbm = 10.0;
    double p_in_max_dbm = 20.0;
    double linear_slope = -0.195;     // dB per dBm
    double linear_intercept_db = 22.46;

    double gain_linear_law_db(double p_in_dbm) const {
        return linear_slope * p_in_dbm + linear_intercept_db;
    }

    /// Saturated output power (dBm), defined so the two laws meet at p_in_m.
    double p_out_sat_dbm() const { return p_in_m_dbm + gain_linear_law_db(p_in_m_dbm); }

    void validate() const {
        if (!(p_in_min_dbm < p_in_m_dbm && p_in_m_dbm < p_in_max_dbm))
            throw std::invalid_argument("AmplifierModel: need p_in_min < p_in_m < p_in_max");
    }
};

inline AmpRegion amplifier_region(double p_in_dbm, const AmplifierModel& m) {
    if (p_in_dbm < m.p_in_min_dbm) return AmpRegion::reflect_below;
    if (p_in_dbm <= m.p_in_m_dbm) return AmpRegion::linear;
    if (p_in_dbm <= m.p_in_max_dbm) return AmpRegion::saturation;
    return AmpRegion::reflect_above;
}

/// Return gain in dB as a function of incident power in dBm.
inline double reflection_gain_db(double p_in_dbm, const AmplifierModel& m) {
    switch (amplifier_region(p_in_dbm, m)) {
        case AmpRegion::linear: return m.gain_linear_law_db(p_in_dbm);
        case AmpRegion::saturation: return m.p_out_sat_dbm() - p_in_dbm;
        default: return 0.0;
    }
}

/// Linear power amplification factor a >= 1. Zero incident power cannot
/// lock the amplifier, so it reflects with a = 1.
inline double amplification_factor(double p_in_mw, const AmplifierModel& m) {
    if (p_in_mw < 0.0) throw std::domain_error("amplification_factor: negative power");
    if (p_in_mw == 0.0) return 1.0;
    return db_to_linear(reflection_gain_db(mw_to_dbm(p_in_mw), m));
}

/// Incident signal power on each element (mW): p_l = sum_k |h_{r,l}^H w_k|^2.
inline RVec incident_power_mw(const CMat& h_bs_ris, const std::vector<CVec>& w) {
    RVec p = RVec::Zero(h_bs_ris.rows());
    for (const auto& wk : w) {
        if (wk.size() != h_bs_ris.cols())
            throw std::invalid_argument("incident_power_mw: beam dimension mismatch");
        p += (h_bs_ris * wk).cwiseAbs2();
    }
    return p;
}

/// Per-element amplification factors for the current transmit beams.
inline RVec update_amplification(const ChannelSet& ch, const std::vector<CVec>& w,
                                 const AmplifierModel& m) {
    const RVec p = incident_power_mw(ch.h_bs_ris, w);
    RVec a(p.size());
    for (Eigen::Index l = 0; l < p.size(); ++l) a(l) = amplification_factor(p(l), m);
    return a;
}

} // namespace arisim

#endif // ARISIM_AMPLIFIER_HPP
