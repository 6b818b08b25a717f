// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Small-scale fading generation. The BS->RIS link is Rician (LoS steering
// outer product plus Rayleigh scatter); RIS->user links are Rayleigh.
// Everything is a pure function of (inputs, rng state), so one seed gives
// one reproducible realization.

#ifndef ARISIM_CHANNEL_HPP
#define ARISIM_CHANNEL_HPP

#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "arisim/geometry.hpp"

namespace arisim {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using cplx = std::complex<double>;

/// One realization of all links: `h_bs_ris` is L x M (row l = adjoint of
/// the BS->element-l channel), `h_ris_user[k]` is the length-L RIS->user-k
/// channel.
struct ChannelSet {
    CMat h_bs_ris;
    std::vector<CVec> h_ris_user;
    double rician_factor = 1.0;

    Eigen::Index num_elements() const { return h_bs_ris.rows(); }
    Eigen::Index num_antennas() const { return h_bs_ris.cols(); }
    Eigen::Index num_users() const { return static_cast<Eigen::Index>(h_ris_user.size()); }
};

namespace detail {

/// Circularly-symmetric complex Gaussian with unit E|x|^2.
template <typename Rng>
cplx randn_c(Rng& rng) {
    static constexpr double inv_sqrt2 = 0.70710678118654752440;
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return cplx(re * inv_sqrt2, im * inv_sqrt2);
}

/// Half-wavelength ULA steering vector, array axis along x, azimuth
/// measured from the +x axis.
inline CVec ula_steering(int n, double azimuth_rad) {
    CVec a(n);
    const double phase_step = M_PI * std::cos(azimuth_rad);
    for (int i = 0; i < n; ++i) a(i) = std::polar(1.0, phase_step * i);
    return a;
}

} // namespace detail

/// BS->RIS Rician channel: sqrt(PL) * ( sqrt(b/(b+1)) H_los + sqrt(1/(b+1)) H_nlos ).
/// H_los is the unit-modulus steering outer product from the link azimuths,
/// H_nlos has i.i.d. CN(0,1) entries.
template <typename Rng>
CMat gen_bs_ris_channel(const Geometry& geo, const PathLossParams& pl, double beta,
                        int m, int l, Rng& rng) {
    if (beta < 0.0) throw std::invalid_argument("gen_bs_ris_channel: beta must be >= 0");
    if (m < 1 || l < 1) throw std::invalid_argument("gen_bs_ris_channel: need M, L >= 1");

    const double d = geo.bs_ris_distance();
    const double gain = path_loss(d, pl.alpha_bs_ris, pl.c0_db);

    const double az_dep = std::atan2(geo.ris_position[1] - geo.bs_position[1],
                                     geo.ris_position[0] - geo.bs_position[0]);
    const double az_arr = std::atan2(geo.bs_position[1] - geo.ris_position[1],
                                     geo.bs_position[0] - geo.ris_position[0]);
    const CVec a_ris = detail::ula_steering(l, az_arr);
    const CVec a_bs = detail::ula_steering(m, az_dep);
    const CMat h_los = a_ris * a_bs.adjoint();

    CMat h_nlos(l, m);
    for (int r = 0; r < l; ++r)
        for (int c = 0; c < m; ++c) h_nlos(r, c) = detail::randn_c(rng);

    const double w_los = std::sqrt(beta / (beta + 1.0));
    const double w_nlos = std::sqrt(1.0 / (beta + 1.0));
    return std::sqrt(gain) * (w_los * h_los + w_nlos * h_nlos);
}

/// RIS->user Rayleigh channels, one length-L vector per user, each scaled
/// by sqrt(PL(d_k)) for that user's distance.
template <typename Rng>
std::vector<CVec> gen_ris_user_channels(const Geometry& geo, const PathLossParams& pl,
                                        int k, int l, Rng& rng) {
    if (k < 1) throw std::invalid_argument("gen_ris_user_channels: need K >= 1");
    if (geo.user_positions.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("gen_ris_user_channels: user positions not drawn");

    std::vector<CVec> out(static_cast<std::size_t>(k));
    for (int u = 0; u < k; ++u) {
        const double d = geo.ris_user_distance(static_cast<std::size_t>(u));
        const double amp = std::sqrt(path_loss(d, pl.alpha_ris_user, pl.c0_db));
        CVec h(l);
        for (int i = 0; i < l; ++i) h(i) = amp * detail::randn_c(rng);
        out[static_cast<std::size_t>(u)] = std::move(h);
    }
    return out;
}

/// Draw users and both links in one call.
template <typename Rng>
ChannelSet make_channel_set(Geometry geo, const PathLossParams& pl, double beta,
                            int m, int k, int l, Rng& rng) {
    ChannelSet cs;
    cs.rician_factor = beta;
    if (geo.user_positions.size() != static_cast<std::size_t>(k)) geo.draw_users(k, rng);
    cs.h_bs_ris = gen_bs_ris_channel(geo, pl, beta, m, l, rng);
    cs.h_ris_user = gen_ris_user_channels(geo, pl, k, l, rng);
    return cs;
}

} // namespace arisim

#endif // ARISIM_CHANNEL_HPP
