// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Node placement and large-scale fading. The deployment is described by
// 2-D coordinates in meters; users are drawn uniformly on a disk around
// a configurable center.

#ifndef ARISIM_GEOMETRY_HPP
#define ARISIM_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "arisim/units.hpp"

namespace arisim {

using Point2 = std::array<double, 2>;

inline double distance(const Point2& a, const Point2& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}

/// Distance-law parameters: PL(d) = c0 * (1/d)^alpha with c0 given in dB
/// at the 1 m reference.
struct PathLossParams {
    double c0_db = -30.0;
    double alpha_bs_ris = 3.2;
    double alpha_ris_user = 2.7;
};

/// Linear power gain of the distance law. Throws on non-positive distance.
inline double path_loss(double d_m, double alpha, double c0_db) {
    if (!(d_m > 0.0)) throw std::domain_error("path_loss: distance must be > 0");
    return db_to_linear(c0_db) * std::pow(d_m, -alpha);
}

/// Deployment: BS and RIS positions plus the user disk. `user_positions`
/// is either supplied or drawn with draw_users().
struct Geometry {
    Point2 bs_position{0.0, -40.0};
    Point2 ris_position{400.0, 15.0};
    Point2 user_center{400.0, 0.0};
    double user_radius = 8.0;
    std::vector<Point2> user_positions;

    /// Draw k user positions uniformly on the disk around user_center.
    template <typename Rng>
    void draw_users(int k, Rng& rng) {
        if (k < 1) throw std::invalid_argument("draw_users: need k >= 1");
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        user_positions.resize(static_cast<std::size_t>(k));
        for (auto& p : user_positions) {
            // uniform over the disk: radius ~ R*sqrt(u)
            const double r = user_radius * std::sqrt(unif(rng));
            const double phi = 2.0 * M_PI * unif(rng);
            p = {user_center[0] + r * std::cos(phi), user_center[1] + r * std::sin(phi)};
        }
    }

    double bs_ris_distance() const { return distance(bs_position, ris_position); }
    double ris_user_distance(std::size_t k) const {
        return distance(ris_position, user_positions.at(k));
    }
};

} // namespace arisim

#endif // ARISIM_GEOMETRY_HPP
