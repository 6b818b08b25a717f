// SPDX-License-Identifier: Apache-2.0

#include "arisim/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace arisim;

TEST(PathLoss, ReferenceDistance) {
    EXPECT_NEAR(path_loss(1.0, 3.2, -30.0), 1e-3, 1e-18);
}

TEST(PathLoss, MatchesLogDomain) {
    // 400 m at exponent 3.2: -30 - 32*log10(400) dB
    const double lin = path_loss(400.0, 3.2, -30.0);
    const double db = -30.0 - 32.0 * std::log10(400.0);
    EXPECT_NEAR(lin, std::pow(10.0, db / 10.0), 1e-12 * lin);
    EXPECT_NEAR(lin, 4.7e-12, 0.1e-12);

    // 10 m at exponent 2.7: -30 - 27 dB
    EXPECT_NEAR(path_loss(10.0, 2.7, -30.0), std::pow(10.0, -5.7), 1e-15);
}

TEST(PathLoss, RejectsNonPositiveDistance) {
    EXPECT_THROW(path_loss(0.0, 3.2, -30.0), std::domain_error);
    EXPECT_THROW(path_loss(-1.0, 3.2, -30.0), std::domain_error);
}

TEST(Geometry, DrawUsersStaysInDisk) {
    Geometry geo;
    std::mt19937_64 rng(7);
    geo.draw_users(64, rng);
    for (const auto& p : geo.user_positions)
        EXPECT_LE(distance(p, geo.user_center), geo.user_radius + 1e-12);
    // distances used downstream are strictly positive
    for (std::size_t k = 0; k < geo.user_positions.size(); ++k)
        EXPECT_GT(geo.ris_user_distance(k), 0.0);
}

TEST(BsRisChannel, DeterministicUnderSeed) {
    Geometry geo;
    PathLossParams pl;
    std::mt19937_64 a(123), b(123);
    const CMat h1 = gen_bs_ris_channel(geo, pl, 1.0, 4, 16, a);
    const CMat h2 = gen_bs_ris_channel(geo, pl, 1.0, 4, 16, b);
    ASSERT_EQ(h1.rows(), 16);
    ASSERT_EQ(h1.cols(), 4);
    EXPECT_TRUE(h1 == h2); // bit-identical
}

TEST(BsRisChannel, PureLosHasUniformMagnitude) {
    Geometry geo;
    PathLossParams pl;
    std::mt19937_64 rng(5);
    const CMat h = gen_bs_ris_channel(geo, pl, 1e12, 4, 8, rng);
    const double expect = std::sqrt(path_loss(geo.bs_ris_distance(), pl.alpha_bs_ris, pl.c0_db));
    for (Eigen::Index i = 0; i < h.size(); ++i)
        EXPECT_NEAR(std::abs(h(i)), expect, 1e-5 * expect);
}

TEST(BsRisChannel, RayleighPowerCalibration) {
    // beta = 0: E|entry|^2 = PL, checked over >= 1e5 entries
    Geometry geo;
    PathLossParams pl;
    const double gain = path_loss(geo.bs_ris_distance(), pl.alpha_bs_ris, pl.c0_db);
    std::mt19937_64 rng(11);
    double acc = 0.0;
    std::size_t n = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const CMat h = gen_bs_ris_channel(geo, pl, 0.0, 20, 50, rng);
        acc += h.cwiseAbs2().sum();
        n += static_cast<std::size_t>(h.size());
    }
    ASSERT_GE(n, 100000u);
    EXPECT_NEAR(acc / static_cast<double>(n), gain, 0.02 * gain);
}

TEST(BsRisChannel, RicianVarianceDecomposition) {
    // variance around the per-entry mean is PL/(beta+1)
    Geometry geo;
    PathLossParams pl;
    const double beta = 1.0;
    const double gain = path_loss(geo.bs_ris_distance(), pl.alpha_bs_ris, pl.c0_db);
    const int m = 2, l = 2, reps = 25000;
    std::mt19937_64 rng(13);
    std::vector<CMat> draws;
    draws.reserve(reps);
    for (int r = 0; r < reps; ++r) draws.push_back(gen_bs_ris_channel(geo, pl, beta, m, l, rng));

    CMat mean = CMat::Zero(l, m);
    for (const auto& h : draws) mean += h;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (const auto& h : draws) var += (h - mean).cwiseAbs2().sum();
    var /= static_cast<double>(reps) * (m * l);
    EXPECT_NEAR(var, gain / (beta + 1.0), 0.02 * gain / (beta + 1.0));
}

TEST(RisUserChannels, DeterministicUnderSeed) {
    PathLossParams pl;
    std::mt19937_64 a(3), b(3);
    Geometry geo_a, geo_b;
    geo_a.draw_users(4, a);
    geo_b.draw_users(4, b);
    const auto h1 = gen_ris_user_channels(geo_a, pl, 4, 32, a);
    const auto h2 = gen_ris_user_channels(geo_b, pl, 4, 32, b);
    ASSERT_EQ(h1.size(), h2.size());
    for (std::size_t k = 0; k < h1.size(); ++k) EXPECT_TRUE(h1[k] == h2[k]);
}

TEST(RisUserChannels, UnitPathLossCalibration) {
    // place the user 1 m from the surface with c0 = 0 dB so PL = 1
    Geometry geo;
    geo.ris_position = {0.0, 0.0};
    geo.user_positions = {{1.0, 0.0}};
    PathLossParams pl;
    pl.c0_db = 0.0;
    std::mt19937_64 rng(17);
    double acc = 0.0;
    std::size_t n = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto h = gen_ris_user_channels(geo, pl, 1, 1000, rng);
        acc += h[0].cwiseAbs2().sum();
        n += static_cast<std::size_t>(h[0].size());
    }
    ASSERT_GE(n, 100000u);
    EXPECT_NEAR(acc / static_cast<double>(n), 1.0, 0.02);
}

TEST(RisUserChannels, ZeroPathLossGivesZeroVector) {
    Geometry geo;
    geo.user_positions = {{401.0, 0.0}};
    PathLossParams pl;
    pl.c0_db = -std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(19);
    const auto h = gen_ris_user_channels(geo, pl, 1, 8, rng);
    EXPECT_EQ(h[0].cwiseAbs().maxCoeff(), 0.0);
}

TEST(ChannelSet, MakeChannelSetShapes) {
    Geometry geo;
    PathLossParams pl;
    std::mt19937_64 rng(29);
    const ChannelSet cs = make_channel_set(geo, pl, 1.0, 4, 4, 64, rng);
    EXPECT_EQ(cs.num_antennas(), 4);
    EXPECT_EQ(cs.num_users(), 4);
    EXPECT_EQ(cs.num_elements(), 64);
    EXPECT_TRUE(cs.h_bs_ris.allFinite());
    for (const auto& h : cs.h_ris_user) EXPECT_TRUE(h.allFinite());
}
