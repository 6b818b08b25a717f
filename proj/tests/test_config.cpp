// SPDX-License-Identifier: Apache-2.0

#include "arisim/config.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace arisim;

TEST(IniFile, ParsesSectionsAndTypes) {
    const IniFile ini = IniFile::parse(
        "schema_version = 1\n"
        "[system]\n"
        "num_antennas = 8   # trailing comment\n"
        "p_bs_dbm = 12.5\n"
        "\n"
        "[experiment]\n"
        "modes = passive\n");
    EXPECT_EQ(ini.get_int("system", "num_antennas", 0), 8);
    EXPECT_EQ(ini.get_double("system", "p_bs_dbm", 0.0), 12.5);
    EXPECT_EQ(ini.get_string("experiment", "modes", ""), "passive");
    EXPECT_EQ(ini.get_int("system", "missing", 42), 42);
}

TEST(IniFile, RejectsMalformedLines) {
    EXPECT_THROW(IniFile::parse("[system\nx = 1\n"), std::runtime_error);
    EXPECT_THROW(IniFile::parse("just a bare token\n"), std::runtime_error);
    EXPECT_THROW(IniFile::parse("= 3\n"), std::runtime_error);
}

TEST(IniFile, RejectsBadNumbers) {
    const IniFile ini = IniFile::parse("[system]\nnum_antennas = four\np = 1.2.3\n");
    EXPECT_THROW(ini.get_int("system", "num_antennas", 0), std::runtime_error);
    EXPECT_THROW(ini.get_double("system", "p", 0.0), std::runtime_error);
}

TEST(SimulationConfig, DefaultsMatchDefaultText) {
    const SimulationConfig from_empty = SimulationConfig::from_ini(IniFile::parse(""));
    const SimulationConfig from_text =
        SimulationConfig::from_ini(IniFile::parse(SimulationConfig::default_text()));
    EXPECT_EQ(from_empty.system.num_antennas, from_text.system.num_antennas);
    EXPECT_EQ(from_empty.system.num_elements, from_text.system.num_elements);
    EXPECT_NEAR(from_empty.system.p_bs_mw, from_text.system.p_bs_mw, 1e-15);
    EXPECT_NEAR(from_empty.system.amplifier.p_in_min_dbm,
                from_text.system.amplifier.p_in_min_dbm, 1e-15);
    EXPECT_EQ(from_empty.modes.size(), from_text.modes.size());
    EXPECT_EQ(from_empty.realizations, from_text.realizations);
    EXPECT_EQ(from_empty.power_values_dbm, from_text.power_values_dbm);
}

TEST(SimulationConfig, UnitsConvertedToLinear) {
    const SimulationConfig c = SimulationConfig::from_ini(IniFile::parse(
        "[system]\np_bs_dbm = 10\np_elem_dbm = 0.1\nsigma_v2_dbm = -90\nsigma2_dbm = -90\n"));
    EXPECT_NEAR(c.system.p_bs_mw, 10.0, 1e-12);
    EXPECT_NEAR(c.system.p_elem_mw, std::pow(10.0, 0.01), 1e-12);
    EXPECT_NEAR(c.system.sigma_v2_mw, 1e-9, 1e-21);
}

TEST(SimulationConfig, RejectsUnknownKeys) {
    EXPECT_THROW(
        SimulationConfig::from_ini(IniFile::parse("[system]\nnum_antenas = 4\n")),
        std::runtime_error);
}

TEST(SimulationConfig, RejectsWrongSchemaVersion) {
    EXPECT_THROW(SimulationConfig::from_ini(IniFile::parse("schema_version = 2\n")),
                 std::runtime_error);
}

TEST(SimulationConfig, ParsesModeList) {
    const SimulationConfig c = SimulationConfig::from_ini(
        IniFile::parse("[experiment]\nmodes = passive, ideal_active\n"));
    ASSERT_EQ(c.modes.size(), 2u);
    EXPECT_EQ(c.modes[0], SolverMode::passive);
    EXPECT_EQ(c.modes[1], SolverMode::ideal_active);
    EXPECT_THROW(
        SimulationConfig::from_ini(IniFile::parse("[experiment]\nmodes = warp_drive\n")),
        std::runtime_error);
}

TEST(SimulationConfig, MissingFileNamesPath) {
    try {
        SimulationConfig::load("/nonexistent/arisim.conf");
        FAIL() << "expected exception";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/arisim.conf"), std::string::npos);
    }
}
