// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// dB / dBm conversions. All internal computation is in linear scale
// (mW for powers); decibel values appear only at configuration and
// reporting boundaries.

#ifndef ARISIM_UNITS_HPP
#define ARISIM_UNITS_HPP

#include <cmath>
#include <limits>

namespace arisim {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) {
    if (lin <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(lin);
}

/// Power in mW -> dBm. Zero power maps to -inf dBm.
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

/// Power in dBm -> mW.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }

} // namespace arisim

#endif // ARISIM_UNITS_HPP
