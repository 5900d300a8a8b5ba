#pragma once

#include <cmath>

namespace ncrsim {

// dB <-> linear conversions. Core models work in linear units (mW,
// dimensionless ratios); dB appears only at configuration and reporting
// boundaries.

inline double db_to_linear(double db) { return std::pow(10.0, db * 0.1); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm * 0.1); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

} // namespace ncrsim
