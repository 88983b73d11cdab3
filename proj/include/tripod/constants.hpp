#pragma once

namespace tripod {

// CODATA values, SI
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double eps0 = 8.8541878128e-12;   // F / m
inline constexpr double c_light = 2.99792458e8;    // m / s

// internal frequency unit is MHz (cycles / us); lengths are metres,
// so phase accumulation uses c in m / us
inline constexpr double c_m_per_us = 299.792458;

inline constexpr double pi = 3.141592653589793238462643383279502884;

} // namespace tripod
