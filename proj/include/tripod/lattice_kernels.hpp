#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tripod/params.hpp"

namespace tripod {

namespace detail {

inline std::string cplx_str(cplx v) {
    std::ostringstream os;
    os << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "j)";
    return os.str();
}

// root w of w^2 = 1 - mu^2 chosen so the expansion ratio t = -mu/(1+w)
// has |t| <= 1; the other root would give a growing harmonic sequence
inline cplx decaying_root(cplx mu) {
    cplx w = std::sqrt(1.0 - mu * mu);
    if (std::abs(-mu / (1.0 + w)) > 1.0) w = -w;
    cplx t = -mu / (1.0 + w);
    if (std::abs(std::abs(t) - 1.0) < 1e-12)
        throw std::domain_error("lattice kernel: branch ambiguous at mu = " +
                                cplx_str(mu) + " (kernel zero on the unit circle)");
    return w;
}

} // namespace detail

// cosine moments of the inverse lattice kernel:
//   lattice_f1(n, mu) = mean over one period of cos(n x) / (1 + mu cos x)
// closed form t^n / w with t = -mu/(1+w), w the decaying root
inline cplx lattice_f1(int n, cplx mu) {
    if (n < 0) throw std::domain_error("lattice_f1: n must be >= 0");
    if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
    cplx w = detail::decaying_root(mu);
    cplx t = -mu / (1.0 + w);
    cplx tn = 1.0;
    for (int k = 0; k < n; ++k) tn *= t;
    return tn / w;
}

// cosine moments of the squared inverse kernel, n = 0..3:
//   lattice_f2(n, mu) = mean over one period of cos(n x) / (1 + mu cos x)^2
// product form t^n (1 + n w) / w^3 with the same t, w as lattice_f1; the
// equivalent forms that subtract 2/mu^2 or 8/mu^3 terms lose half the
// significand for small |mu|, this one keeps full relative precision
inline cplx lattice_f2(int n, cplx mu) {
    if (n < 0 || n > 3) throw std::domain_error("lattice_f2: n must be in 0..3");
    if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
    cplx w = detail::decaying_root(mu);
    cplx t = -mu / (1.0 + w);
    cplx tn = 1.0;
    for (int k = 0; k < n; ++k) tn *= t;
    return tn * (1.0 + static_cast<double>(n) * w) / (w * w * w);
}

} // namespace tripod
