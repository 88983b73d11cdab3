#pragma once

#include <cmath>
#include <complex>

#include "tripod/constants.hpp"
#include "tripod/params.hpp"

namespace tripod {

// mean of f(x) cos(n x) over one period, sampled on a uniform grid; for
// periodic smooth integrands the trapezoid rule converges spectrally, so
// 4096 points is far beyond double precision for the kernels used here
template <class F>
cplx cosine_moment(F&& f, int n, int npts = 4096) {
    cplx acc = 0.0;
    for (int k = 0; k < npts; ++k) {
        double x = 2.0 * pi * k / npts;
        acc += f(x) * std::cos(n * x);
    }
    return acc / static_cast<double>(npts);
}

} // namespace tripod
