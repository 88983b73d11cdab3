#pragma once

// umbrella header: steady-state cross-phase response of a weak probe and
// trigger in a four-level medium dressed by a quasi-standing coupling wave

#include "tripod/config.hpp"
#include "tripod/constants.hpp"
#include "tripod/lattice_kernels.hpp"
#include "tripod/output.hpp"
#include "tripod/params.hpp"
#include "tripod/populations.hpp"
#include "tripod/propagation.hpp"
#include "tripod/quadrature.hpp"
#include "tripod/selfcheck.hpp"
#include "tripod/spectra.hpp"
#include "tripod/susceptibility.hpp"
