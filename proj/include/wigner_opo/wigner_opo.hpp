#pragma once

// Truncated-Wigner phase-space model of the nondegenerate optical parametric
// oscillator: drift/noise fields, the closed-form steady-state distribution,
// stochastic trajectory integration, and moment/entanglement diagnostics.

#include "wigner_opo/errors.hpp"
#include "wigner_opo/grid.hpp"
#include "wigner_opo/linearized.hpp"
#include "wigner_opo/model.hpp"
#include "wigner_opo/moments.hpp"
#include "wigner_opo/parallel.hpp"
#include "wigner_opo/rng.hpp"
#include "wigner_opo/sde.hpp"
#include "wigner_opo/steady_state.hpp"
#include "wigner_opo/sweep.hpp"
#include "wigner_opo/types.hpp"
#include "wigner_opo/version.hpp"
