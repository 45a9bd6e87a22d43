#pragma once

// Umbrella header: spectral sum rules Z(s) = sum_n E_n^{-s} for perturbed
// Schrodinger problems, exact impurity Green's functions in 1D and 2D, the
// Schrodinger <-> Helmholtz transformation, and the Rayleigh-Ritz oracle.

#include "specsum/bessel.hpp"
#include "specsum/core.hpp"
#include "specsum/fractional_green.hpp"
#include "specsum/helmholtz.hpp"
#include "specsum/impurity1d.hpp"
#include "specsum/impurity2d.hpp"
#include "specsum/numeric.hpp"
#include "specsum/perturbative.hpp"
#include "specsum/rr_oracle.hpp"
