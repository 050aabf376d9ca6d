#ifndef GLRT_GLRT_HPP
#define GLRT_GLRT_HPP

#include "glrt/analytic.hpp"
#include "glrt/complex_gamma.hpp"
#include "glrt/detectors.hpp"
#include "glrt/distributions.hpp"
#include "glrt/errors.hpp"
#include "glrt/foxh.hpp"
#include "glrt/hypergeometric.hpp"
#include "glrt/montecarlo.hpp"
#include "glrt/quadrature.hpp"
#include "glrt/rng.hpp"
#include "glrt/stats.hpp"

#endif
