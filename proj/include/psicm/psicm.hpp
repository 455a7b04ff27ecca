#ifndef PSICM_PSICM_HPP
#define PSICM_PSICM_HPP

#include "psicm/bernoulli.hpp"
#include "psicm/bernoulli_series.hpp"
#include "psicm/deriv_algebra.hpp"
#include "psicm/errors.hpp"
#include "psicm/exact_rational.hpp"
#include "psicm/kernel.hpp"
#include "psicm/polygamma.hpp"
#include "psicm/quadrature.hpp"

#define PSICM_VERSION "0.1.0"

#endif
