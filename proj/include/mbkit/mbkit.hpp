#pragma once

#include "mbkit/errors.hpp"
#include "mbkit/quadrature.hpp"
#include "mbkit/complex_gamma.hpp"
#include "mbkit/mb_quadrature.hpp"
#include "mbkit/special_oracles.hpp"
#include "mbkit/delta_pullback.hpp"
#include "mbkit/identity_suite.hpp"
#include "mbkit/report.hpp"
#include "mbkit/cli.hpp"
