#pragma once

#include "dkc/algebra_check.hpp"
#include "dkc/coherent.hpp"
#include "dkc/errors.hpp"
#include "dkc/laguerre_function.hpp"
#include "dkc/quadrature.hpp"
#include "dkc/quantum_setup.hpp"
#include "dkc/radial_states.hpp"
#include "dkc/report.hpp"
#include "dkc/special_functions.hpp"
#include "dkc/spectrum.hpp"
#include "dkc/verify.hpp"
