#pragma once

#include "ginfo/cvm_io.hpp"
#include "ginfo/error.hpp"
#include "ginfo/fisher_rao.hpp"
#include "ginfo/gaussian_state.hpp"
#include "ginfo/nc_oscillator.hpp"
#include "ginfo/nc_toymodel.hpp"
#include "ginfo/numeric_policy.hpp"
#include "ginfo/random_matrices.hpp"
#include "ginfo/selftest.hpp"
#include "ginfo/symplectic_core.hpp"
