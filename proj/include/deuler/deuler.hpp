#ifndef DEULER_DEULER_HPP
#define DEULER_DEULER_HPP

#include "deuler/params.hpp"
#include "deuler/thermo.hpp"
#include "deuler/grid.hpp"
#include "deuler/spectral_ops.hpp"
#include "deuler/hodge.hpp"
#include "deuler/state.hpp"
#include "deuler/nonlinear_terms.hpp"
#include "deuler/green.hpp"
#include "deuler/propagate.hpp"
#include "deuler/whole_space.hpp"
#include "deuler/phi_functions.hpp"
#include "deuler/initial_data.hpp"
#include "deuler/diagnostics.hpp"
#include "deuler/solver.hpp"
#include "deuler/decay_fit.hpp"
#include "deuler/checks.hpp"

#endif // DEULER_DEULER_HPP
