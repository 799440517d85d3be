#ifndef NOONSIM_NOONSIM_HPP
#define NOONSIM_NOONSIM_HPP

#include "noonsim/adiabaticity.hpp"
#include "noonsim/basis.hpp"
#include "noonsim/config.hpp"
#include "noonsim/darkstate.hpp"
#include "noonsim/errors.hpp"
#include "noonsim/hamiltonian.hpp"
#include "noonsim/integrator.hpp"
#include "noonsim/io.hpp"
#include "noonsim/measurement.hpp"
#include "noonsim/occupation.hpp"
#include "noonsim/oracles.hpp"
#include "noonsim/propagator.hpp"
#include "noonsim/pulse.hpp"
#include "noonsim/run.hpp"
#include "noonsim/sparse.hpp"
#include "noonsim/state.hpp"
#include "noonsim/sweep.hpp"
#include "noonsim/version.hpp"

#endif
