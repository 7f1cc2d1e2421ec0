#pragma once

// Umbrella header: topology reconstruction of linear dynamical networks from
// finite-horizon state measurements, via constrained Lyapunov equations.

#include "netrecon/demo.hpp"
#include "netrecon/dynsim.hpp"
#include "netrecon/errors.hpp"
#include "netrecon/gramian.hpp"
#include "netrecon/io.hpp"
#include "netrecon/lpsolve.hpp"
#include "netrecon/lyap.hpp"
#include "netrecon/netgraph.hpp"
#include "netrecon/reconstruct.hpp"
#include "netrecon/rng.hpp"
