#pragma once

// Umbrella header: complete unitary invariants of subspace configurations,
// local geometric tensors on the Grassmannian, and their reconnection via
// geodesics, holonomy, and the discrete gauge graph.

#include "grassmann/config_json.hpp"
#include "grassmann/equivalence.hpp"
#include "grassmann/gauge_graph.hpp"
#include "grassmann/geodesics.hpp"
#include "grassmann/holonomy.hpp"
#include "grassmann/local_tensors.hpp"
#include "grassmann/pair.hpp"
#include "grassmann/subspace.hpp"
#include "grassmann/triple.hpp"
#include "grassmann/types.hpp"
