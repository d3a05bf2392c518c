#pragma once

// Umbrella header: convex-roof coherence measures, superadditivity and
// additivity verification, seeded samplers, and the sweep harness.

#include "roofcoh/digest.hpp"
#include "roofcoh/functionals.hpp"
#include "roofcoh/json_io.hpp"
#include "roofcoh/marginals.hpp"
#include "roofcoh/parallel.hpp"
#include "roofcoh/report.hpp"
#include "roofcoh/rng.hpp"
#include "roofcoh/roof.hpp"
#include "roofcoh/sample.hpp"
#include "roofcoh/shape.hpp"
#include "roofcoh/states.hpp"
#include "roofcoh/sweep.hpp"
#include "roofcoh/verify.hpp"
