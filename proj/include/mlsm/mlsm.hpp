#pragma once

// Convenience umbrella for the whole library except the CLI layer (which
// pulls in a third-party argument parser).

#include "mlsm/check.hpp"
#include "mlsm/core.hpp"
#include "mlsm/digraph.hpp"
#include "mlsm/dispatch.hpp"
#include "mlsm/experiment.hpp"
#include "mlsm/fixtures.hpp"
#include "mlsm/reduce.hpp"
#include "mlsm/smg.hpp"
#include "mlsm/solve.hpp"
#include "mlsm/uniform.hpp"
