#pragma once

// Umbrella header for the DynED stream-classification library.

#include "dyned/adwin.hpp"
#include "dyned/core.hpp"
#include "dyned/csv.hpp"
#include "dyned/datasets.hpp"
#include "dyned/diversity.hpp"
#include "dyned/drift.hpp"
#include "dyned/ensemble.hpp"
#include "dyned/evaluation.hpp"
#include "dyned/generators.hpp"
#include "dyned/hoeffding_tree.hpp"
#include "dyned/selection.hpp"
#include "dyned/stats.hpp"
