#pragma once

// Umbrella header: the full pipeline from lexicon loading to sweep results.

#include "emoarcs/arcs.hpp"
#include "emoarcs/core.hpp"
#include "emoarcs/csv.hpp"
#include "emoarcs/eval.hpp"
#include "emoarcs/lexicon.hpp"
#include "emoarcs/manifest.hpp"
#include "emoarcs/rng.hpp"
#include "emoarcs/simulate.hpp"
#include "emoarcs/svg.hpp"
#include "emoarcs/sweep.hpp"
#include "emoarcs/text.hpp"
