#pragma once

// Umbrella header.

#include "somlc/cwm.hpp"
#include "somlc/error.hpp"
#include "somlc/fuzzy.hpp"
#include "somlc/lang.hpp"
#include "somlc/metrics.hpp"
#include "somlc/parser.hpp"
#include "somlc/prob.hpp"
#include "somlc/rng.hpp"
#include "somlc/som.hpp"
#include "somlc/space.hpp"
#include "somlc/stimulus.hpp"
#include "somlc/trace.hpp"
#include "somlc/vec.hpp"
