#pragma once

#include "edgecolor/coloring.hpp"
#include "edgecolor/experiment.hpp"
#include "edgecolor/fractional.hpp"
#include "edgecolor/generators.hpp"
#include "edgecolor/graph.hpp"
#include "edgecolor/instance_io.hpp"
#include "edgecolor/lower_bound.hpp"
#include "edgecolor/lp.hpp"
#include "edgecolor/phased.hpp"
#include "edgecolor/rng.hpp"
#include "edgecolor/rounding.hpp"
