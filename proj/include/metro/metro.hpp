#pragma once

// Fisher-information toolkit for estimation problems where the sample
// space measure or the measurement itself depends on the parameter.

#include "metro/cli_support.hpp"
#include "metro/common.hpp"
#include "metro/family.hpp"
#include "metro/fisher.hpp"
#include "metro/jaynes_cummings.hpp"
#include "metro/measure.hpp"
#include "metro/montecarlo.hpp"
#include "metro/oscillator.hpp"
#include "metro/philox.hpp"
#include "metro/qbounds.hpp"
#include "metro/quadrature.hpp"
#include "metro/states.hpp"
#include "metro/sweep.hpp"
