#pragma once

// Umbrella header: quasi-steady-state frequency estimation for three-phase
// AC voltages from sampled waveforms.

#include "qssf/circulation.hpp"
#include "qssf/diffgeo.hpp"
#include "qssf/epitrochoid.hpp"
#include "qssf/frames.hpp"
#include "qssf/io.hpp"
#include "qssf/period.hpp"
#include "qssf/pll.hpp"
#include "qssf/qss.hpp"
#include "qssf/series.hpp"
#include "qssf/synth.hpp"
#include "qssf/vec3.hpp"
