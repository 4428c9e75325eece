#pragma once

// Umbrella header.

#include "schrod/constants.hpp"
#include "schrod/expr.hpp"
#include "schrod/fft.hpp"
#include "schrod/fields.hpp"
#include "schrod/gauge.hpp"
#include "schrod/hj.hpp"
#include "schrod/io.hpp"
#include "schrod/parallel.hpp"
#include "schrod/solver.hpp"
#include "schrod/spacetime.hpp"
#include "schrod/waveforms.hpp"
