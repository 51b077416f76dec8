#pragma once

// Umbrella header: body-surface radio link and RF-exposure simulation.

#include "config.hpp"
#include "csv_io.hpp"
#include "exposure.hpp"
#include "geometry.hpp"
#include "numfmt.hpp"
#include "propagation.hpp"
#include "protocol.hpp"
#include "runner.hpp"
#include "sweep.hpp"
