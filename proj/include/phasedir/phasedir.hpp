// phasedir.hpp: umbrella header

#pragma once

#include "phasedir/analytics.hpp"
#include "phasedir/config.hpp"
#include "phasedir/couplings.hpp"
#include "phasedir/csv.hpp"
#include "phasedir/dynamics.hpp"
#include "phasedir/errors.hpp"
#include "phasedir/model.hpp"
#include "phasedir/runner.hpp"
#include "phasedir/verify.hpp"
