#pragma once

#include "measure.hpp"
#include "spectral.hpp"
#include "geometry.hpp"
#include "trig.hpp"
#include "discrete.hpp"
#include "recovery.hpp"
#include "report.hpp"
#include "experiments.hpp"
#include "config.hpp"
#include "acceptance.hpp"
