#pragma once

#include "qnoise/errors.hpp"
#include "qnoise/tolerances.hpp"
#include "qnoise/rng.hpp"
#include "qnoise/qstate.hpp"
#include "qnoise/noise.hpp"
#include "qnoise/grover.hpp"
#include "qnoise/average.hpp"
#include "qnoise/entanglement.hpp"
#include "qnoise/dist.hpp"
#include "qnoise/csv.hpp"
#include "qnoise/repro.hpp"
#include "qnoise/acceptance.hpp"
