#pragma once

#include "twistsense/spin_core.hpp"
#include "twistsense/protocols.hpp"
#include "twistsense/metrology.hpp"
#include "twistsense/bosonic_limit.hpp"
#include "twistsense/sweep_optimize.hpp"
#include "twistsense/io.hpp"
#include "twistsense/finite_difference.hpp"
