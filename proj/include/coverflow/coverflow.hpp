#pragma once

#include "coverflow/chamanara.hpp"
#include "coverflow/error.hpp"
#include "coverflow/free_group.hpp"
#include "coverflow/geodesic.hpp"
#include "coverflow/golden.hpp"
#include "coverflow/group.hpp"
#include "coverflow/interval.hpp"
#include "coverflow/io.hpp"
#include "coverflow/ladder.hpp"
#include "coverflow/monodromy.hpp"
#include "coverflow/odometer.hpp"
#include "coverflow/permutation.hpp"
#include "coverflow/rng.hpp"

namespace coverflow {
inline constexpr const char* kToolVersion = "coverflow 0.1.0";
}
