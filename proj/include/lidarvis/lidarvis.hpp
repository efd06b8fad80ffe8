// Copyright 2026 The lidarvis Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "lidarvis/augment.hpp"
#include "lidarvis/bev.hpp"
#include "lidarvis/config.hpp"
#include "lidarvis/grid.hpp"
#include "lidarvis/occupancy.hpp"
#include "lidarvis/parallel.hpp"
#include "lidarvis/sweep.hpp"
#include "lidarvis/synthetic.hpp"
#include "lidarvis/traversal.hpp"
#include "lidarvis/visibility.hpp"

namespace lidarvis {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace lidarvis
