#pragma once

#include <string_view>

#include "netreach/model.hpp"

namespace netreach::fixtures {

/// Four-node star network: three scalar followers, one scalar leader.
std::string_view star_json();
/// Four-node network whose follower matrix is Circ(0.2, 1, 0.5).
std::string_view circulant_json();

NetworkSpec star();
NetworkSpec circulant();

}  // namespace netreach::fixtures
