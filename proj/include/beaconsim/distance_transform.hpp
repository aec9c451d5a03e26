#pragma once

#include "beaconsim/image.hpp"

namespace beaconsim {

/// Exact Euclidean distance to the nearest set pixel, via the separable
/// two-pass lower-envelope method on squared distances. An empty map yields
/// max_distance (the image diagonal) everywhere.
DistanceMap distance_transform(const BinaryMap& m);

}  // namespace beaconsim
