#pragma once

#include "hybridreg/types.hpp"

namespace hybridreg {

// One point per occupied voxel of side `cell`, at the centroid of the voxel's members.
// Voxels are keyed by floor(coord / cell) and emitted in lexicographic key order.
// Normals are not carried over. Throws EmptyInputError on an empty cloud and
// hybridreg::Error on a non-positive cell.
PointCloud grid_downsample(const PointCloud& cloud, double cell);

}  // namespace hybridreg
