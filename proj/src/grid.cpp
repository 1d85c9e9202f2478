#include "hybridreg/grid.hpp"

#include "hybridreg/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace hybridreg {

PointCloud grid_downsample(const PointCloud& cloud, double cell) {
  if (!(cell > 0.0)) throw Error("grid_downsample: cell size must be positive");
  if (cloud.empty()) throw EmptyInputError("grid_downsample: empty cloud");

  using Key = std::array<std::int64_t, 3>;
  std::vector<std::pair<Key, std::size_t>> keyed;
  keyed.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    keyed.push_back({Key{static_cast<std::int64_t>(std::floor(p.x() / cell)),
                         static_cast<std::int64_t>(std::floor(p.y() / cell)),
                         static_cast<std::int64_t>(std::floor(p.z() / cell))},
                     i});
  }
  std::sort(keyed.begin(), keyed.end());

  PointCloud out;
  std::size_t begin = 0;
  while (begin < keyed.size()) {
    std::size_t end = begin;
    Point3 sum = Point3::Zero();
    while (end < keyed.size() && keyed[end].first == keyed[begin].first) {
      sum += cloud.points[keyed[end].second];
      ++end;
    }
    out.points.push_back(sum / static_cast<double>(end - begin));
    begin = end;
  }
  return out;
}

}  // namespace hybridreg
