#include "sshmt/watershed.hpp"

#include <cmath>
#include <queue>
#include <tuple>

namespace sshmt {

LabelMap watershed(const GridImage& conf) {
  const Dims& d = conf.dims();
  const std::size_t n = conf.size();
  for (float v : conf) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "watershed input must be finite");
  }

  // Plateau components (equal value, face connected) and whether each is a minimum.
  constexpr std::uint32_t kNone = 0;
  std::vector<std::uint32_t> plateau(n, kNone);
  std::vector<bool> is_minimum{false};
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (plateau[seed] != kNone) continue;
    const auto id = static_cast<std::uint32_t>(is_minimum.size());
    const float value = conf[seed];
    bool minimum = true;
    plateau[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for_each_face_neighbor(d, v, [&](std::size_t nb) {
        if (conf[nb] < value) {
          minimum = false;
        } else if (conf[nb] == value && plateau[nb] == kNone) {
          plateau[nb] = id;
          stack.push_back(nb);
        }
      });
    }
    is_minimum.push_back(minimum);
  }

  std::vector<std::uint32_t> label(n, 0);
  std::vector<std::uint32_t> basin_of_plateau(is_minimum.size(), 0);
  std::uint32_t basins = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t p = plateau[i];
    if (!is_minimum[p]) continue;
    if (basin_of_plateau[p] == 0) basin_of_plateau[p] = ++basins;
    label[i] = basin_of_plateau[p];
  }

  // (value, insertion order, voxel); min-heap.
  using Entry = std::tuple<float, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::uint64_t order = 0;
  auto flood_from = [&](std::size_t v) {
    for_each_face_neighbor(d, v, [&](std::size_t nb) {
      if (label[nb] == 0) {
        label[nb] = label[v];
        queue.emplace(conf[nb], order++, nb);
      }
    });
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != 0 && is_minimum[plateau[i]]) flood_from(i);
  }
  while (!queue.empty()) {
    const std::size_t v = std::get<2>(queue.top());
    queue.pop();
    flood_from(v);
  }
  return LabelMap(d, std::move(label));
}

}  // namespace sshmt
