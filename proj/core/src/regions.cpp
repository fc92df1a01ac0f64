#include "sshmt/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sshmt {

void RunningStats::add(double v) noexcept {
  if (count == 0) {
    min = max = v;
  } else {
    min = std::min(min, v);
    max = std::max(max, v);
  }
  ++count;
  sum += v;
  sum_sq += v * v;
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  count += other.count;
  sum += other.sum;
  sum_sq += other.sum_sq;
  min = std::min(min, other.min);
  max = std::max(max, other.max);
}

double RunningStats::stddev() const noexcept {
  if (count == 0) return 0.0;
  const double m = mean();
  const double var = sum_sq / static_cast<double>(count) - m * m;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

LabelMap connected_components(const LabelMap& map) {
  constexpr auto kUnvisited = std::numeric_limits<std::uint32_t>::max();
  const Dims& d = map.dims();
  std::vector<std::uint32_t> out(map.size(), kUnvisited);
  std::vector<std::size_t> stack;
  std::uint32_t next = 0;
  for (std::size_t seed = 0; seed < map.size(); ++seed) {
    if (out[seed] != kUnvisited) continue;
    if (map[seed] == 0) {
      out[seed] = 0;
      continue;
    }
    const std::uint32_t label = ++next;
    const std::uint32_t source = map[seed];
    out[seed] = label;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for_each_face_neighbor(d, v, [&](std::size_t n) {
        if (out[n] == kUnvisited && map[n] == source) {
          out[n] = label;
          stack.push_back(n);
        }
      });
    }
  }
  return LabelMap(d, std::move(out));
}

const RegionBoundary* RegionAdjacency::find(std::uint32_t a, std::uint32_t b) const {
  const auto it = pairs_.find({std::min(a, b), std::max(a, b)});
  return it == pairs_.end() ? nullptr : &it->second;
}

RegionBoundary& RegionAdjacency::at_or_insert(std::uint32_t a, std::uint32_t b) {
  return pairs_[{std::min(a, b), std::max(a, b)}];
}

RegionAdjacency region_adjacency(const LabelMap& map, const GridImage& conf) {
  require_same_dims(map, conf, "region_adjacency");
  if (std::find(map.begin(), map.end(), 0u) != map.end()) {
    throw Error(Errc::InvalidArgument, "superpixel map contains label 0");
  }
  RegionAdjacency adj;
  for_each_face_pair(map.dims(), [&](std::size_t a, std::size_t b) {
    const std::uint32_t la = map[a], lb = map[b];
    if (la == lb) return;
    auto& boundary = adj.at_or_insert(la, lb);
    boundary.faces.push_back(la < lb ? std::pair{a, b} : std::pair{b, a});
    boundary.stats.add(conf[a]);
    boundary.stats.add(conf[b]);
  });
  return adj;
}

std::vector<std::uint32_t> distinct_labels(const LabelMap& map) {
  std::vector<std::uint32_t> labels(map.begin(), map.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

}  // namespace sshmt
