#pragma once

// Independent reference implementations used as test oracles. Each one is the
// slowest obvious computation of its quantity and shares no code with the
// library beyond the grid containers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "sshmt/features.hpp"
#include "sshmt/grid.hpp"
#include "sshmt/merge_tree.hpp"

namespace sshmt::oracle {

/// Random full binary tree: repeatedly joins two random current roots.
inline MergeTree random_tree(std::mt19937_64& rng, std::size_t n_leaves) {
  std::vector<NodeId> roots(n_leaves);
  for (std::size_t i = 0; i < n_leaves; ++i) roots[i] = static_cast<NodeId>(i);
  std::vector<std::pair<NodeId, NodeId>> merges;
  NodeId next = static_cast<NodeId>(n_leaves);
  while (roots.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    merges.emplace_back(roots[a], roots[b]);
    roots[std::min(a, b)] = next++;
    roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(std::max(a, b)));
  }
  return MergeTree::from_merges(n_leaves, merges);
}

/// Node sequence from a leaf up to the root, leaf first.
inline std::vector<NodeId> leaf_to_root(const MergeTree& tree, NodeId leaf) {
  std::vector<NodeId> path{leaf};
  while (tree.parent(path.back()) != kNoNode) path.push_back(tree.parent(path.back()));
  return path;
}

/// True when every value along every leaf-to-root node sequence never increases.
inline bool all_paths_non_increasing(const MergeTree& tree, std::span<const std::int8_t> y) {
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (!tree.is_leaf(id)) continue;
    const auto path = leaf_to_root(tree, id);
    for (std::size_t k = 1; k < path.size(); ++k) {
      if (y[path[k]] > y[path[k - 1]]) return false;
    }
  }
  return true;
}

/// Reference for the DNF relaxation: expands the disjunction over all j.
inline double dnf_reference(std::span<const double> f) {
  const std::size_t L = f.size();
  double none = 1.0;
  for (std::size_t j = 0; j <= L; ++j) {
    double g = 1.0;
    for (std::size_t k = 0; k < L; ++k) g *= k < j ? f[k] : 1.0 - f[k];
    none *= 1.0 - g;
  }
  return 1.0 - none;
}

/// Breadth-first flood fill: components as a map voxel -> component index.
inline std::vector<std::int64_t> flood_fill(const LabelMap& map) {
  const Dims& d = map.dims();
  std::vector<std::int64_t> comp(map.size(), -1);
  std::int64_t next = 0;
  for (std::size_t s = 0; s < map.size(); ++s) {
    if (map[s] == 0 || comp[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      const Coord c = coord_of(d, v);
      const std::array<std::array<int, 3>, 6> steps{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
      for (const auto& st : steps) {
        const long x = long(c.x) + st[0], y = long(c.y) + st[1], z = long(c.z) + st[2];
        if (x < 0 || y < 0 || z < 0 || x >= long(d.nx) || y >= long(d.ny) || z >= long(d.nz)) continue;
        const std::size_t n = map.index(std::uint32_t(x), std::uint32_t(y), std::uint32_t(z));
        if (comp[n] < 0 && map[n] == map[s]) {
          comp[n] = next;
          q.push(n);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// True when a and b induce the same partition of voxels (labels may differ).
template <class A, class B>
bool same_partition(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) return false;
  std::map<A, B> fwd;
  std::map<B, A> bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, fi] = fwd.emplace(a[i], b[i]);
    auto [g, gi] = bwd.emplace(b[i], a[i]);
    if (f->second != b[i] || g->second != a[i]) return false;
  }
  return true;
}

/// Adapted Rand error by explicit enumeration of ordered voxel pairs
/// (self pairs included), restricted to voxels with gt != 0 when asked.
inline double pairwise_are(const LabelMap& seg, const LabelMap& gt, bool ignore_zero_gt = true) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!ignore_zero_gt || gt[i] != 0) idx.push_back(i);
  }
  double both = 0, same_seg = 0, same_gt = 0;
  for (std::size_t i : idx) {
    for (std::size_t j : idx) {
      const bool s = seg[i] == seg[j], t = gt[i] == gt[j];
      both += s && t;
      same_seg += s;
      same_gt += t;
    }
  }
  if (same_seg == 0 || same_gt == 0) return (same_seg == 0 && same_gt == 0) ? 0.0 : 1.0;
  const double p = both / same_seg, r = both / same_gt;
  return 1.0 - 2.0 * p * r / (p + r);
}

/// Central finite-difference gradient of fn at x.
inline std::vector<double> finite_gradient(const std::function<double(std::span<const double>)>& fn,
                                           std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double up = fn(x);
    x[k] = x0 - h;
    const double down = fn(x);
    x[k] = x0;
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Five-point central difference of a scalar function; truncation O(h^4).
inline double derivative5(const std::function<double(double)>& fn, double x, double h) {
  return (fn(x - 2 * h) - 8 * fn(x - h) + 8 * fn(x + h) - fn(x + 2 * h)) / (12 * h);
}

inline double relative_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0, scale = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  return scale > 0 ? diff / scale : diff;
}

/// Random label map with labels drawn from 1..n_labels (0 included when asked).
inline LabelMap random_labels(std::mt19937_64& rng, Dims d, std::uint32_t n_labels, bool with_zero = false) {
  std::uniform_int_distribution<std::uint32_t> pick(with_zero ? 0 : 1, n_labels);
  LabelMap m(d);
  for (auto& v : m) v = pick(rng);
  return m;
}

inline GridImage random_image(std::mt19937_64& rng, Dims d) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  GridImage g(d);
  for (auto& v : g) v = u(rng);
  return g;
}

/// Features of one clique recomputed straight from voxel masks. Voxels are
/// visited in reverse scan order so accumulation order differs from the
/// library's.
inline FeatureVector brute_features(const MergeTree& tree, NodeId clique, const LabelMap& sp,
                                    const GridImage& conf, const GridImage* raw = nullptr) {
  const Dims& d = sp.dims();
  auto mask_of = [&](NodeId node) {
    std::set<std::uint32_t> labels;
    for (NodeId leaf : tree.leaves_under(node)) labels.insert(tree.node(leaf).leaf_label);
    std::vector<char> m(sp.size(), 0);
    for (std::size_t i = sp.size(); i-- > 0;) m[i] = labels.count(sp[i]) ? 1 : 0;
    return m;
  };
  auto count = [](const std::vector<char>& m) { return double(std::count(m.begin(), m.end(), 1)); };
  auto perimeter = [&](const std::vector<char>& m) {
    double faces = 0;
    for (std::size_t i = sp.size(); i-- > 0;) {
      if (!m[i]) continue;
      for_each_face_neighbor(d, i, [&](std::size_t n) { faces += m[n] ? 0 : 1; });
    }
    return faces;
  };
  auto mean_std = [](const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(var / double(v.size()))};
  };
  auto interior_mean = [&](const std::vector<char>& m) {
    std::vector<double> in, all;
    for (std::size_t i = sp.size(); i-- > 0;) {
      if (!m[i]) continue;
      all.push_back(conf[i]);
      bool inside = true;
      for_each_face_neighbor(d, i, [&](std::size_t n) { inside = inside && m[n]; });
      if (inside) in.push_back(conf[i]);
    }
    return mean_std(in.empty() ? all : in).first;
  };

  NodeId c1 = tree.children(clique)[0], c2 = tree.children(clique)[1];
  auto ms = mask_of(clique), m1 = mask_of(c1), m2 = mask_of(c2);
  if (count(m2) > count(m1) || (count(m2) == count(m1) && c2 < c1)) {
    std::swap(c1, c2);
    std::swap(m1, m2);
  }

  std::vector<double> shared_conf, shared_raw;
  double shared_faces = 0;
  for (std::size_t i = sp.size(); i-- > 0;) {
    if (!m1[i]) continue;
    for_each_face_neighbor(d, i, [&](std::size_t n) {
      if (!m2[n]) return;
      shared_faces += 1;
      shared_conf.push_back(conf[i]);
      shared_conf.push_back(conf[n]);
      if (raw) {
        shared_raw.push_back((*raw)[i]);
        shared_raw.push_back((*raw)[n]);
      }
    });
  }

  std::array<std::uint32_t, 3> lo{~0u, ~0u, ~0u}, hi{0, 0, 0};
  std::vector<double> region_conf;
  for (std::size_t i = sp.size(); i-- > 0;) {
    if (!ms[i]) continue;
    const Coord c = coord_of(d, i);
    const std::array<std::uint32_t, 3> p{c.x, c.y, c.z};
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
    region_conf.push_back(conf[i]);
  }

  FeatureVector f{};
  f[0] = 1;
  f[1] = std::log(count(ms));
  f[2] = std::log(count(m1));
  f[3] = std::log(count(m2));
  f[4] = count(m2) / count(m1);
  f[5] = perimeter(ms);
  f[6] = shared_faces;
  const double pmin = std::min(perimeter(m1), perimeter(m2));
  f[7] = pmin > 0 ? shared_faces / pmin : 0;
  const double ex = hi[0] - lo[0] + 1.0, ey = hi[1] - lo[1] + 1.0, ez = hi[2] - lo[2] + 1.0;
  const double emax = std::max({ex, ey, ez});
  f[8] = ex / emax;
  f[9] = ey / emax;
  f[10] = d.nz == 1 ? 1.0 : ez / emax;
  if (shared_conf.empty()) {
    f[11] = 1;
    f[12] = 0;
    f[13] = 1;
    f[14] = 1;
  } else {
    const auto [mean, sd] = mean_std(shared_conf);
    f[11] = mean;
    f[12] = sd;
    f[13] = *std::min_element(shared_conf.begin(), shared_conf.end());
    f[14] = *std::max_element(shared_conf.begin(), shared_conf.end());
  }
  f[15] = interior_mean(m1);
  f[16] = interior_mean(m2);
  f[17] = std::abs(f[15] - f[16]);
  const auto [rmean, rsd] = mean_std(region_conf);
  f[18] = rmean;
  f[19] = rsd;
  f[20] = shared_raw.empty() ? 0.0 : mean_std(shared_raw).first;
  return f;
}

}  // namespace sshmt::oracle
