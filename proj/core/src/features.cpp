#include "sshmt/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "sshmt/regions.hpp"

namespace sshmt {

struct FeatureExtractor::NodeStats {
  std::size_t size = 0;
  RunningStats conf;                // over the region
  std::array<std::uint32_t, 3> lo{std::numeric_limits<std::uint32_t>::max(),
                                  std::numeric_limits<std::uint32_t>::max(),
                                  std::numeric_limits<std::uint32_t>::max()};
  std::array<std::uint32_t, 3> hi{0, 0, 0};
  double perimeter = 0.0;           // faces to other regions
  RunningStats shared_conf;         // boundary between the two children
  RunningStats shared_raw;
  std::size_t shared_faces = 0;
  double interior_sum = 0.0;        // voxels whose neighbors all lie inside
  std::size_t interior_count = 0;

  double interior_mean() const {
    return interior_count ? interior_sum / static_cast<double>(interior_count) : conf.mean();
  }
};

FeatureExtractor::FeatureExtractor(const FeatureExtractor&) = default;
FeatureExtractor::FeatureExtractor(FeatureExtractor&&) noexcept = default;
FeatureExtractor& FeatureExtractor::operator=(const FeatureExtractor&) = default;
FeatureExtractor& FeatureExtractor::operator=(FeatureExtractor&&) noexcept = default;
FeatureExtractor::~FeatureExtractor() = default;

FeatureExtractor::FeatureExtractor(const MergeTree& tree, const LabelMap& sp, const GridImage& conf,
                                   const GridImage* raw)
    : is_2d_(sp.dims().is_2d()), has_raw_(raw != nullptr), stats_(tree.size()) {
  require_same_dims(sp, conf, "extract_features");
  if (raw) require_same_dims(sp, *raw, "extract_features (raw)");
  const Dims& d = sp.dims();

  children_.resize(tree.size());
  std::vector<std::uint32_t> depth(tree.size(), 0);
  const auto& order = tree.post_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId p = tree.parent(*it);
    depth[*it] = p == kNoNode ? 0 : depth[p] + 1;
  }
  for (NodeId id = 0; id < tree.size(); ++id) children_[id] = tree.children(id);

  std::unordered_map<std::uint64_t, NodeId> lca_cache;
  auto lca = [&](NodeId a, NodeId b) {
    const std::uint64_t key = (std::uint64_t{std::min(a, b)} << 32) | std::max(a, b);
    if (auto it = lca_cache.find(key); it != lca_cache.end()) return it->second;
    NodeId x = a, y = b;
    while (depth[x] > depth[y]) x = tree.parent(x);
    while (depth[y] > depth[x]) y = tree.parent(y);
    while (x != y) {
      x = tree.parent(x);
      y = tree.parent(y);
    }
    lca_cache.emplace(key, x);
    return x;
  };
  auto leaf_at = [&](std::size_t voxel) { return tree.leaf_of_label(sp[voxel]); };

  // Leaf-level aggregates and per-voxel interior contribution.
  for (std::size_t v = 0; v < sp.size(); ++v) {
    const NodeId leaf = leaf_at(v);
    NodeStats& s = stats_[leaf];
    const Coord c = coord_of(d, v);
    const std::array<std::uint32_t, 3> pos{c.x, c.y, c.z};
    ++s.size;
    s.conf.add(conf[v]);
    for (int k = 0; k < 3; ++k) {
      s.lo[k] = std::min(s.lo[k], pos[k]);
      s.hi[k] = std::max(s.hi[k], pos[k]);
    }
    // The voxel is interior for every ancestor at or above the highest LCA
    // with a foreign neighbor.
    NodeId highest = leaf;
    for_each_face_neighbor(d, v, [&](std::size_t nb) {
      const NodeId other = leaf_at(nb);
      if (other == leaf) return;
      s.perimeter += 1.0;
      const NodeId m = lca(leaf, other);
      if (depth[m] < depth[highest]) highest = m;
    });
    stats_[highest].interior_sum += conf[v];
    ++stats_[highest].interior_count;
  }

  for_each_face_pair(d, [&](std::size_t a, std::size_t b) {
    const NodeId la = leaf_at(a), lb = leaf_at(b);
    if (la == lb) return;
    NodeStats& m = stats_[lca(la, lb)];
    ++m.shared_faces;
    m.shared_conf.add(conf[a]);
    m.shared_conf.add(conf[b]);
    if (raw) {
      m.shared_raw.add((*raw)[a]);
      m.shared_raw.add((*raw)[b]);
    }
  });

  // Bottom-up: region aggregates are sums over children; interior
  // contributions accumulate from the subtree.
  for (NodeId id : order) {
    if (tree.is_leaf(id)) continue;
    NodeStats& s = stats_[id];
    for (NodeId c : children_[id]) {
      const NodeStats& cs = stats_[c];
      s.size += cs.size;
      s.conf.merge(cs.conf);
      for (int k = 0; k < 3; ++k) {
        s.lo[k] = std::min(s.lo[k], cs.lo[k]);
        s.hi[k] = std::max(s.hi[k], cs.hi[k]);
      }
      s.perimeter += cs.perimeter;
      s.interior_sum += cs.interior_sum;
      s.interior_count += cs.interior_count;
    }
    s.perimeter -= 2.0 * static_cast<double>(s.shared_faces);
  }
}

FeatureVector FeatureExtractor::extract(NodeId clique) const {
  if (clique >= stats_.size()) throw Error(Errc::InvalidArgument, "unknown clique");
  if (children_[clique][0] == kNoNode) {
    throw Error(Errc::LeafClique, "clique " + std::to_string(clique) + " is a leaf");
  }
  NodeId c1 = children_[clique][0], c2 = children_[clique][1];
  if (stats_[c2].size > stats_[c1].size || (stats_[c2].size == stats_[c1].size && c2 < c1)) {
    std::swap(c1, c2);
  }
  const NodeStats& s = stats_[clique];
  const NodeStats& a = stats_[c1];
  const NodeStats& b = stats_[c2];

  FeatureVector f{};
  f[0] = 1.0;
  f[1] = std::log(static_cast<double>(s.size));
  f[2] = std::log(static_cast<double>(a.size));
  f[3] = std::log(static_cast<double>(b.size));
  f[4] = static_cast<double>(b.size) / static_cast<double>(a.size);
  f[5] = s.perimeter;
  f[6] = static_cast<double>(s.shared_faces);
  const double min_perimeter = std::min(a.perimeter, b.perimeter);
  f[7] = min_perimeter > 0.0 ? f[6] / min_perimeter : 0.0;
  std::array<double, 3> extent{};
  for (int k = 0; k < 3; ++k) extent[k] = static_cast<double>(s.hi[k] - s.lo[k] + 1);
  const double max_extent = std::max({extent[0], extent[1], extent[2]});
  f[8] = extent[0] / max_extent;
  f[9] = extent[1] / max_extent;
  f[10] = is_2d_ ? 1.0 : extent[2] / max_extent;
  if (s.shared_faces > 0) {
    f[11] = s.shared_conf.mean();
    f[12] = s.shared_conf.stddev();
    f[13] = s.shared_conf.min;
    f[14] = s.shared_conf.max;
  } else {
    // Children that never touch (chained components): treat as fully separated.
    f[11] = 1.0;
    f[12] = 0.0;
    f[13] = 1.0;
    f[14] = 1.0;
  }
  f[15] = a.interior_mean();
  f[16] = b.interior_mean();
  f[17] = std::abs(f[15] - f[16]);
  f[18] = s.conf.mean();
  f[19] = s.conf.stddev();
  f[20] = has_raw_ && s.shared_faces > 0 ? s.shared_raw.mean() : 0.0;
  return f;
}

std::vector<FeatureVector> FeatureExtractor::extract_all() const {
  std::vector<FeatureVector> rows;
  for (NodeId id = 0; id < children_.size(); ++id) {
    if (children_[id][0] != kNoNode) rows.push_back(extract(id));
  }
  return rows;
}

FeatureVector extract_features(const MergeTree& tree, NodeId clique, const LabelMap& sp,
                               const GridImage& conf, const GridImage* raw) {
  if (clique < tree.size() && tree.is_leaf(clique)) {
    throw Error(Errc::LeafClique, "clique " + std::to_string(clique) + " is a leaf");
  }
  return FeatureExtractor(tree, sp, conf, raw).extract(clique);
}

Standardizer::Standardizer() : means_(kFeatureDim, 0.0), stds_(kFeatureDim, 1.0) {}

Standardizer::Standardizer(std::vector<double> means, std::vector<double> stds)
    : means_(std::move(means)), stds_(std::move(stds)) {
  if (means_.size() != kFeatureDim || stds_.size() != kFeatureDim) {
    throw Error(Errc::DimMismatch, "standardizer needs " + std::to_string(kFeatureDim) + " components");
  }
  for (double s : stds_) {
    if (!(s >= kMinStd)) throw Error(Errc::InvalidArgument, "standardizer std below minimum");
  }
}

Standardizer Standardizer::fit(std::span<const FeatureVector> rows) {
  if (rows.empty()) throw Error(Errc::EmptyInput, "cannot fit a standardizer on no rows");
  std::vector<double> means(kFeatureDim, 0.0), stds(kFeatureDim, 1.0);
  const auto n = static_cast<double>(rows.size());
  for (std::size_t k = 1; k < kFeatureDim; ++k) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[k];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[k] - mean) * (r[k] - mean);
    const double sd = std::sqrt(ss / n);
    means[k] = mean;
    stds[k] = sd >= kMinStd ? sd : 1.0;
  }
  return Standardizer(std::move(means), std::move(stds));
}

FeatureVector Standardizer::apply(const FeatureVector& x) const {
  FeatureVector z = x;
  for (std::size_t k = 1; k < kFeatureDim; ++k) z[k] = (x[k] - means_[k]) / stds_[k];
  return z;
}

FeatureVector Standardizer::invert(const FeatureVector& z) const {
  FeatureVector x = z;
  for (std::size_t k = 1; k < kFeatureDim; ++k) x[k] = z[k] * stds_[k] + means_[k];
  return x;
}

}  // namespace sshmt
