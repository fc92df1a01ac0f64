#include "sshmt/labeling.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sshmt/metrics.hpp"

namespace sshmt {

std::vector<NodeId> LabelAssignment::labeled_cliques(const MergeTree& tree) const {
  std::vector<NodeId> out;
  for (NodeId id : tree.internal_nodes()) {
    if (y[id] != kUnlabeled) out.push_back(id);
  }
  return out;
}

namespace {

LabelAssignment leaf_fixed(const MergeTree& tree) {
  LabelAssignment a;
  a.y.assign(tree.size(), kUnlabeled);
  a.source.assign(tree.size(), LabelSource::None);
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (tree.is_leaf(id)) {
      a.y[id] = 1;
      a.source[id] = LabelSource::LeafFixed;
    }
  }
  return a;
}

std::vector<NodeId> voxel_leaves(const MergeTree& tree, const LabelMap& sp) {
  std::vector<NodeId> out(sp.size());
  for (std::size_t v = 0; v < sp.size(); ++v) out[v] = tree.leaf_of_label(sp[v]);
  return out;
}

}  // namespace

LabelAssignment labels_from_full_gt(const MergeTree& tree, const LabelMap& sp, const LabelMap& gt) {
  require_same_dims(sp, gt, "labels_from_full_gt");
  const auto leaf_of = voxel_leaves(tree, sp);

  using Histogram = std::map<std::uint32_t, std::uint64_t>;
  std::vector<Histogram> hist(tree.size());
  for (std::size_t v = 0; v < sp.size(); ++v) {
    if (gt[v] != 0) ++hist[leaf_of[v]][gt[v]];
  }

  LabelAssignment out = leaf_fixed(tree);
  for (NodeId id : tree.post_order()) {
    if (tree.is_leaf(id)) continue;
    const auto [c1, c2] = tree.children(id);
    ContingencyTable merged, split;
    Histogram& h = hist[id];
    for (const auto& [t, n] : hist[c1]) {
      merged.add(1, t, n);
      split.add(1, t, n);
      h[t] += n;
    }
    for (const auto& [t, n] : hist[c2]) {
      merged.add(1, t, n);
      split.add(2, t, n);
      h[t] += n;
    }
    out.source[id] = LabelSource::FullGt;
    if (merged.total() == 0) {
      out.y[id] = 1;
      continue;
    }
    out.y[id] = merged.scores().error <= split.scores().error ? 1 : 0;
  }
  return out;
}

std::vector<double> eligible_scores(const MergeTree& tree, const LabelMap& sp,
                                    std::span<const std::vector<std::size_t>> segments) {
  const auto leaf_of = voxel_leaves(tree, sp);
  const std::size_t k = segments.size();
  std::vector<std::size_t> size(tree.size(), 0);
  std::vector<std::size_t> seg_size(k, 0);
  // overlap[node * k + s] = |region(node) ∩ segment s|
  std::vector<std::size_t> overlap(tree.size() * k, 0);
  for (std::size_t v = 0; v < sp.size(); ++v) ++size[leaf_of[v]];
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<std::size_t> voxels = segments[s];
    std::sort(voxels.begin(), voxels.end());
    voxels.erase(std::unique(voxels.begin(), voxels.end()), voxels.end());
    seg_size[s] = voxels.size();
    for (std::size_t v : voxels) {
      if (v >= sp.size()) throw Error(Errc::InvalidArgument, "segment voxel outside the image");
      ++overlap[leaf_of[v] * k + s];
    }
  }
  std::vector<double> score(tree.size(), 0.0);
  for (NodeId id : tree.post_order()) {
    if (!tree.is_leaf(id)) {
      const auto [c1, c2] = tree.children(id);
      size[id] = size[c1] + size[c2];
      for (std::size_t s = 0; s < k; ++s) overlap[id * k + s] = overlap[c1 * k + s] + overlap[c2 * k + s];
    }
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t inter = overlap[id * k + s];
      const std::size_t uni = size[id] + seg_size[s] - inter;
      const double j = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
      score[id] = std::max(score[id], j);
    }
  }
  return score;
}

LabelAssignment labels_from_segments(const MergeTree& tree, const LabelMap& sp,
                                     std::span<const std::vector<std::size_t>> segments, double threshold) {
  if (segments.empty()) throw Error(Errc::EmptySegments, "no annotated segments");
  const std::vector<double> score = eligible_scores(tree, sp, segments);

  std::vector<char> eligible(tree.size());
  for (NodeId id = 0; id < tree.size(); ++id) eligible[id] = score[id] >= threshold;

  std::vector<NodeId> order(tree.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return score[a] != score[b] ? score[a] > score[b] : a > b;
  });

  LabelAssignment out = leaf_fixed(tree);
  for (NodeId id : order) {
    if (!eligible[id]) continue;
    out.selected.push_back(id);
    for (NodeId d : tree.subtree(id)) {
      eligible[d] = 0;
      out.y[d] = 1;
      out.source[d] = tree.is_leaf(d) ? LabelSource::LeafFixed : LabelSource::PerSegment;
    }
    for (NodeId a : tree.ancestors(id)) {
      eligible[a] = 0;
      out.y[a] = 0;
      out.source[a] = LabelSource::PerSegment;
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> segments_from_labels(const LabelMap& gt) {
  std::map<std::uint32_t, std::vector<std::size_t>> by_label;
  for (std::size_t v = 0; v < gt.size(); ++v) {
    if (gt[v] != 0) by_label[gt[v]].push_back(v);
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(by_label.size());
  for (auto& [label, voxels] : by_label) out.push_back(std::move(voxels));
  return out;
}

}  // namespace sshmt
