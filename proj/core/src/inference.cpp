#include "sshmt/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sshmt {

std::vector<double> node_potentials(const MergeTree& tree, std::span<const double> merge_prob) {
  if (merge_prob.size() != tree.size()) {
    throw Error(Errc::MissingPrediction, "expected one prediction per node");
  }
  auto prob = [&](NodeId id) {
    if (tree.is_leaf(id)) return 1.0;
    const double p = merge_prob[id];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(Errc::MissingPrediction, "no valid prediction for clique " + std::to_string(id));
    }
    return p;
  };
  std::vector<double> u(tree.size());
  for (NodeId id = 0; id < tree.size(); ++id) {
    const NodeId p = tree.parent(id);
    u[id] = prob(id) * (p == kNoNode ? 1.0 : 1.0 - prob(p));
  }
  return u;
}

NodeLabels greedy_label(const MergeTree& tree, std::span<const double> potentials) {
  if (potentials.size() != tree.size()) throw Error(Errc::InvalidArgument, "one potential per node");
  if (std::any_of(potentials.begin(), potentials.end(), [](double u) { return std::isnan(u); })) {
    throw Error(Errc::InvalidArgument, "NaN potential");
  }
  std::vector<NodeId> order(tree.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return potentials[a] > potentials[b]; });

  NodeLabels z(tree.size(), kUnlabeled);
  for (NodeId id : order) {
    if (z[id] != kUnlabeled) continue;
    for (NodeId d : tree.subtree(id)) z[d] = 0;
    z[id] = 1;
    for (NodeId a : tree.ancestors(id)) z[a] = 0;
  }
  return z;
}

LabelMap segmentation_from_z(const MergeTree& tree, std::span<const std::int8_t> z, const LabelMap& sp) {
  if (!is_region_consistent(tree, z)) {
    throw Error(Errc::InconsistentZ, "z violates the region consistency constraint");
  }
  std::vector<std::uint32_t> segment_of(tree.size(), 0);
  std::uint32_t next = 0;
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (z[id] == 1) segment_of[id] = ++next;
  }
  // Top-down: a node inherits its selected ancestor's segment.
  const auto& order = tree.post_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId p = tree.parent(*it);
    if (segment_of[*it] == 0 && p != kNoNode) segment_of[*it] = segment_of[p];
  }
  std::vector<std::uint32_t> out(sp.size());
  for (std::size_t v = 0; v < sp.size(); ++v) out[v] = segment_of[tree.leaf_of_label(sp[v])];
  return LabelMap(sp.dims(), std::move(out));
}

}  // namespace sshmt
