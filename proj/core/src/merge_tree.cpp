#include "sshmt/merge_tree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "sshmt/regions.hpp"

namespace sshmt {

MergeTree::MergeTree(std::vector<MergeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(Errc::EmptyInput, "merge tree has no nodes");
  const auto count = static_cast<NodeId>(nodes_.size());
  std::uint32_t max_label = 0;
  for (NodeId id = 0; id < count; ++id) {
    const MergeNode& n = nodes_[id];
    if (n.parent == kNoNode) {
      if (root_ != kNoNode) throw Error(Errc::Format, "merge tree has several roots");
      root_ = id;
    } else if (n.parent >= count) {
      throw Error(Errc::Format, "node " + std::to_string(id) + " has an invalid parent");
    }
    if (n.is_leaf()) {
      if (n.children[1] != kNoNode) throw Error(Errc::Format, "node with a single child");
      if (n.leaf_label == 0) throw Error(Errc::Format, "leaf without a superpixel label");
      ++n_leaves_;
      max_label = std::max(max_label, n.leaf_label);
    } else {
      internal_.push_back(id);
      for (NodeId c : n.children) {
        if (c >= count || nodes_[c].parent != id) {
          throw Error(Errc::Format, "node " + std::to_string(id) + " has an invalid child");
        }
      }
      if (n.children[0] == n.children[1]) throw Error(Errc::Format, "duplicate child");
    }
  }
  if (root_ == kNoNode) throw Error(Errc::Format, "merge tree has no root");
  if (nodes_.size() != 2 * n_leaves_ - 1) throw Error(Errc::Format, "merge tree is not full binary");

  label_to_leaf_.assign(std::size_t{max_label} + 1, kNoNode);
  for (NodeId id = 0; id < count; ++id) {
    if (!nodes_[id].is_leaf()) continue;
    auto& slot = label_to_leaf_[nodes_[id].leaf_label];
    if (slot != kNoNode) throw Error(Errc::Format, "duplicate leaf label");
    slot = id;
  }

  // Iterative post-order from the root; also proves every node is reachable.
  post_order_.reserve(nodes_.size());
  std::vector<std::pair<NodeId, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (expanded || nodes_[id].is_leaf()) {
      post_order_.push_back(id);
      continue;
    }
    stack.emplace_back(id, true);
    stack.emplace_back(nodes_[id].children[1], false);
    stack.emplace_back(nodes_[id].children[0], false);
  }
  if (post_order_.size() != nodes_.size()) throw Error(Errc::Format, "merge tree is disconnected");
}

MergeTree MergeTree::from_merges(std::size_t n_leaves, std::span<const std::pair<NodeId, NodeId>> merges) {
  std::vector<MergeNode> nodes(n_leaves);
  for (std::size_t i = 0; i < n_leaves; ++i) nodes[i].leaf_label = static_cast<std::uint32_t>(i + 1);
  for (const auto& [a, b] : merges) {
    const auto id = static_cast<NodeId>(nodes.size());
    if (a >= id || b >= id || nodes[a].parent != kNoNode || nodes[b].parent != kNoNode) {
      throw Error(Errc::InvalidArgument, "merge of unavailable nodes");
    }
    MergeNode m;
    m.children = {a, b};
    nodes[a].parent = nodes[b].parent = id;
    nodes.push_back(m);
  }
  return MergeTree(std::move(nodes));
}

std::vector<NodeId> MergeTree::ancestors(NodeId id) const {
  std::vector<NodeId> out;
  for (NodeId p = parent(id); p != kNoNode; p = nodes_[p].parent) out.push_back(p);
  return out;
}

std::vector<NodeId> MergeTree::subtree(NodeId id) const {
  std::vector<NodeId> out{id};
  for (std::size_t k = 0; k < out.size(); ++k) {
    const MergeNode& n = nodes_.at(out[k]);
    if (!n.is_leaf()) {
      out.push_back(n.children[0]);
      out.push_back(n.children[1]);
    }
  }
  return out;
}

std::vector<NodeId> MergeTree::leaves_under(NodeId id) const {
  std::vector<NodeId> out;
  for (NodeId n : subtree(id)) {
    if (nodes_[n].is_leaf()) out.push_back(n);
  }
  return out;
}

NodeId MergeTree::leaf_of_label(std::uint32_t label) const {
  if (label >= label_to_leaf_.size() || label_to_leaf_[label] == kNoNode) {
    throw Error(Errc::InvalidArgument, "no leaf for superpixel label " + std::to_string(label));
  }
  return label_to_leaf_[label];
}

MergeTree build_merge_tree(const LabelMap& sp, const GridImage& conf) {
  require_same_dims(sp, conf, "build_merge_tree");
  if (sp.empty()) throw Error(Errc::EmptyInput, "empty superpixel map");
  const std::vector<std::uint32_t> labels = distinct_labels(sp);
  if (labels.front() == 0) throw Error(Errc::InvalidArgument, "superpixel map contains label 0");
  const RegionAdjacency adjacency = region_adjacency(sp, conf);

  const std::size_t n = labels.size();
  std::vector<MergeNode> nodes(n);
  std::vector<NodeId> leaf_of(std::size_t{labels.back()} + 1, kNoNode);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].leaf_label = labels[i];
    leaf_of[labels[i]] = static_cast<NodeId>(i);
  }
  nodes.reserve(2 * n - 1);

  // Active regions' boundaries, keyed by neighbor node id.
  std::vector<std::map<NodeId, RunningStats>> boundary(2 * n - 1);
  using Candidate = std::tuple<double, NodeId, NodeId>;
  std::set<Candidate> queue;
  auto key = [&](NodeId a, NodeId b) {
    return Candidate{boundary[a].at(b).mean(), std::min(a, b), std::max(a, b)};
  };
  for (const auto& [pair, b] : adjacency.pairs()) {
    const NodeId a = leaf_of[pair.first], c = leaf_of[pair.second];
    boundary[a][c] = b.stats;
    boundary[c][a] = b.stats;
    queue.insert(key(a, c));
  }

  auto merge = [&](NodeId a, NodeId b, double saliency) {
    const auto id = static_cast<NodeId>(nodes.size());
    MergeNode m;
    m.children = {a, b};
    m.saliency = saliency;
    nodes[a].parent = nodes[b].parent = id;
    nodes.push_back(m);
    return id;
  };

  while (!queue.empty()) {
    const auto [saliency, a, b] = *queue.begin();
    const NodeId m = merge(a, b, saliency);
    std::map<NodeId, RunningStats> joined;
    for (NodeId part : {a, b}) {
      for (const auto& [c, stats] : boundary[part]) {
        if (c == a || c == b) continue;
        queue.erase(key(part, c));
        boundary[c].erase(part);
        joined[c].merge(stats);
      }
      boundary[part].clear();
    }
    queue.erase(Candidate{saliency, a, b});
    boundary[m] = std::move(joined);
    for (const auto& [c, stats] : boundary[m]) {
      boundary[c][m] = stats;
      queue.insert(key(m, c));
    }
  }

  // Disconnected components: chain the remaining roots in id order.
  std::vector<NodeId> roots;
  for (NodeId id = 0; id < nodes.size(); ++id) {
    if (nodes[id].parent == kNoNode) roots.push_back(id);
  }
  NodeId acc = roots.front();
  for (std::size_t k = 1; k < roots.size(); ++k) {
    acc = merge(acc, roots[k], std::numeric_limits<double>::infinity());
  }
  return MergeTree(std::move(nodes));
}

std::vector<CliquePath> enumerate_paths(const MergeTree& tree, std::size_t length) {
  if (length == 0) throw Error(Errc::InvalidArgument, "path length must be >= 1");
  std::vector<CliquePath> paths;
  paths.reserve(tree.internal_nodes().size());
  for (NodeId start : tree.internal_nodes()) {
    CliquePath path;
    for (NodeId id = start; id != kNoNode && path.size() < length; id = tree.parent(id)) {
      path.push_back(id);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

bool is_region_consistent(const MergeTree& tree, std::span<const std::int8_t> z) {
  if (z.size() != tree.size()) return false;
  // selected_above[i]: number of z == 1 on the path from i to the root.
  std::vector<int> selected_above(tree.size(), 0);
  const auto& order = tree.post_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId id = *it;
    if (z[id] != 0 && z[id] != 1) return false;
    const NodeId p = tree.parent(id);
    selected_above[id] = z[id] + (p == kNoNode ? 0 : selected_above[p]);
    if (tree.is_leaf(id) && selected_above[id] != 1) return false;
  }
  return true;
}

bool check_merge_consistency(const MergeTree& tree, std::span<const std::int8_t> y) {
  if (y.size() != tree.size()) return false;
  for (NodeId id = 0; id < tree.size(); ++id) {
    const NodeId p = tree.parent(id);
    if (p == kNoNode || y[id] == kUnlabeled || y[p] == kUnlabeled) continue;
    if (y[id] < y[p]) return false;
  }
  return true;
}

NodeLabels z_to_y(const MergeTree& tree, std::span<const std::int8_t> z) {
  if (!is_region_consistent(tree, z)) {
    throw Error(Errc::InconsistentZ, "z violates the region consistency constraint");
  }
  NodeLabels y(tree.size(), 0);
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (z[id] != 1) continue;
    for (NodeId d : tree.subtree(id)) y[d] = 1;
  }
  return y;
}

NodeLabels y_to_z(const MergeTree& tree, std::span<const std::int8_t> y) {
  if (y.size() != tree.size()) throw Error(Errc::InconsistentY, "label count mismatch");
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (y[id] != 0 && y[id] != 1) throw Error(Errc::InconsistentY, "y must be fully labeled");
    if (tree.is_leaf(id) && y[id] != 1) throw Error(Errc::InconsistentY, "leaf clique with y = 0");
  }
  if (!check_merge_consistency(tree, y)) {
    throw Error(Errc::InconsistentY, "y violates the merge consistency constraint");
  }
  NodeLabels z(tree.size(), 0);
  for (NodeId id = 0; id < tree.size(); ++id) {
    const NodeId p = tree.parent(id);
    z[id] = (y[id] == 1 && (p == kNoNode || y[p] == 0)) ? 1 : 0;
  }
  return z;
}

}  // namespace sshmt
