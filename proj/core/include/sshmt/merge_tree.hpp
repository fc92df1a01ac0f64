#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "sshmt/grid.hpp"

namespace sshmt {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Per-node binary label (y for cliques, z for nodes). kUnlabeled marks a
/// clique without a training label.
using NodeLabels = std::vector<std::int8_t>;
inline constexpr std::int8_t kUnlabeled = -1;

struct MergeNode {
  NodeId parent = kNoNode;
  std::array<NodeId, 2> children{kNoNode, kNoNode};
  /// Superpixel label for leaves, 0 for internal nodes.
  std::uint32_t leaf_label = 0;
  /// Boundary saliency at which the children merged (internal nodes only).
  double saliency = 0.0;

  bool is_leaf() const noexcept { return children[0] == kNoNode; }
};

/// Full binary region-merging hierarchy over the superpixels of one image.
/// The clique at node i is identified by i itself.
class MergeTree {
 public:
  MergeTree() = default;
  /// Validates that nodes form a single full binary tree with unique leaf labels.
  explicit MergeTree(std::vector<MergeNode> nodes);

  /// Leaves get labels 1..n_leaves and ids 0..n_leaves-1; each merge appends a
  /// new internal node.
  static MergeTree from_merges(std::size_t n_leaves, std::span<const std::pair<NodeId, NodeId>> merges);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t n_leaves() const noexcept { return n_leaves_; }
  NodeId root() const noexcept { return root_; }

  const MergeNode& node(NodeId id) const { return nodes_.at(id); }
  std::span<const MergeNode> nodes() const noexcept { return nodes_; }
  bool is_leaf(NodeId id) const { return node(id).is_leaf(); }
  bool is_root(NodeId id) const { return id == root_; }
  NodeId parent(NodeId id) const { return node(id).parent; }
  const std::array<NodeId, 2>& children(NodeId id) const { return node(id).children; }

  /// Ancestors nearest first, excluding id.
  std::vector<NodeId> ancestors(NodeId id) const;
  /// id followed by all of its descendants.
  std::vector<NodeId> subtree(NodeId id) const;
  std::vector<NodeId> leaves_under(NodeId id) const;
  /// Non-leaf node ids in ascending order.
  const std::vector<NodeId>& internal_nodes() const noexcept { return internal_; }
  /// Every node after all of its descendants.
  const std::vector<NodeId>& post_order() const noexcept { return post_order_; }
  /// Leaf carrying the superpixel label; throws InvalidArgument when absent.
  NodeId leaf_of_label(std::uint32_t label) const;
  /// Leaf id for each superpixel label (index = label, kNoNode where absent).
  const std::vector<NodeId>& label_to_leaf() const noexcept { return label_to_leaf_; }

 private:
  std::vector<MergeNode> nodes_;
  std::size_t n_leaves_ = 0;
  NodeId root_ = kNoNode;
  std::vector<NodeId> internal_;
  std::vector<NodeId> post_order_;
  std::vector<NodeId> label_to_leaf_;
};

/// Greedy agglomeration: repeatedly merges the adjacent pair with the lowest
/// mean boundary confidence (ties: smaller (min id, max id) pair). The merged
/// region's boundary to each neighbor is the union of its parts' boundaries.
/// Disconnected components are finally chained together in id order with
/// infinite saliency. Leaves are the superpixel labels in ascending order.
MergeTree build_merge_tree(const LabelMap& sp, const GridImage& conf);

/// Ordered chain of non-leaf cliques {p_i, p_parent(i), ...}.
using CliquePath = std::vector<NodeId>;

/// One path per non-leaf clique (ascending id), truncated at the root.
std::vector<CliquePath> enumerate_paths(const MergeTree& tree, std::size_t length);

/// Every leaf-to-root path has exactly one z == 1.
bool is_region_consistent(const MergeTree& tree, std::span<const std::int8_t> z);

/// y_i >= y_parent(i) wherever both labels are known.
bool check_merge_consistency(const MergeTree& tree, std::span<const std::int8_t> y);

/// y = 1 at selected nodes and their descendants, 0 elsewhere.
NodeLabels z_to_y(const MergeTree& tree, std::span<const std::int8_t> z);

/// z = 1 where y = 1 and the node is the root or its parent has y = 0.
NodeLabels y_to_z(const MergeTree& tree, std::span<const std::int8_t> y);

}  // namespace sshmt
