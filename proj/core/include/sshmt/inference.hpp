#pragma once

#include <span>
#include <vector>

#include "sshmt/grid.hpp"
#include "sshmt/merge_tree.hpp"

namespace sshmt {

/// u_i = P(y_i = 1) · P(y_parent(i) = 0), with leaf cliques pinned at
/// P(y = 1) = 1 and the root's missing parent factor taken as 1.
/// `merge_prob` is indexed by node id; leaf entries are ignored. A NaN or
/// out-of-range entry for a non-leaf clique raises MissingPrediction.
std::vector<double> node_potentials(const MergeTree& tree, std::span<const double> merge_prob);

/// Greedy labeling: repeatedly select the unlabeled node with the highest
/// potential (ties: smaller id), setting z = 1 there and z = 0 on its
/// ancestors and descendants. The result satisfies the region consistency
/// constraint for any input.
NodeLabels greedy_label(const MergeTree& tree, std::span<const double> potentials);

/// Paints each selected node's region with labels 1..K in ascending node id.
LabelMap segmentation_from_z(const MergeTree& tree, std::span<const std::int8_t> z, const LabelMap& sp);

}  // namespace sshmt
