#pragma once

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <vector>

#include "sshmt/labeling.hpp"
#include "sshmt/learner.hpp"
#include "sshmt/merge_tree.hpp"
#include "sshmt/pipeline.hpp"

namespace sshmt {

// Merge tree: {"n_leaves": n, "nodes": [{"id", "parent", "children", "leaf_label"}]}
// with parent null at the root, children [] and a positive leaf_label for
// leaves, leaf_label null for internal nodes.
nlohmann::json tree_to_json(const MergeTree& tree);
MergeTree tree_from_json(const nlohmann::json& j);

// Labels: {"<clique id>": 0 | 1} over labeled non-leaf cliques.
nlohmann::json labels_to_json(const MergeTree& tree, std::span<const std::int8_t> y);
NodeLabels labels_from_json(const MergeTree& tree, const nlohmann::json& j);

// Segments: [[voxel, ...], ...]
std::vector<std::vector<std::size_t>> segments_from_json(const nlohmann::json& j);

// Model: {"w": [...], "sigma_u", "sigma_s", "feature_means": [...], "feature_stds": [...]}
nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

nlohmann::json standardizer_to_json(const Standardizer& st);
Standardizer standardizer_from_json(const nlohmann::json& j);

/// Header "iteration,phase,J,sigma_u,sigma_s,grad_norm".
void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace sshmt
