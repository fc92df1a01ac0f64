#pragma once

#include <span>
#include <vector>

#include "sshmt/features.hpp"
#include "sshmt/grid.hpp"
#include "sshmt/labeling.hpp"
#include "sshmt/learner.hpp"
#include "sshmt/merge_tree.hpp"

namespace sshmt {

/// A trained boundary classifier together with the normalization it expects.
struct Model {
  std::vector<double> w;
  Sigmas sigmas;
  Standardizer standardizer;
};

/// Superpixels, merge tree and clique features of one image.
struct PreparedImage {
  GridImage conf;
  LabelMap superpixels;
  MergeTree tree;
  /// One row per tree.internal_nodes() entry, rounded to f32 precision so
  /// in-memory runs match values read back from GRD1 feature files.
  std::vector<FeatureVector> features;
};

PreparedImage prepare_image(GridImage conf, const GridImage* raw = nullptr);

/// Rounds every component to the nearest float, as a GRD1 f32 round trip does.
std::vector<FeatureVector> round_to_f32(std::vector<FeatureVector> rows);

/// Feature rows stored as an f32 grid: nx = feature dimension, ny = rows.
GridImage features_to_grid(std::span<const FeatureVector> rows);
std::vector<FeatureVector> features_from_grid(const GridImage& grid);

/// One image's contribution to training. `labels` (indexed by node id) may
/// be null for images that only provide unsupervised paths.
struct TrainingImage {
  const MergeTree* tree = nullptr;
  std::span<const FeatureVector> features;
  const NodeLabels* labels = nullptr;
};

/// Stacks standardized clique rows of all images; labeled non-leaf cliques
/// become supervised samples and every image contributes its clique paths.
TrainingSet assemble_training_set(std::span<const TrainingImage> images, const Standardizer& standardizer,
                                  std::size_t path_length);

/// Standardizer fitted on every row of every image, in order.
Standardizer fit_standardizer(std::span<const TrainingImage> images);

/// P(y = 1) per node id; leaves get 1.
std::vector<double> merge_probabilities(const MergeTree& tree, std::span<const FeatureVector> features,
                                        const Model& model, double clamp = kDefaultClamp);

/// Potentials, greedy labeling and painting for one image.
LabelMap segment_image(const MergeTree& tree, std::span<const FeatureVector> features,
                       const LabelMap& superpixels, const Model& model);

}  // namespace sshmt
