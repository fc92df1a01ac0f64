#include "sshmt/pipeline.hpp"

#include <cmath>
#include <limits>

#include "sshmt/inference.hpp"
#include "sshmt/watershed.hpp"

namespace sshmt {

PreparedImage prepare_image(GridImage conf, const GridImage* raw) {
  PreparedImage img;
  img.superpixels = watershed(conf);
  img.tree = build_merge_tree(img.superpixels, conf);
  img.features = round_to_f32(FeatureExtractor(img.tree, img.superpixels, conf, raw).extract_all());
  img.conf = std::move(conf);
  return img;
}

std::vector<FeatureVector> round_to_f32(std::vector<FeatureVector> rows) {
  for (auto& r : rows) {
    for (double& v : r) v = static_cast<double>(static_cast<float>(v));
  }
  return rows;
}

GridImage features_to_grid(std::span<const FeatureVector> rows) {
  std::vector<float> values;
  values.reserve(rows.size() * kFeatureDim);
  for (const auto& r : rows) {
    for (double v : r) values.push_back(static_cast<float>(v));
  }
  return GridImage(Dims{static_cast<std::uint32_t>(kFeatureDim), static_cast<std::uint32_t>(rows.size()), 1},
                   std::move(values));
}

std::vector<FeatureVector> features_from_grid(const GridImage& grid) {
  if (grid.dims().nx != kFeatureDim || grid.dims().nz != 1) {
    throw Error(Errc::DimMismatch, "feature grid must be " + std::to_string(kFeatureDim) + " columns wide");
  }
  std::vector<FeatureVector> rows(grid.dims().ny);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < kFeatureDim; ++k) rows[r][k] = grid[r * kFeatureDim + k];
  }
  return rows;
}

namespace {

void check_rows(const TrainingImage& img) {
  if (img.tree == nullptr || img.features.size() != img.tree->internal_nodes().size()) {
    throw Error(Errc::DimMismatch, "feature rows do not match the tree's non-leaf cliques");
  }
  if (img.labels && img.labels->size() != img.tree->size()) {
    throw Error(Errc::DimMismatch, "label vector does not match the tree");
  }
}

}  // namespace

Standardizer fit_standardizer(std::span<const TrainingImage> images) {
  std::vector<FeatureVector> all;
  for (const auto& img : images) all.insert(all.end(), img.features.begin(), img.features.end());
  return Standardizer::fit(all);
}

TrainingSet assemble_training_set(std::span<const TrainingImage> images, const Standardizer& standardizer,
                                  std::size_t path_length) {
  TrainingSet set;
  set.samples = FeatureMatrix(kFeatureDim);
  for (const auto& img : images) {
    check_rows(img);
    const MergeTree& tree = *img.tree;
    const std::size_t base = set.samples.rows();
    std::vector<std::size_t> row_of(tree.size(), std::numeric_limits<std::size_t>::max());
    const auto& internal = tree.internal_nodes();
    for (std::size_t k = 0; k < internal.size(); ++k) {
      row_of[internal[k]] = base + k;
      set.samples.add_row(standardizer.apply(img.features[k]));
      if (img.labels && (*img.labels)[internal[k]] != kUnlabeled) {
        set.supervised.push_back(base + k);
        set.labels.push_back((*img.labels)[internal[k]]);
      }
    }
    for (const CliquePath& path : enumerate_paths(tree, path_length)) {
      std::vector<std::size_t> rows;
      rows.reserve(path.size());
      for (NodeId id : path) rows.push_back(row_of[id]);
      set.paths.push_back(std::move(rows));
    }
  }
  return set;
}

std::vector<double> merge_probabilities(const MergeTree& tree, std::span<const FeatureVector> features,
                                        const Model& model, double clamp) {
  const auto& internal = tree.internal_nodes();
  if (features.size() != internal.size()) {
    throw Error(Errc::MissingPrediction, "feature rows do not match the tree's non-leaf cliques");
  }
  std::vector<double> p(tree.size(), 1.0);
  for (std::size_t k = 0; k < internal.size(); ++k) {
    p[internal[k]] = predict(model.w, model.standardizer.apply(features[k]), clamp);
  }
  return p;
}

LabelMap segment_image(const MergeTree& tree, std::span<const FeatureVector> features,
                       const LabelMap& superpixels, const Model& model) {
  const auto u = node_potentials(tree, merge_probabilities(tree, features, model));
  return segmentation_from_z(tree, greedy_label(tree, u), superpixels);
}

}  // namespace sshmt
