#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "sshmt/learner.hpp"
#include "sshmt/synth.hpp"

namespace sshmt {

/// How training labels are produced before subsampling.
enum class LabelRegime {
  FullGt,    ///< merge/split labels from complete ground truth; cliques are subsampled
  Segments,  ///< labels from individual ground-truth segments; segments are subsampled
};

struct ExperimentConfig {
  SynthParams synth{Dims{64, 64, 1}, 12, 1, 0.2, 0};  ///< seed field unused
  std::size_t train_images = 10;
  std::size_t test_images = 10;
  std::vector<double> fractions{1.0, 0.25, 0.0625};
  std::size_t repeats = 10;
  std::vector<TrainMode> modes{TrainMode::Supervised, TrainMode::SemiSupervised};
  LabelRegime regime = LabelRegime::Segments;
  double jaccard_threshold = 0.75;
  /// Test images also feed the unsupervised term (they carry no labels).
  bool unsupervised_test_images = true;
  TrainConfig train;
  std::uint64_t seed = 1;
  /// Worker threads for repeats; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

/// Seed of the index-th synthetic image of a split (0 = train, 1 = test).
std::uint64_t image_seed(std::uint64_t base, int split, std::size_t index);

const char* mode_name(TrainMode mode) noexcept;
TrainMode parse_mode(const std::string& name);

struct RunRecord {
  TrainMode mode;
  double fraction = 0.0;
  std::size_t repeat = 0;
  /// Mean adapted Rand error over the test images; NaN when the subsample
  /// yielded no labeled clique.
  double are = 0.0;
  std::size_t n_supervised = 0;
  TrainResult training;
};

struct SummaryRow {
  TrainMode mode;
  double fraction = 0.0;
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation over repeats
  std::size_t count = 0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  ///< ordered by fraction, repeat, mode
  std::vector<SummaryRow> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Rows "mode,fraction,repeat,are" followed by "mode,fraction,mean,std".
void write_experiment_csv(std::ostream& out, const ExperimentResult& result);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
nlohmann::json train_config_to_json(const TrainConfig& config);
/// Fields absent from j keep the values in `base`.
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

}  // namespace sshmt
