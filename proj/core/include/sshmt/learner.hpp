#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sshmt/features.hpp"

namespace sshmt {

inline constexpr double kSigmaMin = 1e-6;
inline constexpr double kDefaultClamp = 1e-7;

/// Residual scales of the unsupervised (u) and supervised (s) likelihoods.
struct Sigmas {
  double u = 1.0;
  double s = 1.0;
};

/// Row-major sample matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t dim) : dim_(dim) {}

  static FeatureMatrix from_rows(std::span<const FeatureVector> rows);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return dim_ ? values_.size() / dim_ : 0; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  void add_row(std::span<const double> x);

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// X holds every clique sample; X_s and the clique paths index into it.
struct TrainingSet {
  FeatureMatrix samples;
  std::vector<std::size_t> supervised;
  std::vector<double> labels;
  std::vector<std::vector<std::size_t>> paths;

  std::size_t n_supervised() const noexcept { return supervised.size(); }
  std::size_t n_paths() const noexcept { return paths.size(); }
  /// Throws InvalidArgument on out-of-range rows or non-binary labels.
  void validate() const;
};

/// Which likelihood terms enter the objective.
enum class Terms { SupervisedOnly, Full };

/// Supervised is the HMT baseline; SemiSupervised adds the consistency term.
enum class TrainMode { Supervised, SemiSupervised };

struct TrainConfig {
  std::size_t path_length = 3;
  std::size_t sigma_cadence = 100;
  double learning_rate = 1e-3;
  /// Multiplier applied to the step after an accepted move; 1 keeps it fixed.
  double step_growth = 2.0;
  std::size_t max_halvings = 60;
  std::size_t init_iterations = 1500;
  std::size_t max_iterations = 1500;
  double tolerance = 1e-4;
  double clamp = kDefaultClamp;
};

/// Logistic sigmoid of w·x, clamped to [clamp, 1 - clamp].
double predict(std::span<const double> w, std::span<const double> x, double clamp = kDefaultClamp);

/// f(1-f)·x using the clamped prediction.
std::vector<double> predict_grad(std::span<const double> w, std::span<const double> x,
                                 double clamp = kDefaultClamp);

/// Real-valued relaxation of "the sequence f_0..f_{L-1} is non-increasing":
///   F = 1 - prod_{j=0..L} (1 - g_j),
///   g_j = prod_{k<j} f_k * prod_{k>=j} (1 - f_k).
/// Equals 1 on consistent binary sequences and 0 on inconsistent ones.
double dnf_value(std::span<const double> f);

/// dF/df_k for every position. Requires f strictly inside (0, 1).
std::vector<double> dnf_partials(std::span<const double> f);

/// Gradient of F w.r.t. w given each clique's prediction gradient row.
std::vector<double> dnf_grad(std::span<const double> f, std::span<const std::vector<double>> f_grads);

/// Negative log posterior:
///   ½‖w‖² + ‖1-F‖²/(2σu²) + N_u log σu + ‖y_s-f‖²/(2σs²) + N_s log σs,
/// dropping terms whose sample count is zero (and the unsupervised terms for
/// Terms::SupervisedOnly).
double objective(std::span<const double> w, const Sigmas& sigmas, const TrainingSet& data,
                 Terms terms = Terms::Full, double clamp = kDefaultClamp);

std::vector<double> objective_grad(std::span<const double> w, const Sigmas& sigmas, const TrainingSet& data,
                                   Terms terms = Terms::Full, double clamp = kDefaultClamp);

/// Closed-form minimizers σ = ‖residual‖/√N, floored at kSigmaMin. A σ whose
/// term is inactive or has no samples keeps its current value.
Sigmas update_sigmas(std::span<const double> w, const TrainingSet& data, const Sigmas& current,
                     Terms terms = Terms::Full, double clamp = kDefaultClamp);

struct TraceEntry {
  std::size_t iteration = 0;
  int phase = 1;
  double objective = 0.0;
  double sigma_u = 1.0;
  double sigma_s = 1.0;
  double grad_norm = 0.0;  ///< max-norm of ∇_w J
};

struct TrainResult {
  std::vector<double> w;
  Sigmas sigmas;
  std::vector<TraceEntry> trace;
};

/// Phase 1 starts from w = 0 and descends the prior + supervised terms,
/// refreshing σs every sigma_cadence steps. In SemiSupervised mode phase 2
/// continues on the full objective (σu starting at 1), refreshing both σ.
/// Each phase stops when ‖∇J‖∞ <= tolerance, when its iteration budget is
/// spent, or when backtracking cannot find a non-increasing step.
/// Throws NoSupervisedData when the set has no labeled samples.
TrainResult train(const TrainConfig& config, const TrainingSet& data, TrainMode mode);

}  // namespace sshmt
