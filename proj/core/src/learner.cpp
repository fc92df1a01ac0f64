#include "sshmt/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sshmt {

FeatureMatrix FeatureMatrix::from_rows(std::span<const FeatureVector> rows) {
  FeatureMatrix m(kFeatureDim);
  for (const auto& r : rows) m.add_row(r);
  return m;
}

void FeatureMatrix::add_row(std::span<const double> x) {
  if (x.size() != dim_) throw Error(Errc::DimMismatch, "row has the wrong dimension");
  values_.insert(values_.end(), x.begin(), x.end());
}

void TrainingSet::validate() const {
  const std::size_t n = samples.rows();
  if (labels.size() != supervised.size()) {
    throw Error(Errc::InvalidArgument, "supervised rows and labels differ in length");
  }
  for (std::size_t r : supervised) {
    if (r >= n) throw Error(Errc::InvalidArgument, "supervised row out of range");
  }
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw Error(Errc::InvalidArgument, "labels must be 0 or 1");
  }
  for (const auto& p : paths) {
    if (p.empty()) throw Error(Errc::InvalidArgument, "empty clique path");
    for (std::size_t r : p) {
      if (r >= n) throw Error(Errc::InvalidArgument, "path row out of range");
    }
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::vector<double> g_terms(std::span<const double> f) {
  const std::size_t len = f.size();
  std::vector<double> g(len + 1);
  for (std::size_t j = 0; j <= len; ++j) {
    double prod = 1.0;
    for (std::size_t k = 0; k < j; ++k) prod *= f[k];
    for (std::size_t k = j; k < len; ++k) prod *= 1.0 - f[k];
    g[j] = prod;
  }
  return g;
}

// Shared evaluation of predictions, residuals and per-row gradient weights.
struct Evaluation {
  std::vector<double> f;   // prediction per sample row
  double supervised_ss = 0.0;
  double unsupervised_ss = 0.0;
};

Evaluation evaluate(std::span<const double> w, const TrainingSet& data, Terms terms, double clamp) {
  Evaluation e;
  const std::size_t n = data.samples.rows();
  e.f.resize(n);
  for (std::size_t r = 0; r < n; ++r) e.f[r] = predict(w, data.samples.row(r), clamp);
  for (std::size_t j = 0; j < data.supervised.size(); ++j) {
    const double res = data.labels[j] - e.f[data.supervised[j]];
    e.supervised_ss += res * res;
  }
  if (terms == Terms::Full) {
    std::vector<double> fp;
    for (const auto& path : data.paths) {
      fp.clear();
      for (std::size_t r : path) fp.push_back(e.f[r]);
      const double res = 1.0 - dnf_value(fp);
      e.unsupervised_ss += res * res;
    }
  }
  return e;
}

bool unsupervised_active(const TrainingSet& data, Terms terms) {
  return terms == Terms::Full && data.n_paths() > 0;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double predict(std::span<const double> w, std::span<const double> x, double clamp) {
  return std::clamp(sigmoid(dot(w, x)), clamp, 1.0 - clamp);
}

std::vector<double> predict_grad(std::span<const double> w, std::span<const double> x, double clamp) {
  const double f = predict(w, x, clamp);
  std::vector<double> g(x.begin(), x.end());
  for (double& v : g) v *= f * (1.0 - f);
  return g;
}

double dnf_value(std::span<const double> f) {
  double none = 1.0;
  for (double g : g_terms(f)) none *= 1.0 - g;
  return 1.0 - none;
}

std::vector<double> dnf_partials(std::span<const double> f) {
  const std::size_t len = f.size();
  const std::vector<double> g = g_terms(f);
  // weight[j] = g_j * prod_{m != j} (1 - g_m)
  std::vector<double> weight(len + 1);
  for (std::size_t j = 0; j <= len; ++j) {
    double prod = g[j];
    for (std::size_t m = 0; m <= len; ++m) {
      if (m != j) prod *= 1.0 - g[m];
    }
    weight[j] = prod;
  }
  std::vector<double> partial(len, 0.0);
  for (std::size_t j = 0; j <= len; ++j) {
    for (std::size_t k = 0; k < len; ++k) {
      partial[k] += k < j ? weight[j] / f[k] : -weight[j] / (1.0 - f[k]);
    }
  }
  return partial;
}

std::vector<double> dnf_grad(std::span<const double> f, std::span<const std::vector<double>> f_grads) {
  if (f.size() != f_grads.size()) throw Error(Errc::DimMismatch, "one gradient row per prediction");
  const std::vector<double> partial = dnf_partials(f);
  std::vector<double> grad(f_grads.empty() ? 0 : f_grads.front().size(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f_grads[k].size() != grad.size()) throw Error(Errc::DimMismatch, "ragged gradient rows");
    for (std::size_t d = 0; d < grad.size(); ++d) grad[d] += partial[k] * f_grads[k][d];
  }
  return grad;
}

double objective(std::span<const double> w, const Sigmas& sigmas, const TrainingSet& data, Terms terms,
                 double clamp) {
  const Evaluation e = evaluate(w, data, terms, clamp);
  double j = 0.5 * dot(w, w);
  if (unsupervised_active(data, terms)) {
    j += e.unsupervised_ss / (2.0 * sigmas.u * sigmas.u) +
         static_cast<double>(data.n_paths()) * std::log(sigmas.u);
  }
  if (data.n_supervised() > 0) {
    j += e.supervised_ss / (2.0 * sigmas.s * sigmas.s) +
         static_cast<double>(data.n_supervised()) * std::log(sigmas.s);
  }
  return j;
}

std::vector<double> objective_grad(std::span<const double> w, const Sigmas& sigmas, const TrainingSet& data,
                                   Terms terms, double clamp) {
  const std::size_t n = data.samples.rows();
  std::vector<double> f(n);
  for (std::size_t r = 0; r < n; ++r) f[r] = predict(w, data.samples.row(r), clamp);

  // ∇J = w - Σ_r c_r f_r (1 - f_r) x_r, accumulating c_r per sample row.
  std::vector<double> coeff(n, 0.0);
  const double inv_s = 1.0 / (sigmas.s * sigmas.s);
  for (std::size_t j = 0; j < data.supervised.size(); ++j) {
    const std::size_t r = data.supervised[j];
    coeff[r] += (data.labels[j] - f[r]) * inv_s;
  }
  if (unsupervised_active(data, terms)) {
    const double inv_u = 1.0 / (sigmas.u * sigmas.u);
    std::vector<double> fp;
    for (const auto& path : data.paths) {
      fp.clear();
      for (std::size_t r : path) fp.push_back(f[r]);
      const double res = 1.0 - dnf_value(fp);
      const std::vector<double> partial = dnf_partials(fp);
      for (std::size_t k = 0; k < path.size(); ++k) coeff[path[k]] += res * inv_u * partial[k];
    }
  }

  std::vector<double> grad(w.begin(), w.end());
  for (std::size_t r = 0; r < n; ++r) {
    if (coeff[r] == 0.0) continue;
    const double scale = coeff[r] * f[r] * (1.0 - f[r]);
    const auto x = data.samples.row(r);
    for (std::size_t d = 0; d < grad.size(); ++d) grad[d] -= scale * x[d];
  }
  return grad;
}

Sigmas update_sigmas(std::span<const double> w, const TrainingSet& data, const Sigmas& current, Terms terms,
                     double clamp) {
  const Evaluation e = evaluate(w, data, terms, clamp);
  Sigmas next = current;
  if (unsupervised_active(data, terms)) {
    next.u = std::max(kSigmaMin, std::sqrt(e.unsupervised_ss / static_cast<double>(data.n_paths())));
  }
  if (data.n_supervised() > 0) {
    next.s = std::max(kSigmaMin, std::sqrt(e.supervised_ss / static_cast<double>(data.n_supervised())));
  }
  return next;
}

namespace {

void descend(const TrainConfig& cfg, const TrainingSet& data, Terms terms, int phase, std::size_t budget,
             std::vector<double>& w, Sigmas& sigmas, std::vector<TraceEntry>& trace) {
  double J = objective(w, sigmas, data, terms, cfg.clamp);
  std::vector<double> grad = objective_grad(w, sigmas, data, terms, cfg.clamp);
  std::size_t iteration = trace.empty() ? 0 : trace.back().iteration + 1;
  trace.push_back({iteration, phase, J, sigmas.u, sigmas.s, max_abs(grad)});

  double step = cfg.learning_rate;
  std::vector<double> candidate(w.size());
  for (std::size_t it = 1; it <= budget; ++it) {
    if (max_abs(grad) <= cfg.tolerance) break;
    bool accepted = false;
    double J_next = J;
    for (std::size_t h = 0; h <= cfg.max_halvings; ++h) {
      for (std::size_t d = 0; d < w.size(); ++d) candidate[d] = w[d] - step * grad[d];
      J_next = objective(candidate, sigmas, data, terms, cfg.clamp);
      if (J_next <= J) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    w.swap(candidate);
    J = J_next;
    step *= cfg.step_growth;
    if (it % cfg.sigma_cadence == 0) {
      sigmas = update_sigmas(w, data, sigmas, terms, cfg.clamp);
      J = objective(w, sigmas, data, terms, cfg.clamp);
    }
    grad = objective_grad(w, sigmas, data, terms, cfg.clamp);
    trace.push_back({++iteration, phase, J, sigmas.u, sigmas.s, max_abs(grad)});
  }
}

}  // namespace

TrainResult train(const TrainConfig& config, const TrainingSet& data, TrainMode mode) {
  if (data.n_supervised() == 0) {
    throw Error(Errc::NoSupervisedData, "training needs at least one labeled clique");
  }
  if (!(config.learning_rate > 0.0) || config.sigma_cadence == 0 || !(config.clamp > 0.0) ||
      !(config.clamp < 0.5)) {
    throw Error(Errc::InvalidArgument, "invalid training configuration");
  }
  data.validate();

  TrainResult result;
  result.w.assign(data.samples.dim(), 0.0);
  descend(config, data, Terms::SupervisedOnly, 1, config.init_iterations, result.w, result.sigmas,
          result.trace);
  if (mode == TrainMode::SemiSupervised) {
    result.sigmas.u = 1.0;
    descend(config, data, Terms::Full, 2, config.max_iterations, result.w, result.sigmas, result.trace);
  }
  return result;
}

}  // namespace sshmt
