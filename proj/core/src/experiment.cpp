#include "sshmt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "sshmt/labeling.hpp"
#include "sshmt/metrics.hpp"
#include "sshmt/pipeline.hpp"

namespace sshmt {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (fractions.empty()) throw Error(Errc::InvalidArgument, "no supervision fractions");
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw Error(Errc::InvalidArgument, "fractions must lie in (0, 1]");
  }
  if (repeats == 0) throw Error(Errc::InvalidArgument, "repeats must be >= 1");
  if (train_images == 0 || test_images == 0) throw Error(Errc::InvalidArgument, "need train and test images");
  if (modes.empty()) throw Error(Errc::InvalidArgument, "no training modes");
}

std::uint64_t image_seed(std::uint64_t base, int split, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(split), static_cast<std::uint32_t>(index)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (std::uint64_t{out[0]} << 32) | out[1];
}

const char* mode_name(TrainMode mode) noexcept {
  return mode == TrainMode::Supervised ? "hmt" : "sshmt";
}

TrainMode parse_mode(const std::string& name) {
  if (name == "hmt") return TrainMode::Supervised;
  if (name == "sshmt") return TrainMode::SemiSupervised;
  throw Error(Errc::InvalidArgument, "unknown mode '" + name + "' (expected hmt or sshmt)");
}

namespace {

struct ImageSet {
  std::vector<PreparedImage> images;
  std::vector<LabelMap> gt;
};

ImageSet make_images(const ExperimentConfig& cfg, int split, std::size_t count) {
  ImageSet set;
  for (std::size_t i = 0; i < count; ++i) {
    SynthParams p = cfg.synth;
    p.seed = image_seed(cfg.seed, split, i);
    SynthVolume vol = synth_volume(p);
    set.images.push_back(prepare_image(std::move(vol.conf)));
    set.gt.push_back(std::move(vol.gt));
  }
  return set;
}

// Supervision unit: (image, clique) in FullGt, (image, segment index) in Segments.
using Unit = std::pair<std::size_t, std::size_t>;

std::vector<Unit> choose_units(std::vector<Unit> pool, double fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  const auto wanted = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pool.size())));
  pool.resize(std::min(pool.size(), std::max<std::size_t>(1, wanted)));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ImageSet train_set = make_images(cfg, 0, cfg.train_images);
  const ImageSet test = make_images(cfg, 1, cfg.test_images);

  std::vector<TrainingImage> unlabeled;
  for (const auto& img : train_set.images) unlabeled.push_back({&img.tree, img.features, nullptr});
  if (cfg.unsupervised_test_images) {
    for (const auto& img : test.images) unlabeled.push_back({&img.tree, img.features, nullptr});
  }
  const Standardizer standardizer = fit_standardizer(unlabeled);

  // Complete labels and the pool of supervision units.
  std::vector<LabelAssignment> full_labels;
  std::vector<std::vector<std::vector<std::size_t>>> segments;
  std::vector<Unit> pool;
  for (std::size_t i = 0; i < train_set.images.size(); ++i) {
    const auto& img = train_set.images[i];
    if (cfg.regime == LabelRegime::FullGt) {
      full_labels.push_back(labels_from_full_gt(img.tree, img.superpixels, train_set.gt[i]));
      for (NodeId id : full_labels.back().labeled_cliques(img.tree)) pool.emplace_back(i, id);
    } else {
      segments.push_back(segments_from_labels(train_set.gt[i]));
      for (std::size_t s = 0; s < segments.back().size(); ++s) pool.emplace_back(i, s);
    }
  }

  struct Job {
    double fraction;
    std::size_t repeat;
  };
  std::vector<Job> jobs;
  for (double f : cfg.fractions) {
    for (std::size_t r = 0; r < cfg.repeats; ++r) jobs.push_back({f, r});
  }
  std::vector<std::vector<RunRecord>> outcome(jobs.size());

  auto run_job = [&](std::size_t k) {
    const Job& job = jobs[k];
    const std::vector<Unit> chosen = choose_units(pool, job.fraction, cfg.seed + job.repeat);

    std::vector<NodeLabels> labels;
    for (std::size_t i = 0; i < train_set.images.size(); ++i) {
      const auto& img = train_set.images[i];
      if (cfg.regime == LabelRegime::FullGt) {
        NodeLabels y(img.tree.size(), kUnlabeled);
        for (NodeId id = 0; id < img.tree.size(); ++id) {
          if (img.tree.is_leaf(id)) y[id] = 1;
        }
        labels.push_back(std::move(y));
      } else {
        std::vector<std::vector<std::size_t>> mine;
        for (const auto& [image, s] : chosen) {
          if (image == i) mine.push_back(segments[i][s]);
        }
        labels.push_back(mine.empty() ? NodeLabels(img.tree.size(), kUnlabeled)
                                      : labels_from_segments(img.tree, img.superpixels, mine,
                                                             cfg.jaccard_threshold)
                                            .y);
      }
    }
    if (cfg.regime == LabelRegime::FullGt) {
      for (const auto& [image, id] : chosen) labels[image][id] = full_labels[image].y[id];
    }

    std::vector<TrainingImage> images;
    for (std::size_t i = 0; i < train_set.images.size(); ++i) {
      images.push_back({&train_set.images[i].tree, train_set.images[i].features, &labels[i]});
    }
    if (cfg.unsupervised_test_images) {
      for (const auto& img : test.images) images.push_back({&img.tree, img.features, nullptr});
    }
    const TrainingSet data = assemble_training_set(images, standardizer, cfg.train.path_length);

    for (TrainMode mode : cfg.modes) {
      RunRecord rec{mode, job.fraction, job.repeat, std::numeric_limits<double>::quiet_NaN(),
                    data.n_supervised(), {}};
      if (data.n_supervised() > 0) {
        rec.training = train(cfg.train, data, mode);
        const Model model{rec.training.w, rec.training.sigmas, standardizer};
        double total = 0.0;
        for (std::size_t t = 0; t < test.images.size(); ++t) {
          const auto& img = test.images[t];
          const LabelMap seg = segment_image(img.tree, img.features, img.superpixels, model);
          total += adapted_rand_error(seg, test.gt[t]);
        }
        rec.are = total / static_cast<double>(test.images.size());
      }
      outcome[k].push_back(std::move(rec));
    }
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  if (threads <= 1) {
    for (std::size_t k = 0; k < jobs.size(); ++k) run_job(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool_threads;
    for (std::size_t t = 0; t < threads; ++t) {
      pool_threads.emplace_back([&, t] {
        try {
          for (std::size_t k = next++; k < jobs.size(); k = next++) run_job(k);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool_threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ExperimentResult result;
  for (auto& recs : outcome) {
    for (auto& r : recs) result.runs.push_back(std::move(r));
  }
  for (TrainMode mode : cfg.modes) {
    for (double f : cfg.fractions) {
      SummaryRow row{mode, f, 0.0, 0.0, 0};
      double sum = 0.0, sum_sq = 0.0;
      for (const auto& r : result.runs) {
        if (r.mode != mode || r.fraction != f || std::isnan(r.are)) continue;
        ++row.count;
        sum += r.are;
      }
      if (row.count > 0) {
        row.mean = sum / static_cast<double>(row.count);
        for (const auto& r : result.runs) {
          if (r.mode != mode || r.fraction != f || std::isnan(r.are)) continue;
          sum_sq += (r.are - row.mean) * (r.are - row.mean);
        }
        row.std = std::sqrt(sum_sq / static_cast<double>(row.count));
      } else {
        row.mean = row.std = std::numeric_limits<double>::quiet_NaN();
      }
      result.summary.push_back(row);
    }
  }
  return result;
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result) {
  out << std::setprecision(10);
  out << "mode,fraction,repeat,are\n";
  for (const auto& r : result.runs) {
    out << mode_name(r.mode) << ',' << r.fraction << ',' << r.repeat << ',' << r.are << '\n';
  }
  out << "mode,fraction,mean,std\n";
  for (const auto& s : result.summary) {
    out << mode_name(s.mode) << ',' << s.fraction << ',' << s.mean << ',' << s.std << '\n';
  }
}

json train_config_to_json(const TrainConfig& c) {
  return {{"path_length", c.path_length},     {"sigma_cadence", c.sigma_cadence},
          {"learning_rate", c.learning_rate}, {"step_growth", c.step_growth},
          {"max_halvings", c.max_halvings},   {"init_iterations", c.init_iterations},
          {"max_iterations", c.max_iterations}, {"tolerance", c.tolerance},
          {"clamp", c.clamp}};
}

TrainConfig train_config_from_json(const json& j, TrainConfig c) {
  try {
    c.path_length = j.value("path_length", c.path_length);
    c.sigma_cadence = j.value("sigma_cadence", c.sigma_cadence);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.step_growth = j.value("step_growth", c.step_growth);
    c.max_halvings = j.value("max_halvings", c.max_halvings);
    c.init_iterations = j.value("init_iterations", c.init_iterations);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.clamp = j.value("clamp", c.clamp);
  } catch (const json::exception& e) {
    throw Error(Errc::Format, std::string("train config: ") + e.what());
  }
  if (c.path_length == 0 || c.sigma_cadence == 0 || !(c.learning_rate > 0.0) || !(c.clamp > 0.0 && c.clamp < 0.5)) {
    throw Error(Errc::InvalidArgument, "train config out of range");
  }
  return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
  json modes = json::array();
  for (TrainMode m : c.modes) modes.push_back(mode_name(m));
  return {{"synth",
           {{"dims", {c.synth.dims.nx, c.synth.dims.ny, c.synth.dims.nz}},
            {"n_cells", c.synth.n_cells},
            {"membrane_width", c.synth.membrane_width},
            {"noise_std", c.synth.noise_std}}},
          {"train_images", c.train_images},
          {"test_images", c.test_images},
          {"fractions", c.fractions},
          {"repeats", c.repeats},
          {"modes", modes},
          {"labels", c.regime == LabelRegime::FullGt ? "full_gt" : "segments"},
          {"jaccard_threshold", c.jaccard_threshold},
          {"unsupervised_test_images", c.unsupervised_test_images},
          {"train", train_config_to_json(c.train)},
          {"seed", c.seed},
          {"threads", c.threads}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("synth")) {
      const auto& s = j.at("synth");
      if (s.contains("dims")) {
        const auto d = s.at("dims").get<std::vector<std::uint32_t>>();
        if (d.size() != 3) throw Error(Errc::Format, "synth.dims needs 3 entries");
        c.synth.dims = {d[0], d[1], d[2]};
      }
      c.synth.n_cells = s.value("n_cells", c.synth.n_cells);
      c.synth.membrane_width = s.value("membrane_width", c.synth.membrane_width);
      c.synth.noise_std = s.value("noise_std", c.synth.noise_std);
    }
    c.train_images = j.value("train_images", c.train_images);
    c.test_images = j.value("test_images", c.test_images);
    c.fractions = j.value("fractions", c.fractions);
    c.repeats = j.value("repeats", c.repeats);
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j.at("modes")) c.modes.push_back(parse_mode(m.get<std::string>()));
    }
    const std::string regime = j.value("labels", std::string("segments"));
    if (regime == "full_gt") {
      c.regime = LabelRegime::FullGt;
    } else if (regime == "segments") {
      c.regime = LabelRegime::Segments;
    } else {
      throw Error(Errc::Format, "labels must be full_gt or segments");
    }
    c.jaccard_threshold = j.value("jaccard_threshold", c.jaccard_threshold);
    c.unsupervised_test_images = j.value("unsupervised_test_images", c.unsupervised_test_images);
    if (j.contains("train")) c.train = train_config_from_json(j.at("train"), c.train);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw Error(Errc::Format, std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace sshmt
