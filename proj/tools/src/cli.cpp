#include "sshmt_cli/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sshmt/error.hpp"
#include "sshmt/experiment.hpp"
#include "sshmt/features.hpp"
#include "sshmt/grid_io.hpp"
#include "sshmt/labeling.hpp"
#include "sshmt/merge_tree.hpp"
#include "sshmt/metrics.hpp"
#include "sshmt/pipeline.hpp"
#include "sshmt/serialize.hpp"
#include "sshmt/synth.hpp"
#include "sshmt/watershed.hpp"

namespace sshmt::cli {
namespace {

using nlohmann::json;

Dims parse_dims(const std::string& text) {
  std::vector<std::uint32_t> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string part = text.substr(pos, comma - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw CLI::ValidationError("--dims", "expected nx,ny[,nz] with positive integers");
    }
    v.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    pos = comma + 1;
  }
  if (v.size() == 2) v.push_back(1);
  if (v.size() != 3 || v[0] == 0 || v[1] == 0 || v[2] == 0) {
    throw CLI::ValidationError("--dims", "expected nx,ny[,nz] with positive integers");
  }
  return {v[0], v[1], v[2]};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(Errc::Io, "cannot write " + path);
  f << std::setprecision(17);
  return f;
}

struct SynthArgs {
  std::string dims = "64,64,1";
  std::uint32_t cells = 12;
  std::uint32_t membrane_width = 1;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string gt;
};

struct StageArgs {
  std::string conf, raw, superpixels, tree, features, gt, segments, model, seg, out;
  std::string regime = "full_gt";
  double threshold = kDefaultJaccardThreshold;
};

struct TrainArgs {
  std::string manifest, config, out, trace;
  std::string mode = "sshmt";
  std::optional<double> learning_rate, tolerance;
  std::optional<std::size_t> iterations, init_iterations, path_length, cadence;
};

struct ExperimentArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repeats, threads;
};

void do_synth(const SynthArgs& a) {
  SynthParams p;
  p.dims = parse_dims(a.dims);
  p.n_cells = a.cells;
  p.membrane_width = a.membrane_width;
  p.noise_std = a.noise;
  p.seed = a.seed;
  const SynthVolume vol = synth_volume(p);
  save_grid(vol.conf, a.out);
  if (!a.gt.empty()) save_grid(vol.gt, a.gt);
}

void do_watershed(const StageArgs& a) { save_grid(watershed(load_image(a.conf)), a.out); }

void do_tree(const StageArgs& a) {
  const MergeTree tree = build_merge_tree(load_labels(a.superpixels), load_image(a.conf));
  write_json(tree_to_json(tree), a.out);
}

void do_features(const StageArgs& a) {
  const MergeTree tree = tree_from_json(read_json(a.tree));
  const LabelMap sp = load_labels(a.superpixels);
  const GridImage conf = load_image(a.conf);
  std::optional<GridImage> raw;
  if (!a.raw.empty()) raw = load_image(a.raw);
  const auto rows = round_to_f32(FeatureExtractor(tree, sp, conf, raw ? &*raw : nullptr).extract_all());
  save_grid(features_to_grid(rows), a.out);
}

void do_labels(const StageArgs& a) {
  const MergeTree tree = tree_from_json(read_json(a.tree));
  const LabelMap sp = load_labels(a.superpixels);
  LabelAssignment labels;
  if (!a.segments.empty()) {
    labels = labels_from_segments(tree, sp, segments_from_json(read_json(a.segments)), a.threshold);
  } else if (a.gt.empty()) {
    throw Error(Errc::InvalidArgument, "labels needs --gt or --segments");
  } else if (a.regime == "segments") {
    labels = labels_from_segments(tree, sp, segments_from_labels(load_labels(a.gt)), a.threshold);
  } else {
    labels = labels_from_full_gt(tree, sp, load_labels(a.gt));
  }
  write_json(labels_to_json(tree, labels.y), a.out);
}

void do_train(const TrainArgs& a) {
  TrainConfig config;
  if (!a.config.empty()) {
    const json j = read_json(a.config);
    config = train_config_from_json(j.contains("train") ? j.at("train") : j);
  }
  if (a.learning_rate) config.learning_rate = *a.learning_rate;
  if (a.tolerance) config.tolerance = *a.tolerance;
  if (a.iterations) config.max_iterations = *a.iterations;
  if (a.init_iterations) config.init_iterations = *a.init_iterations;
  if (a.path_length) config.path_length = *a.path_length;
  if (a.cadence) config.sigma_cadence = *a.cadence;
  config = train_config_from_json(train_config_to_json(config));  // range checks

  const json manifest = read_json(a.manifest);
  if (!manifest.contains("images") || !manifest.at("images").is_array()) {
    throw Error(Errc::Format, "manifest needs an \"images\" array");
  }
  struct Loaded {
    MergeTree tree;
    std::vector<FeatureVector> features;
    std::optional<NodeLabels> labels;
  };
  std::vector<Loaded> loaded;
  for (const auto& entry : manifest.at("images")) {
    if (!entry.contains("tree") || !entry.contains("features")) {
      throw Error(Errc::Format, "manifest image needs \"tree\" and \"features\"");
    }
    Loaded l{tree_from_json(read_json(entry.at("tree").get<std::string>())),
             features_from_grid(load_image(entry.at("features").get<std::string>())),
             std::nullopt};
    if (l.features.size() != l.tree.internal_nodes().size()) {
      throw Error(Errc::DimMismatch, "feature rows do not match the tree's internal nodes");
    }
    if (entry.contains("labels")) {
      l.labels = labels_from_json(l.tree, read_json(entry.at("labels").get<std::string>()));
    }
    loaded.push_back(std::move(l));
  }

  std::vector<TrainingImage> images;
  for (const auto& l : loaded) images.push_back({&l.tree, l.features, l.labels ? &*l.labels : nullptr});
  const Standardizer standardizer = fit_standardizer(images);
  const TrainingSet data = assemble_training_set(images, standardizer, config.path_length);
  const TrainResult result = train(config, data, parse_mode(a.mode));

  write_json(model_to_json(Model{result.w, result.sigmas, standardizer}), a.out);
  if (!a.trace.empty()) {
    std::ofstream f = open_out(a.trace);
    write_trace_csv(f, result.trace);
  }
}

void do_infer(const StageArgs& a) {
  const Model model = model_from_json(read_json(a.model));
  const MergeTree tree = tree_from_json(read_json(a.tree));
  const auto rows = features_from_grid(load_image(a.features));
  save_grid(segment_image(tree, rows, load_labels(a.superpixels), model), a.out);
}

void do_eval(const StageArgs& a, std::ostream& out) {
  const RandScores s = adapted_rand(load_labels(a.seg), load_labels(a.gt));
  out << std::fixed << std::setprecision(6) << s.error << ',' << s.precision << ',' << s.recall << '\n';
}

void do_experiment(const ExperimentArgs& a) {
  ExperimentConfig config;
  if (!a.config.empty()) config = experiment_config_from_json(read_json(a.config));
  if (a.seed) config.seed = *a.seed;
  if (a.repeats) config.repeats = *a.repeats;
  if (a.threads) config.threads = *a.threads;
  const ExperimentResult result = run_experiment(config);
  std::ofstream f = open_out(a.out);
  write_experiment_csv(f, result);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-supervised merge-tree segmentation pipeline", "sshmt"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  StageArgs stage;
  TrainArgs train_args;
  ExperimentArgs exp_args;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic confidence map and ground truth");
  synth->add_option("--dims", synth_args.dims, "nx,ny[,nz]")->capture_default_str();
  synth->add_option("--cells", synth_args.cells, "Number of Voronoi cells")->capture_default_str();
  synth->add_option("--membrane-width", synth_args.membrane_width)->capture_default_str();
  synth->add_option("--noise", synth_args.noise, "Gaussian noise std")->capture_default_str();
  synth->add_option("--seed", synth_args.seed)->capture_default_str();
  synth->add_option("-o,--out", synth_args.out, "Confidence map (GRD1)")->required();
  synth->add_option("--gt", synth_args.gt, "Ground-truth labels (GRD1)");

  auto* ws = app.add_subcommand("watershed", "Oversegment a confidence map");
  ws->add_option("--conf", stage.conf)->required();
  ws->add_option("-o,--out", stage.out)->required();

  auto* tree = app.add_subcommand("tree", "Build the merge tree over superpixels");
  tree->add_option("--conf", stage.conf)->required();
  tree->add_option("--superpixels", stage.superpixels)->required();
  tree->add_option("-o,--out", stage.out)->required();

  auto* feats = app.add_subcommand("features", "Extract clique features");
  feats->add_option("--conf", stage.conf)->required();
  feats->add_option("--superpixels", stage.superpixels)->required();
  feats->add_option("--tree", stage.tree)->required();
  feats->add_option("--raw", stage.raw, "Optional raw image");
  feats->add_option("-o,--out", stage.out)->required();

  auto* labels = app.add_subcommand("labels", "Derive clique labels from ground truth");
  labels->add_option("--tree", stage.tree)->required();
  labels->add_option("--superpixels", stage.superpixels)->required();
  auto* gt_opt = labels->add_option("--gt", stage.gt, "Ground-truth label map");
  labels->add_option("--segments", stage.segments, "JSON list of voxel-index lists")->excludes(gt_opt);
  labels->add_option("--regime", stage.regime, "full_gt or segments (with --gt)")
      ->check(CLI::IsMember({"full_gt", "segments"}))
      ->capture_default_str();
  labels->add_option("--threshold", stage.threshold, "Jaccard eligibility threshold")->capture_default_str();
  labels->add_option("-o,--out", stage.out)->required();

  auto* tr = app.add_subcommand("train", "Fit the boundary classifier");
  tr->add_option("--manifest", train_args.manifest, "JSON {images:[{tree,features,labels?}]}")->required();
  tr->add_option("--mode", train_args.mode)->check(CLI::IsMember({"hmt", "sshmt"}))->capture_default_str();
  tr->add_option("--config", train_args.config, "JSON training config");
  tr->add_option("--learning-rate", train_args.learning_rate);
  tr->add_option("--iterations", train_args.iterations);
  tr->add_option("--init-iterations", train_args.init_iterations);
  tr->add_option("--path-length", train_args.path_length);
  tr->add_option("--sigma-cadence", train_args.cadence);
  tr->add_option("--tolerance", train_args.tolerance);
  tr->add_option("-o,--out", train_args.out, "Model JSON")->required();
  tr->add_option("--trace", train_args.trace, "Objective trace CSV");

  auto* inf = app.add_subcommand("infer", "Segment an image with a trained model");
  inf->add_option("--model", stage.model)->required();
  inf->add_option("--tree", stage.tree)->required();
  inf->add_option("--features", stage.features)->required();
  inf->add_option("--superpixels", stage.superpixels)->required();
  inf->add_option("-o,--out", stage.out)->required();

  auto* ev = app.add_subcommand("eval", "Print are,precision,recall");
  ev->add_option("--seg", stage.seg)->required();
  ev->add_option("--gt", stage.gt)->required();

  auto* ex = app.add_subcommand("experiment", "Run the supervision sweep on synthetic data");
  ex->add_option("--config", exp_args.config, "JSON experiment config");
  ex->add_option("--seed", exp_args.seed);
  ex->add_option("--repeats", exp_args.repeats);
  ex->add_option("--threads", exp_args.threads);
  ex->add_option("-o,--out", exp_args.out, "CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (synth->parsed()) do_synth(synth_args);
    if (ws->parsed()) do_watershed(stage);
    if (tree->parsed()) do_tree(stage);
    if (feats->parsed()) do_features(stage);
    if (labels->parsed()) do_labels(stage);
    if (tr->parsed()) do_train(train_args);
    if (inf->parsed()) do_infer(stage);
    if (ev->parsed()) do_eval(stage, out);
    if (ex->parsed()) do_experiment(exp_args);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace sshmt::cli
