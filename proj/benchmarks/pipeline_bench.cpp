#include <benchmark/benchmark.h>

#include <random>

#include "sshmt/features.hpp"
#include "sshmt/inference.hpp"
#include "sshmt/learner.hpp"
#include "sshmt/pipeline.hpp"
#include "sshmt/synth.hpp"
#include "sshmt/watershed.hpp"

namespace {

using namespace sshmt;

GridImage synth_conf(std::uint32_t side) {
  SynthParams p;
  p.dims = {side, side, 1};
  p.n_cells = side / 5;
  p.noise_std = 0.2;
  p.seed = 11;
  return synth_volume(p).conf;
}

void BM_Watershed(benchmark::State& state) {
  const GridImage conf = synth_conf(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(watershed(conf));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(conf.size()));
}
BENCHMARK(BM_Watershed)->Arg(64)->Arg(128)->Arg(256);

void BM_MergeTree(benchmark::State& state) {
  const GridImage conf = synth_conf(static_cast<std::uint32_t>(state.range(0)));
  const LabelMap sp = watershed(conf);
  for (auto _ : state) benchmark::DoNotOptimize(build_merge_tree(sp, conf));
}
BENCHMARK(BM_MergeTree)->Arg(64)->Arg(128)->Arg(256);

void BM_Features(benchmark::State& state) {
  const GridImage conf = synth_conf(static_cast<std::uint32_t>(state.range(0)));
  const LabelMap sp = watershed(conf);
  const MergeTree tree = build_merge_tree(sp, conf);
  for (auto _ : state) benchmark::DoNotOptimize(FeatureExtractor(tree, sp, conf).extract_all());
}
BENCHMARK(BM_Features)->Arg(64)->Arg(128)->Arg(256);

void BM_ObjectiveGrad(benchmark::State& state) {
  std::vector<PreparedImage> images;
  for (int i = 0; i < 4; ++i) images.push_back(prepare_image(synth_conf(64)));
  std::vector<TrainingImage> parts;
  for (const auto& img : images) parts.push_back({&img.tree, img.features, nullptr});
  TrainingSet data = assemble_training_set(parts, fit_standardizer(parts), 3);
  for (std::size_t r = 0; r < data.samples.rows(); r += 4) {
    data.supervised.push_back(r);
    data.labels.push_back(static_cast<double>(r % 8 == 0));
  }
  std::vector<double> w(kFeatureDim, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(objective_grad(w, Sigmas{0.5, 0.5}, data));
  state.counters["paths"] = static_cast<double>(data.n_paths());
}
BENCHMARK(BM_ObjectiveGrad);

void BM_GreedyInference(benchmark::State& state) {
  const PreparedImage img = prepare_image(synth_conf(static_cast<std::uint32_t>(state.range(0))));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::vector<double> p(img.tree.size(), 1.0);
  for (NodeId id : img.tree.internal_nodes()) p[id] = u(rng);
  for (auto _ : state) {
    const auto z = greedy_label(img.tree, node_potentials(img.tree, p));
    benchmark::DoNotOptimize(segmentation_from_z(img.tree, z, img.superpixels));
  }
}
BENCHMARK(BM_GreedyInference)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
