#include <benchmark/benchmark.h>

#include "lmk/cascade.hpp"
#include "lmk/model_io.hpp"
#include "lmk/rng.hpp"

using namespace lmk;

namespace {

GrayImage noise_image(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  GrayImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y) = static_cast<std::uint8_t>(rng.uniform(0.0, 256.0));
    }
  }
  return img;
}

CascadeModel random_model(int n_stages, int n_trees, int depth, std::uint64_t seed) {
  Rng rng(seed);
  CascadeModel model;
  model.landmark = "bench";
  model.scale_decay = 0.7f;
  for (int s = 0; s < n_stages; ++s) {
    BoostedEnsemble ens;
    ens.shrinkage = 0.5f;
    for (int t = 0; t < n_trees; ++t) {
      RegressionTree tree;
      tree.depth = depth;
      const std::size_t leaves = std::size_t{1} << depth;
      for (std::size_t i = 0; i + 1 < leaves; ++i) {
        tree.tests.push_back(BinaryTestParams{
            quantize_unit(rng.uniform(-1, 1)), quantize_unit(rng.uniform(-1, 1)),
            quantize_unit(rng.uniform(-1, 1)), quantize_unit(rng.uniform(-1, 1))});
      }
      for (std::size_t i = 0; i < leaves; ++i) {
        tree.leaves.push_back(Vec2f{static_cast<float>(rng.uniform(-0.05, 0.05)),
                                    static_cast<float>(rng.uniform(-0.05, 0.05))});
      }
      ens.trees.push_back(std::move(tree));
    }
    model.stages.push_back(std::move(ens));
  }
  return model;
}

std::vector<TrainSample> training_samples(const GrayImage& img, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TrainSample> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    samples.push_back(TrainSample{
        &img, Region{rng.uniform(40, 90), rng.uniform(40, 90), rng.uniform(20, 60)},
        Vec2{rng.uniform(-1, 1), rng.uniform(-1, 1)}});
  }
  return samples;
}

void BM_SamplePixel(benchmark::State& state) {
  const GrayImage img = noise_image(128, 128, 1);
  const Region region{64, 64, 100};
  const NormLocation loc{0.37, -0.61};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_pixel(img, region, loc));
  }
}
BENCHMARK(BM_SamplePixel);

void BM_TraverseDepth9(benchmark::State& state) {
  const CascadeModel model = random_model(1, 1, 9, 2);
  const GrayImage img = noise_image(128, 128, 3);
  const Region region{64, 64, 100};
  for (auto _ : state) {
    benchmark::DoNotOptimize(traverse(model.stages[0].trees[0], img, region));
  }
}
BENCHMARK(BM_TraverseDepth9);

// Reference deployment shape: 6 stages of 20 depth-9 trees.
void BM_EstimateOnce(benchmark::State& state) {
  const CascadeModel model = random_model(6, 20, 9, 4);
  const GrayImage img = noise_image(256, 256, 5);
  const Region region{128, 128, 100};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_once(model, img, region));
  }
}
BENCHMARK(BM_EstimateOnce);

void BM_EstimatePerturbed(benchmark::State& state) {
  const CascadeModel model = random_model(6, 20, 9, 6);
  const GrayImage img = noise_image(256, 256, 7);
  const Region region{128, 128, 100};
  PerturbationPolicy policy;
  policy.n_perturbations = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate(model, img, region, policy));
  }
}
BENCHMARK(BM_EstimatePerturbed)->Arg(1)->Arg(7)->Arg(15);

void BM_EncodeModel(benchmark::State& state) {
  const CascadeModel model = random_model(6, 20, 9, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_model(model));
  }
}
BENCHMARK(BM_EncodeModel);

void BM_DecodeModel(benchmark::State& state) {
  const auto bytes = encode_model(random_model(6, 20, 9, 9));
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_model(bytes));
  }
}
BENCHMARK(BM_DecodeModel);

void BM_GrowTree(benchmark::State& state) {
  const GrayImage img = noise_image(128, 128, 10);
  const auto samples = training_samples(img, 1000, 11);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(grow_tree(samples, 5, 64, rng));
  }
}
BENCHMARK(BM_GrowTree)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
