#include <benchmark/benchmark.h>

#include "ftdetect/features.hpp"
#include "ftdetect/network.hpp"
#include "ftdetect/tokenizer.hpp"
#include "ftdetect/vocabulary.hpp"
#include "synthetic.hpp"

using namespace ftdetect;

namespace {

struct Fixture {
  std::vector<CorpusEntry> entries;
  Vocabulary vocab;
  std::string big_file;

  Fixture() {
    const auto langs = testing::make_languages(8, 40, 1);
    entries = testing::generate_entries(langs, 50, 2);
    vocab = build_vocabulary(entries, langs.size());
    for (std::size_t i = 0; i < 40; ++i) big_file += entries[i].content;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Tokenize(benchmark::State& state) {
  const auto& text = fixture().big_file;
  for (auto _ : state) {
    auto s = tokenize_content(text);
    benchmark::DoNotOptimize(s.tokens.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_Featurize(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto v = featurize(f.big_file, f.vocab);
    benchmark::DoNotOptimize(v.values.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * f.big_file.size()));
}
BENCHMARK(BM_Featurize);

void BM_BuildVocabulary(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto v = build_vocabulary(f.entries, 8);
    benchmark::DoNotOptimize(v.dimension());
  }
}
BENCHMARK(BM_BuildVocabulary)->Unit(benchmark::kMillisecond);

Architecture arch_for(std::size_t width) {
  Architecture a;
  a.input_dim = fixture().vocab.dimension();
  a.hidden = {width, width * 4 / 5, width * 7 / 10};
  a.output_dim = 8;
  return a;
}

void BM_ForwardInfer(benchmark::State& state) {
  const auto params = init_parameters(arch_for(static_cast<std::size_t>(state.range(0))), 1);
  const auto x = featurize(fixture().entries[0].content, fixture().vocab);
  for (auto _ : state) {
    auto pass = forward(params, x.values, Mode::kInfer);
    benchmark::DoNotOptimize(pass.probabilities.data());
  }
}
BENCHMARK(BM_ForwardInfer)->Arg(64)->Arg(1000);

void BM_BatchGradient(benchmark::State& state) {
  const auto& f = fixture();
  const auto params = init_parameters(arch_for(static_cast<std::size_t>(state.range(0))), 1);
  auto batch = featurize_batch(std::span(f.entries).first(32), f.vocab).vectors;
  Rng rng(3);
  for (auto _ : state) {
    auto g = gradients(params, batch, Mode::kTrain, &rng);
    benchmark::DoNotOptimize(g.mean_loss);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * batch.size()));
}
BENCHMARK(BM_BatchGradient)->Arg(64)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
