#include <random>

#include <benchmark/benchmark.h>

#include "zerr/adversim.hpp"
#include "zerr/channel.hpp"
#include "zerr/composition.hpp"
#include "zerr/listcodes.hpp"

using namespace zerr;

namespace {

std::vector<Ambiguity> uniform(std::size_t n, std::uint64_t a) {
  return std::vector<Ambiguity>(n, Ambiguity::finite(a));
}

// Dense random channel whose witness sits deep in the search.
ChannelMatrix hard_matrix() {
  std::mt19937_64 rng(3);
  Channel c;
  const std::size_t nin = 22, nout = 40;
  for (std::size_t j = 0; j < nout; ++j) c.outputs.push_back("y" + std::to_string(j));
  std::bernoulli_distribution coin(0.8);
  for (std::size_t i = 0; i < nin; ++i) {
    c.inputs.push_back("x" + std::to_string(i));
    std::vector<std::string> row;
    for (std::size_t j = 0; j < nout; ++j)
      if (coin(rng)) row.push_back(c.outputs[j]);
    c.relation.push_back(row);
  }
  return compile(c);
}

void BM_ambiguity(benchmark::State& state) {
  const auto m = hard_matrix();
  for (auto _ : state) benchmark::DoNotOptimize(ambiguity(m).value);
}
void BM_ambiguity_serial(benchmark::State& state) {
  const auto m = hard_matrix();
  for (auto _ : state) benchmark::DoNotOptimize(ambiguity_serial(m).value);
}

void BM_brute_force_parallel(benchmark::State& state) {
  const auto amb = uniform(5, 4);
  const auto s = threshold_structure(5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_parallel(amb, s, 1'000'000'000));
}
void BM_brute_force_parallel_serial(benchmark::State& state) {
  const auto amb = uniform(5, 4);
  const auto s = threshold_structure(5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_parallel_serial(amb, s, 1'000'000'000));
}

void BM_empirical(benchmark::State& state) {
  const auto amb = uniform(5, 4);
  const auto s = threshold_structure(5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_ambiguity(amb, s, 11));
}
void BM_empirical_serial(benchmark::State& state) {
  const auto amb = uniform(5, 4);
  const auto s = threshold_structure(5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_ambiguity_serial(amb, s, 11));
}

ListCode sample_code() {
  return *find_list_code(make_list_channel({2, 4}), 2, 6, 4).code;
}
void BM_verify_list_code(benchmark::State& state) {
  const auto code = sample_code();
  for (auto _ : state) benchmark::DoNotOptimize(verify_list_code(code).ok);
}
void BM_verify_list_code_serial(benchmark::State& state) {
  const auto code = sample_code();
  for (auto _ : state) benchmark::DoNotOptimize(verify_list_code_serial(code).ok);
}

}  // namespace

BENCHMARK(BM_ambiguity)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ambiguity_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_brute_force_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_brute_force_parallel_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_empirical)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_empirical_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_list_code)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_list_code_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
