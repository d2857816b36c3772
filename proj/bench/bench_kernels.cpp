// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "echonet/graph.hpp"
#include "echonet/kernels.hpp"

namespace {

using namespace echonet;

EngagementGraph random_graph(int n, double avg_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("u" + std::to_string(i));
  std::vector<WeightedEdge> edges;
  const auto m = static_cast<std::size_t>(avg_degree * n);
  for (std::size_t e = 0; e < m; ++e) edges.push_back({names[node(rng)], names[node(rng)], 3});
  return EngagementGraph(Semantics::Mention, names, edges);
}

const EngagementGraph& graph_of(int n) {
  static std::map<int, EngagementGraph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, random_graph(n, 8.0, 42)).first;
  return it->second;
}

template <auto Kernel>
void directed_kernel(benchmark::State& state) {
  const auto& g = graph_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(g.out_adjacency()));
  state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void undirected_kernel(benchmark::State& state) {
  const auto adj = graph_of(static_cast<int>(state.range(0))).undirected();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(adj));
}

template <bool Parallel>
void assign_nearest(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), dim = 300, k = 3;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<double> points(n * dim), centers(k * dim);
  for (auto& x : points) x = nd(rng);
  for (auto& x : centers) x = nd(rng);
  std::vector<int> labels(n);
  std::vector<double> dist2(n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::assign_nearest_parallel(points, centers, dim, labels, dist2);
    else kernels::assign_nearest_serial(points, centers, dim, labels, dist2);
    benchmark::DoNotOptimize(labels.data());
  }
}

}  // namespace

BENCHMARK(directed_kernel<kernels::betweenness_serial>)->Name("betweenness/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(directed_kernel<kernels::betweenness_parallel>)->Name("betweenness/parallel")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(directed_kernel<kernels::harmonic_closeness_serial>)->Name("closeness/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(directed_kernel<kernels::harmonic_closeness_parallel>)->Name("closeness/parallel")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(undirected_kernel<kernels::max_eccentricity_serial>)->Name("diameter/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(undirected_kernel<kernels::max_eccentricity_parallel>)->Name("diameter/parallel")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(undirected_kernel<kernels::triangles_per_node_serial>)->Name("triangles/serial")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(undirected_kernel<kernels::triangles_per_node_parallel>)->Name("triangles/parallel")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(assign_nearest<false>)->Name("assign_nearest/serial")->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(assign_nearest<true>)->Name("assign_nearest/parallel")->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
