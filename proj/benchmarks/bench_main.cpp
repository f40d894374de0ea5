#include <benchmark/benchmark.h>

#include <icc/expr.hpp>
#include <icc/icc.hpp>
#include <icc/model_io.hpp>

namespace {

// Chain of biased XORs: X0 := n, Xk := pa.X(k-1) xor n.
icc::Fcm xor_chain(int length) {
  icc::Fcm fcm;
  for (int i = 0; i < length; ++i) {
    std::string name = "X" + std::to_string(i);
    if (i == 0) {
      fcm.dag.add_node(name);
      fcm.mechanisms[name] = icc::parse("n");
    } else {
      std::string prev = "X" + std::to_string(i - 1);
      fcm.dag.add_node(name, {prev});
      fcm.mechanisms[name] = icc::parse("pa." + prev + " xor n");
    }
    fcm.noises.emplace(name, icc::NoiseSpec{icc::Bernoulli{0.3}});
  }
  fcm.target = "X" + std::to_string(length - 1);
  return fcm;
}

void bench_parse(benchmark::State& state) {
  const std::string src =
      "max(pa.a * 2 + 1, pa.b - 3) mod 7 + if(pa.a > pa.b, n, -n)";
  for (auto _ : state) benchmark::DoNotOptimize(icc::parse(src));
}
BENCHMARK(bench_parse);

void bench_eval(benchmark::State& state) {
  icc::ExprPtr e =
      icc::parse("max(pa.a * 2 + 1, pa.b - 3) mod 7 + if(pa.a > pa.b, n, -n)");
  std::map<std::string, icc::Value> env{{"a", icc::Value(int64_t{5})},
                                        {"b", icc::Value(int64_t{2})}};
  icc::Value noise(int64_t{1});
  for (auto _ : state) benchmark::DoNotOptimize(icc::eval(e, env, noise));
}
BENCHMARK(bench_eval);

void bench_exact_joint(benchmark::State& state) {
  icc::Fcm fcm = xor_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(icc::exact_joint(fcm));
}
BENCHMARK(bench_exact_joint)->Arg(6)->Arg(10)->Arg(14);

void bench_icc_shapley_exact(benchmark::State& state) {
  icc::IccRequest request;
  request.fcm = xor_chain(static_cast<int>(state.range(0)));
  request.measure = icc::Measure::Entropy;
  for (auto _ : state)
    benchmark::DoNotOptimize(icc::icc_shapley(request));
}
BENCHMARK(bench_icc_shapley_exact)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
