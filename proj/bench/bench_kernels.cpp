// Serial reference kernels against their OpenMP versions.
#include "spomdp/kernels.hpp"
#include "spomdp/rng.hpp"

#include <benchmark/benchmark.h>

using namespace spomdp;

namespace {

struct Workload {
  ViewEncoding enc;
  std::vector<ViewTriple> triples;
  Matrix first, second;
};

Workload make_workload(int Y, std::size_t n) {
  Workload w;
  w.enc = ViewEncoding{Y, 3, 2};
  Rng rng(42);
  w.triples.resize(n);
  for (ViewTriple& t : w.triples) {
    t.s1 = static_cast<int>(rng.next() % static_cast<std::uint64_t>(w.enc.d1()));
    t.s2 = static_cast<int>(rng.next() % static_cast<std::uint64_t>(w.enc.d2()));
    t.s3 = static_cast<int>(rng.next() % static_cast<std::uint64_t>(w.enc.d3()));
  }
  w.first = Matrix::Random(Y, w.enc.d1());
  w.second = Matrix::Random(Y, w.enc.d2());
  return w;
}

template <bool Parallel>
void BM_Cooccurrence(benchmark::State& state) {
  const Workload w = make_workload(static_cast<int>(state.range(0)), 1u << 18);
  for (auto _ : state) {
    Matrix m = Parallel ? kernels::cooccurrence(w.triples, {}, 1, 2, w.enc.d1(), w.enc.d2())
                        : kernels::serial::cooccurrence(w.triples, {}, 1, 2, w.enc.d1(), w.enc.d2());
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.triples.size()));
}

template <bool Parallel>
void BM_ThirdMoment(benchmark::State& state) {
  const int Y = static_cast<int>(state.range(0));
  const Workload w = make_workload(Y, 1u << 16);
  for (auto _ : state) {
    Tensor3 t = Parallel ? kernels::third_moment(w.first, w.second, w.triples, {}, Y)
                         : kernels::serial::third_moment(w.first, w.second, w.triples, {}, Y);
    benchmark::DoNotOptimize(t.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.triples.size()));
}

template <bool Parallel>
void BM_Multilinear(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Tensor3 m3(d, d, d);
  Rng rng(3);
  for (double& x : m3.data()) x = rng.uniform();
  const Matrix W = Matrix::Random(d, 5);
  for (auto _ : state) {
    Tensor3 t = Parallel ? kernels::multilinear(m3, W) : kernels::serial::multilinear(m3, W);
    benchmark::DoNotOptimize(t.data().data());
  }
}

}  // namespace

BENCHMARK(BM_Cooccurrence<false>)->Name("cooccurrence/serial")->Arg(8)->Arg(16);
BENCHMARK(BM_Cooccurrence<true>)->Name("cooccurrence/omp")->Arg(8)->Arg(16);
BENCHMARK(BM_ThirdMoment<false>)->Name("third_moment/serial")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_ThirdMoment<true>)->Name("third_moment/omp")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Multilinear<false>)->Name("multilinear/serial")->Arg(16)->Arg(64);
BENCHMARK(BM_Multilinear<true>)->Name("multilinear/omp")->Arg(16)->Arg(64);

BENCHMARK_MAIN();
