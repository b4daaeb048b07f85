// Serial reference kernels against their OpenMP counterparts on dense-layer shapes.
// Args: rows, in, out, threads (threads only affects the parallel variant).

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "ruq/kernels.hpp"
#include "ruq/likelihoods.hpp"
#include "ruq/network.hpp"
#include "ruq/rng.hpp"

namespace k = ruq::kernels;

namespace {

struct Buffers {
  k::Dims d;
  std::vector<double> x, w, b, z, dz, dw, db, dx;

  explicit Buffers(const benchmark::State& s)
      : d{static_cast<std::size_t>(s.range(0)), static_cast<std::size_t>(s.range(1)),
          static_cast<std::size_t>(s.range(2))},
        x(d.rows * d.in), w(d.in * d.out), b(d.out), z(d.rows * d.out), dz(d.rows * d.out),
        dw(d.in * d.out), db(d.out), dx(d.rows * d.in) {
    ruq::Rng rng(1);
    for (auto* v : {&x, &w, &b, &dz}) {
      for (double& e : *v) e = rng.normal();
    }
  }
};

void set_threads(const benchmark::State& s) { omp_set_num_threads(static_cast<int>(s.range(3))); }

void count(benchmark::State& s, const k::Dims& d) {
  s.SetItemsProcessed(static_cast<std::int64_t>(s.iterations() * d.rows * d.in * d.out));
}

void BM_affine_serial(benchmark::State& s) {
  Buffers B(s);
  for (auto _ : s) {
    k::serial::affine(B.d, B.x, B.w, B.b, B.z);
    benchmark::DoNotOptimize(B.z.data());
  }
  count(s, B.d);
}

void BM_affine_parallel(benchmark::State& s) {
  set_threads(s);
  Buffers B(s);
  for (auto _ : s) {
    k::parallel::affine(B.d, B.x, B.w, B.b, B.z);
    benchmark::DoNotOptimize(B.z.data());
  }
  count(s, B.d);
}

void BM_weight_grad_serial(benchmark::State& s) {
  Buffers B(s);
  for (auto _ : s) {
    k::serial::weight_grad(B.d, B.x, B.dz, B.dw);
    benchmark::DoNotOptimize(B.dw.data());
  }
  count(s, B.d);
}

void BM_weight_grad_parallel(benchmark::State& s) {
  set_threads(s);
  Buffers B(s);
  for (auto _ : s) {
    k::parallel::weight_grad(B.d, B.x, B.dz, B.dw);
    benchmark::DoNotOptimize(B.dw.data());
  }
  count(s, B.d);
}

void BM_input_grad_serial(benchmark::State& s) {
  Buffers B(s);
  for (auto _ : s) {
    k::serial::input_grad(B.d, B.dz, B.w, B.dx);
    benchmark::DoNotOptimize(B.dx.data());
  }
  count(s, B.d);
}

void BM_input_grad_parallel(benchmark::State& s) {
  set_threads(s);
  Buffers B(s);
  for (auto _ : s) {
    k::parallel::input_grad(B.d, B.dz, B.w, B.dx);
    benchmark::DoNotOptimize(B.dx.data());
  }
  count(s, B.d);
}

// One training step's backward pass on the 1D benchmark network (4 × 100, batch 128).
void BM_backward_network(benchmark::State& s) {
  omp_set_num_threads(static_cast<int>(s.range(0)));
  const ruq::Network net = ruq::init_he({1, 4, 100, 2}, 3);
  ruq::Rng rng(4);
  ruq::Tensor2 x(128, 1), y(128, 1);
  for (double& v : x.values()) v = rng.normal();
  for (double& v : y.values()) v = rng.normal();
  for (auto _ : s) {
    auto g = ruq::backward(net, x, y, {ruq::Family::laplace}, false);
    benchmark::DoNotOptimize(g.loss);
  }
}

void shapes(benchmark::internal::Benchmark* b) {
  for (int threads : {1, 2, 4}) {
    b->Args({128, 100, 100, threads});
    b->Args({512, 100, 100, threads});
    b->Args({4096, 256, 256, threads});
  }
  b->ArgNames({"rows", "in", "out", "threads"});
}

void serial_shapes(benchmark::internal::Benchmark* b) {
  b->Args({128, 100, 100, 1});
  b->Args({512, 100, 100, 1});
  b->Args({4096, 256, 256, 1});
  b->ArgNames({"rows", "in", "out", "threads"});
}

}  // namespace

BENCHMARK(BM_affine_serial)->Apply(serial_shapes);
BENCHMARK(BM_affine_parallel)->Apply(shapes)->UseRealTime();
BENCHMARK(BM_weight_grad_serial)->Apply(serial_shapes);
BENCHMARK(BM_weight_grad_parallel)->Apply(shapes)->UseRealTime();
BENCHMARK(BM_input_grad_serial)->Apply(serial_shapes);
BENCHMARK(BM_input_grad_parallel)->Apply(shapes)->UseRealTime();
BENCHMARK(BM_backward_network)->Arg(1)->Arg(2)->ArgName("threads")->UseRealTime();

BENCHMARK_MAIN();
