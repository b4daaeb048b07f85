#pragma once

// Dense-layer kernels used by forward and backward passes.
//
// Shapes (all row-major):
//   x  : rows × in        w  : in × out        b : out
//   z  : rows × out       dz : rows × out      dw : in × out     dx : rows × in
//
// `serial` holds the textbook triple loops and is the reference used by tests.
// `parallel` holds the vectorizable loop orders with OpenMP row partitioning; every output
// element accumulates its terms in the same order as the reference, so for finite inputs
// the two agree bit for bit regardless of thread count.

#include <cstddef>
#include <span>

namespace ruq::kernels {

struct Dims {
  std::size_t rows;
  std::size_t in;
  std::size_t out;
};

namespace serial {

// z = x·w + b
void affine(Dims d, std::span<const double> x, std::span<const double> w,
            std::span<const double> b, std::span<double> z);
// dw = xᵀ·dz
void weight_grad(Dims d, std::span<const double> x, std::span<const double> dz,
                 std::span<double> dw);
// db = column sums of dz
void bias_grad(Dims d, std::span<const double> dz, std::span<double> db);
// dx = dz·wᵀ
void input_grad(Dims d, std::span<const double> dz, std::span<const double> w,
                std::span<double> dx);

}  // namespace serial

namespace parallel {

void affine(Dims d, std::span<const double> x, std::span<const double> w,
            std::span<const double> b, std::span<double> z);
void weight_grad(Dims d, std::span<const double> x, std::span<const double> dz,
                 std::span<double> dw);
void bias_grad(Dims d, std::span<const double> dz, std::span<double> db);
void input_grad(Dims d, std::span<const double> dz, std::span<const double> w,
                std::span<double> dx);

}  // namespace parallel

// Multiply-adds below which the parallel kernels stay on the calling thread.
inline constexpr std::size_t kParallelWorkThreshold = 1u << 16;

}  // namespace ruq::kernels
