#include "ruq/kernels.hpp"

#include <vector>

namespace ruq::kernels {

namespace serial {

void affine(Dims d, std::span<const double> x, std::span<const double> w,
            std::span<const double> b, std::span<double> z) {
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t j = 0; j < d.out; ++j) {
      double acc = b[j];
      for (std::size_t k = 0; k < d.in; ++k) acc += x[i * d.in + k] * w[k * d.out + j];
      z[i * d.out + j] = acc;
    }
  }
}

void weight_grad(Dims d, std::span<const double> x, std::span<const double> dz,
                 std::span<double> dw) {
  for (std::size_t k = 0; k < d.in; ++k) {
    for (std::size_t j = 0; j < d.out; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d.rows; ++i) acc += x[i * d.in + k] * dz[i * d.out + j];
      dw[k * d.out + j] = acc;
    }
  }
}

void bias_grad(Dims d, std::span<const double> dz, std::span<double> db) {
  for (std::size_t j = 0; j < d.out; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.rows; ++i) acc += dz[i * d.out + j];
    db[j] = acc;
  }
}

void input_grad(Dims d, std::span<const double> dz, std::span<const double> w,
                std::span<double> dx) {
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t k = 0; k < d.in; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d.out; ++j) acc += dz[i * d.out + j] * w[k * d.out + j];
      dx[i * d.in + k] = acc;
    }
  }
}

}  // namespace serial

namespace parallel {

namespace {

bool worth_splitting(Dims d) { return d.rows * d.in * d.out >= kParallelWorkThreshold; }

}  // namespace

// Zero multiplicands are skipped: adding a signed zero to a finite accumulator that did
// not start at -0 leaves it unchanged, so this keeps bitwise agreement with the reference
// while exploiting ReLU sparsity.

void affine(Dims d, std::span<const double> x, std::span<const double> w,
            std::span<const double> b, std::span<double> z) {
  const double* xp = x.data();
  const double* wp = w.data();
  const double* bp = b.data();
  double* zp = z.data();
  const long rows = static_cast<long>(d.rows);
#pragma omp parallel for schedule(static) if (worth_splitting(d))
  for (long i = 0; i < rows; ++i) {
    double* zr = zp + i * d.out;
    for (std::size_t j = 0; j < d.out; ++j) zr[j] = bp[j];
    const double* xr = xp + i * d.in;
    for (std::size_t k = 0; k < d.in; ++k) {
      const double a = xr[k];
      if (a == 0.0) continue;
      const double* wr = wp + k * d.out;
      for (std::size_t j = 0; j < d.out; ++j) zr[j] += a * wr[j];
    }
  }
}

void weight_grad(Dims d, std::span<const double> x, std::span<const double> dz,
                 std::span<double> dw) {
  const double* xp = x.data();
  const double* dzp = dz.data();
  double* dwp = dw.data();
  const long in = static_cast<long>(d.in);
#pragma omp parallel for schedule(static) if (worth_splitting(d))
  for (long k = 0; k < in; ++k) {
    double* dwr = dwp + k * d.out;
    for (std::size_t j = 0; j < d.out; ++j) dwr[j] = 0.0;
    for (std::size_t i = 0; i < d.rows; ++i) {
      const double a = xp[i * d.in + k];
      if (a == 0.0) continue;
      const double* dzr = dzp + i * d.out;
      for (std::size_t j = 0; j < d.out; ++j) dwr[j] += a * dzr[j];
    }
  }
}

void bias_grad(Dims d, std::span<const double> dz, std::span<double> db) {
  for (std::size_t j = 0; j < d.out; ++j) db[j] = 0.0;
  for (std::size_t i = 0; i < d.rows; ++i) {
    const double* dzr = dz.data() + i * d.out;
    for (std::size_t j = 0; j < d.out; ++j) db[j] += dzr[j];
  }
}

void input_grad(Dims d, std::span<const double> dz, std::span<const double> w,
                std::span<double> dx) {
  std::vector<double> wt(d.in * d.out);
  for (std::size_t k = 0; k < d.in; ++k) {
    for (std::size_t j = 0; j < d.out; ++j) wt[j * d.in + k] = w[k * d.out + j];
  }
  const double* dzp = dz.data();
  const double* wtp = wt.data();
  double* dxp = dx.data();
  const long rows = static_cast<long>(d.rows);
#pragma omp parallel for schedule(static) if (worth_splitting(d))
  for (long i = 0; i < rows; ++i) {
    double* dxr = dxp + i * d.in;
    for (std::size_t k = 0; k < d.in; ++k) dxr[k] = 0.0;
    const double* dzr = dzp + i * d.out;
    for (std::size_t j = 0; j < d.out; ++j) {
      const double g = dzr[j];
      if (g == 0.0) continue;
      const double* wr = wtp + j * d.in;
      for (std::size_t k = 0; k < d.in; ++k) dxr[k] += g * wr[k];
    }
  }
}

}  // namespace parallel

}  // namespace ruq::kernels
