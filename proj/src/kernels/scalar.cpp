#include <cmath>

#include "smw/kernels.hpp"

namespace smw::kernels::scalar {
namespace {

void affine(const double* a, const double* x, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = b[i] - acc;
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void offset(const double* x, double alpha, const double* k, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + alpha * k[i];
}

double squared_norm(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (std::isnan(v)) return INFINITY;
    if (v > m) m = v;
  }
  return m;
}

}  // namespace

const Table kTable{affine, axpy, offset, squared_norm, max_abs};

}  // namespace smw::kernels::scalar
