#pragma once

#include <cstddef>
#include <span>

// Vector kernels behind the integrator. Each has a portable scalar
// reference and an AVX2+FMA variant; the variant is chosen at runtime
// from CPUID, and SMW_KERNELS=scalar forces the reference path.

namespace smw::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

struct Table {
  // y = b - A x, A row-major n x n.
  void (*affine)(const double* a, const double* x, const double* b, double* y, std::size_t n);
  // y += alpha x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = x + alpha k
  void (*offset)(const double* x, double alpha, const double* k, double* out, std::size_t n);
  double (*squared_norm)(const double* x, std::size_t n);
  // max |x_i|; NaN propagates as +inf.
  double (*max_abs)(const double* x, std::size_t n);
};

bool supported(Isa isa);
/// The table for `isa`; Avx2 falls back to Scalar when unsupported.
const Table& table(Isa isa);

Isa active();
/// Override the runtime choice (tests, benchmarks).
void force(Isa isa);
/// Back to CPUID/environment selection.
void reset();

// Span front ends over the active table.
void affine(std::span<const double> a, std::span<const double> x, std::span<const double> b, std::span<double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void offset(std::span<const double> x, double alpha, std::span<const double> k, std::span<double> out);
double squared_norm(std::span<const double> x);
double max_abs(std::span<const double> x);

namespace scalar {
extern const Table kTable;
}
#if defined(SMW_HAVE_AVX2)
namespace avx2 {
extern const Table kTable;
}
#endif

}  // namespace smw::kernels
