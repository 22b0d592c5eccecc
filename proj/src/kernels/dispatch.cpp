#include <atomic>
#include <cstdlib>
#include <cstring>

#include "smw/error.hpp"
#include "smw/kernels.hpp"

namespace smw::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("SMW_KERNELS"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  return supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{&table(detect())};
  return t;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::DimensionMismatch, "kernel operand lengths differ");
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(SMW_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& table(Isa isa) {
#if defined(SMW_HAVE_AVX2)
  if (isa == Isa::Avx2 && supported(Isa::Avx2)) return avx2::kTable;
#endif
  (void)isa;
  return scalar::kTable;
}

Isa active() { return current().load() == &scalar::kTable ? Isa::Scalar : Isa::Avx2; }

void force(Isa isa) { current().store(&table(isa)); }

void reset() { current().store(&table(detect())); }

void affine(std::span<const double> a, std::span<const double> x, std::span<const double> b, std::span<double> y) {
  check_lengths(a.size(), x.size() * x.size());
  check_lengths(b.size(), x.size());
  check_lengths(y.size(), x.size());
  current().load()->affine(a.data(), x.data(), b.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_lengths(x.size(), y.size());
  current().load()->axpy(alpha, x.data(), y.data(), x.size());
}

void offset(std::span<const double> x, double alpha, std::span<const double> k, std::span<double> out) {
  check_lengths(x.size(), k.size());
  check_lengths(x.size(), out.size());
  current().load()->offset(x.data(), alpha, k.data(), out.data(), x.size());
}

double squared_norm(std::span<const double> x) { return current().load()->squared_norm(x.data(), x.size()); }

double max_abs(std::span<const double> x) { return current().load()->max_abs(x.data(), x.size()); }

}  // namespace smw::kernels
