#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "olab/kernels.hpp"

namespace olab::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*, double*);
  double (*sum)(const double*, std::size_t);
};

constexpr Table kScalar{scalar::dot, scalar::axpy, scalar::gemv, scalar::sum};
#if defined(OLAB_HAVE_AVX2)
constexpr Table kAvx2{avx2::dot, avx2::axpy, avx2::gemv, avx2::sum};
#endif

bool cpu_has_avx2() {
#if defined(OLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  // OLAB_KERNELS=scalar pins the reference path, e.g. for cross-machine diffs.
  if (const char* env = std::getenv("OLAB_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    return Backend::Scalar;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

const Table& table() {
#if defined(OLAB_HAVE_AVX2)
  if (current().load(std::memory_order_relaxed) == Backend::Avx2) return kAvx2;
#endif
  return kScalar;
}

}  // namespace

bool backend_supported(Backend b) {
  if (b == Backend::Scalar) return true;
  return cpu_has_avx2();
}

Backend active_backend() { return current().load(); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw std::invalid_argument("kernel backend not supported on this CPU: " + std::string(backend_name(b)));
  }
  current().store(b);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return table().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  table().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  assert(m.size() == rows * cols && x.size() == cols && y.size() == rows);
  table().gemv(m.data(), rows, cols, x.data(), y.data());
}

double sum(std::span<const double> a) { return table().sum(a.data(), a.size()); }

}  // namespace olab::kernels
