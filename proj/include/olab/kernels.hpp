#pragma once

// Dense double-precision inner loops used by the dynamic-programming
// evaluators, the ridge solver and the linear policies. Every kernel has a
// scalar reference implementation; an AVX2/FMA variant is selected at
// runtime when the CPU supports it.
//
// The AVX2 variants reassociate sums, so results agree with the scalar
// reference to rounding error, not bitwise. Within one process the backend
// never changes unless set_backend() is called, so runs are reproducible.

#include <cstddef>
#include <span>
#include <string_view>

namespace olab::kernels {

enum class Backend { Scalar, Avx2 };

bool backend_supported(Backend b);
Backend active_backend();
// Throws std::invalid_argument when the backend is not supported here.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

double dot(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// y = M x for a row-major rows x cols matrix.
void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
double sum(std::span<const double> a);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
double sum(const double* a, std::size_t n);
}  // namespace scalar

#if defined(OLAB_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
double sum(const double* a, std::size_t n);
}  // namespace avx2
#endif

}  // namespace olab::kernels
