#include <complex>

#include "qknots/kernels.hpp"

#ifdef QKNOTS_HAVE_OPENMP
#include <omp.h>
#endif

namespace qknots::kernels {

namespace {

inline void row(const std::complex<double>* a, const std::complex<double>* b, std::complex<double>* c, std::size_t i,
                std::size_t k, std::size_t n) {
    std::complex<double>* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        const std::complex<double> av = a[i * k + t];
        const std::complex<double>* bt = b + t * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += av * bt[j];
    }
}

}  // namespace

void matmul_serial(const std::complex<double>* a, const std::complex<double>* b, std::complex<double>* c,
                   std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) row(a, b, c, i, k, n);
}

void matmul_parallel(const std::complex<double>* a, const std::complex<double>* b, std::complex<double>* c,
                     std::size_t m, std::size_t k, std::size_t n, int threads) {
#ifdef QKNOTS_HAVE_OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
    const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for num_threads(nt) schedule(static) if (m * k * n > 4096)
    for (std::int64_t i = 0; i < rows; ++i) row(a, b, c, static_cast<std::size_t>(i), k, n);
#else
    (void)threads;
    matmul_serial(a, b, c, m, k, n);
#endif
}

}  // namespace qknots::kernels
