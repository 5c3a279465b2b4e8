#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qknots::kernels {

/// A diagram reduced to what the state sum needs: arcs compacted to 0..arc_count-1.
struct LoopProblem {
    std::vector<std::array<std::uint8_t, 4>> crossings;
    int arc_count = 0;
    int free_loops = 0;
};

/// counts[a][loops] = number of states with `a` A-smoothings and `loops` loops.
using StateHistogram = std::vector<std::vector<std::int64_t>>;

/// Loop count of one state; crossing i takes the B-smoothing when bit (N-1-i) of
/// `index` is set.
int loops_of_state(const LoopProblem& p, std::uint64_t index);

StateHistogram state_histogram_serial(const LoopProblem& p);
/// OpenMP over disjoint index ranges with per-thread histograms. Falls back to the
/// serial kernel when built without OpenMP. `threads` <= 0 uses the runtime default.
StateHistogram state_histogram_parallel(const LoopProblem& p, int threads = 0);

/// C = A B for row-major A (m x k), B (k x n). Every entry sums k in index order,
/// so the serial and parallel kernels agree bit for bit.
void matmul_serial(const std::complex<double>* a, const std::complex<double>* b, std::complex<double>* c,
                   std::size_t m, std::size_t k, std::size_t n);
void matmul_parallel(const std::complex<double>* a, const std::complex<double>* b, std::complex<double>* c,
                     std::size_t m, std::size_t k, std::size_t n, int threads = 0);

bool have_openmp() noexcept;

}  // namespace qknots::kernels
