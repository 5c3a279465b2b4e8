#include "qknots/kernels.hpp"

#include <algorithm>

#ifdef QKNOTS_HAVE_OPENMP
#include <omp.h>
#endif

namespace qknots::kernels {

namespace {

constexpr int kMaxArcs = 64;

int find(std::array<std::uint8_t, kMaxArcs>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

StateHistogram empty_histogram(const LoopProblem& p) {
    const std::size_t n = p.crossings.size();
    return StateHistogram(n + 1, std::vector<std::int64_t>(p.arc_count + p.free_loops + 2, 0));
}

void accumulate(const LoopProblem& p, std::uint64_t begin, std::uint64_t end, StateHistogram& h) {
    const int n = static_cast<int>(p.crossings.size());
    for (std::uint64_t s = begin; s < end; ++s) {
        const int b = __builtin_popcountll(s);
        h[n - b][loops_of_state(p, s)] += 1;
    }
}

}  // namespace

int loops_of_state(const LoopProblem& p, std::uint64_t index) {
    const int n = static_cast<int>(p.crossings.size());
    std::array<std::uint8_t, kMaxArcs> parent;
    for (int i = 0; i < p.arc_count; ++i) parent[i] = static_cast<std::uint8_t>(i);
    int classes = p.arc_count;
    auto unite = [&](int x, int y) {
        x = find(parent, x);
        y = find(parent, y);
        if (x != y) {
            parent[x] = static_cast<std::uint8_t>(y);
            --classes;
        }
    };
    for (int i = 0; i < n; ++i) {
        const auto& c = p.crossings[i];
        if ((index >> (n - 1 - i)) & 1U) {
            unite(c[0], c[3]);
            unite(c[1], c[2]);
        } else {
            unite(c[0], c[1]);
            unite(c[2], c[3]);
        }
    }
    return classes + p.free_loops;
}

StateHistogram state_histogram_serial(const LoopProblem& p) {
    StateHistogram h = empty_histogram(p);
    accumulate(p, 0, std::uint64_t{1} << p.crossings.size(), h);
    return h;
}

StateHistogram state_histogram_parallel(const LoopProblem& p, int threads) {
#ifdef QKNOTS_HAVE_OPENMP
    const std::uint64_t total = std::uint64_t{1} << p.crossings.size();
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    std::vector<StateHistogram> partial(nthreads, empty_histogram(p));
#pragma omp parallel num_threads(nthreads)
    {
        const int t = omp_get_thread_num();
        const int team = omp_get_num_threads();
        const std::uint64_t chunk = (total + team - 1) / team;
        const std::uint64_t begin = std::min(total, chunk * t);
        const std::uint64_t end = std::min(total, begin + chunk);
        accumulate(p, begin, end, partial[t]);
    }
    StateHistogram h = empty_histogram(p);
    for (const auto& part : partial)
        for (std::size_t a = 0; a < h.size(); ++a)
            for (std::size_t l = 0; l < h[a].size(); ++l) h[a][l] += part[a][l];
    return h;
#else
    (void)threads;
    return state_histogram_serial(p);
#endif
}

bool have_openmp() noexcept {
#ifdef QKNOTS_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace qknots::kernels
