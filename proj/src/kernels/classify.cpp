#include "qknots/errors.hpp"
#include "qknots/quantum_knot.hpp"

#include <exception>

#ifdef QKNOTS_HAVE_OPENMP
#include <omp.h>
#endif

namespace qknots {

namespace {

void check_nodes(const FlatDiagram& f) {
    if (f.node_count() > 30) throw CapExceeded("too many flat nodes to enumerate resolutions");
}

BracketOptions serial_bracket(BracketOptions opts) {
    opts.parallel = false;
    return opts;
}

}  // namespace

std::vector<KnotClassKey> classify_resolutions_serial(const FlatDiagram& f, const BracketOptions& opts) {
    check_nodes(f);
    const std::uint64_t total = std::uint64_t{1} << f.node_count();
    const BracketOptions inner = serial_bracket(opts);
    std::vector<KnotClassKey> keys(total);
    for (std::uint64_t i = 0; i < total; ++i) keys[i] = class_key(resolve_index(f, i), inner);
    return keys;
}

std::vector<KnotClassKey> classify_resolutions_parallel(const FlatDiagram& f, const BracketOptions& opts,
                                                        int threads) {
#ifdef QKNOTS_HAVE_OPENMP
    check_nodes(f);
    const std::int64_t total = std::int64_t{1} << f.node_count();
    const BracketOptions inner = serial_bracket(opts);
    std::vector<KnotClassKey> keys(total);
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    // Exceptions may not escape an OpenMP region; keep the first one and rethrow.
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
    for (std::int64_t i = 0; i < total; ++i) {
        try {
            keys[i] = class_key(resolve_index(f, static_cast<std::uint64_t>(i)), inner);
        } catch (...) {
#pragma omp critical(qknots_classify_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return keys;
#else
    (void)threads;
    return classify_resolutions_serial(f, opts);
#endif
}

}  // namespace qknots
