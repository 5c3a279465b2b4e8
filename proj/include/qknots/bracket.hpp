#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qknots/diagram.hpp"
#include "qknots/kernels.hpp"
#include "qknots/laurent.hpp"

namespace qknots {

inline constexpr int kDefaultCrossingCap = 24;
/// Largest cap the state-sum kernel accepts (64-bit state index, 64 compact arcs).
inline constexpr int kMaxStateSumCrossings = 31;

struct BracketOptions {
    int crossing_cap = kDefaultCrossingCap;
    bool parallel = true;
    /// Above the cap, use the frontier engine instead of refusing.
    bool frontier_fallback = false;
    /// Frontier engine limit on simultaneously open arcs.
    int frontier_cap = 28;
};

/// One smoothing of every crossing. choices[i] = 0 for the A-smoothing (joins
/// slots 0-1 and 2-3), 1 for the B-smoothing (joins 0-3 and 1-2).
struct SmoothingState {
    std::vector<std::uint8_t> choices;
    int loop_count = 1;

    int a_count() const;
    int b_count() const;
    friend bool operator==(const SmoothingState&, const SmoothingState&) = default;
};

kernels::LoopProblem loop_problem(const LinkDiagram& d);

/// Number of loops after smoothing; `choices` needs one entry per crossing.
int count_loops(const LinkDiagram& d, const std::vector<std::uint8_t>& choices);

/// Streams all 2^N states in lexicographic order of `choices`. Throws CapExceeded
/// above `crossing_cap`.
void for_each_state(const LinkDiagram& d, const std::function<void(const SmoothingState&)>& visit,
                    int crossing_cap = kDefaultCrossingCap);
std::vector<SmoothingState> enumerate_states(const LinkDiagram& d, int crossing_cap = kDefaultCrossingCap);

/// A^(a-b) * delta^(loops-1)
LaurentPoly state_weight(const SmoothingState& s);

/// Kauffman bracket, normalized so the crossing-free unknot has bracket 1.
LaurentPoly bracket(const LinkDiagram& d, const BracketOptions& opts = {});
/// Bracket from a state histogram (see kernels::StateHistogram).
LaurentPoly bracket_from_histogram(const kernels::StateHistogram& h, int crossing_count);
/// Exact bracket by a left-to-right sweep that keeps only the pairing of open arcs.
/// Cost grows with the widest frontier rather than with 2^N.
LaurentPoly bracket_frontier(const LinkDiagram& d, int frontier_cap = 28);

/// (-A^3)^(-writhe) * bracket
LaurentPoly normalized_invariant(const LinkDiagram& d, const BracketOptions& opts = {});
/// delta^(c-1): the normalized invariant of the c-component unlink.
LaurentPoly unlink_invariant(int components);
/// normalized_invariant(d) == unlink_invariant(count_components(d)). Necessary but
/// not sufficient for d to be an unlink.
bool is_bracket_trivial(const LinkDiagram& d, const BracketOptions& opts = {});

/// Jones polynomial text from a normalized invariant by A -> t^(-1/4), descending
/// powers of t, fractional exponents written as "t^-1/2". "t + t^3 - t^4" for the
/// right trefoil.
std::string jones_text(const LaurentPoly& normalized);

}  // namespace qknots
