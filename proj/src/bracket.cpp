#include "qknots/bracket.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qknots/errors.hpp"

namespace qknots {

int SmoothingState::a_count() const {
    return static_cast<int>(std::count(choices.begin(), choices.end(), std::uint8_t{0}));
}

int SmoothingState::b_count() const { return static_cast<int>(choices.size()) - a_count(); }

kernels::LoopProblem loop_problem(const LinkDiagram& d) {
    if (d.crossing_count() > kMaxStateSumCrossings)
        throw CapExceeded("state sum supports at most " + std::to_string(kMaxStateSumCrossings) + " crossings");
    kernels::LoopProblem p;
    std::map<int, int> index;
    for (int a : d.arc_labels()) index.emplace(a, static_cast<int>(index.size()));
    p.arc_count = static_cast<int>(index.size());
    p.free_loops = d.free_loops();
    for (const auto& c : d.crossings()) {
        std::array<std::uint8_t, 4> t{};
        for (int s = 0; s < 4; ++s) t[s] = static_cast<std::uint8_t>(index.at(c.arcs[s]));
        p.crossings.push_back(t);
    }
    return p;
}

namespace {

std::uint64_t choices_to_index(const std::vector<std::uint8_t>& choices) {
    std::uint64_t index = 0;
    for (auto c : choices) index = (index << 1) | (c ? 1U : 0U);
    return index;
}

void check_cap(const LinkDiagram& d, int cap) {
    const int limit = std::min(cap, kMaxStateSumCrossings);
    if (d.crossing_count() > limit)
        throw CapExceeded("diagram has " + std::to_string(d.crossing_count()) + " crossings; the cap is " +
                          std::to_string(limit));
}

}  // namespace

int count_loops(const LinkDiagram& d, const std::vector<std::uint8_t>& choices) {
    if (static_cast<int>(choices.size()) != d.crossing_count())
        throw PreconditionError("need one smoothing choice per crossing");
    return kernels::loops_of_state(loop_problem(d), choices_to_index(choices));
}

void for_each_state(const LinkDiagram& d, const std::function<void(const SmoothingState&)>& visit, int crossing_cap) {
    check_cap(d, crossing_cap);
    const auto p = loop_problem(d);
    const int n = d.crossing_count();
    SmoothingState s;
    s.choices.assign(n, 0);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        for (int i = 0; i < n; ++i) s.choices[i] = static_cast<std::uint8_t>((idx >> (n - 1 - i)) & 1U);
        s.loop_count = kernels::loops_of_state(p, idx);
        visit(s);
    }
}

std::vector<SmoothingState> enumerate_states(const LinkDiagram& d, int crossing_cap) {
    std::vector<SmoothingState> out;
    for_each_state(d, [&](const SmoothingState& s) { out.push_back(s); }, crossing_cap);
    return out;
}

LaurentPoly state_weight(const SmoothingState& s) {
    if (s.loop_count < 1) throw PreconditionError("a state has at least one loop");
    return LaurentPoly::monomial(s.a_count() - s.b_count()) * LaurentPoly::delta().pow(s.loop_count - 1);
}

LaurentPoly bracket_from_histogram(const kernels::StateHistogram& h, int crossing_count) {
    // Group by loop count first so each delta power is computed once.
    std::map<int, LaurentPoly> by_loops;
    for (int a = 0; a < static_cast<int>(h.size()); ++a)
        for (int l = 0; l < static_cast<int>(h[a].size()); ++l)
            if (h[a][l] != 0) by_loops[l].add_term(2 * a - crossing_count, h[a][l]);
    LaurentPoly total;
    for (const auto& [l, poly] : by_loops) total += poly * LaurentPoly::delta().pow(l - 1);
    return total;
}

LaurentPoly bracket(const LinkDiagram& d, const BracketOptions& opts) {
    const int limit = std::min(opts.crossing_cap, kMaxStateSumCrossings);
    if (d.crossing_count() > limit) {
        if (opts.frontier_fallback) return bracket_frontier(d, opts.frontier_cap);
        check_cap(d, opts.crossing_cap);
    }
    const auto p = loop_problem(d);
    const auto h = opts.parallel ? kernels::state_histogram_parallel(p) : kernels::state_histogram_serial(p);
    return bracket_from_histogram(h, d.crossing_count());
}

namespace {

// Pairing of open arcs, stored as a flat sorted list of (low, high) label pairs.
using Frontier = std::vector<int>;

struct SweepResult {
    Frontier frontier;
    int closed = 0;
};

// Joins the old pairing with the smoothing edges at one crossing. `open_after`
// tells which arcs still have an unprocessed end.
SweepResult sweep(const Frontier& old, const std::array<int, 4>& arcs, bool b_smoothing,
                  const std::map<int, int>& ends_seen_after) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < old.size(); i += 2) edges.emplace_back(old[i], old[i + 1]);
    if (b_smoothing) {
        edges.emplace_back(arcs[0], arcs[3]);
        edges.emplace_back(arcs[1], arcs[2]);
    } else {
        edges.emplace_back(arcs[0], arcs[1]);
        edges.emplace_back(arcs[2], arcs[3]);
    }
    std::map<int, std::vector<int>> incident;  // vertex -> edge ids (a self-loop appears twice)
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        incident[edges[e].first].push_back(e);
        incident[edges[e].second].push_back(e);
    }
    std::vector<bool> used(edges.size(), false);
    SweepResult r;
    auto walk = [&](int start, int first_edge) {
        int v = start, e = first_edge;
        while (true) {
            used[e] = true;
            v = edges[e].first == v ? edges[e].second : edges[e].first;
            const auto& inc = incident[v];
            int next = -1;
            for (int f : inc)
                if (!used[f]) next = f;
            if (next < 0) return v;
            e = next;
        }
    };
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [v, inc] : incident) {
        if (inc.size() != 1 || used[inc[0]]) continue;
        const int end = walk(v, inc[0]);
        pairs.emplace_back(std::min(v, end), std::max(v, end));
        if (ends_seen_after.at(v) != 1 || ends_seen_after.at(end) != 1)
            throw std::logic_error("frontier sweep: closed arc left open");
    }
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if (!used[e]) {
            walk(edges[e].first, e);
            ++r.closed;
        }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [a, b] : pairs) {
        r.frontier.push_back(a);
        r.frontier.push_back(b);
    }
    return r;
}

}  // namespace

LaurentPoly bracket_frontier(const LinkDiagram& d, int frontier_cap) {
    const int n = d.crossing_count();
    if (n == 0) return LaurentPoly::delta().pow(d.free_loops() - 1);
    std::map<int, int> seen;
    for (int a : d.arc_labels()) seen[a] = 0;
    std::vector<bool> done(n, false);
    // (frontier, closed loops) -> sum of A^(a-b)
    std::map<std::pair<Frontier, int>, LaurentPoly> states;
    states[{Frontier{}, 0}] = LaurentPoly(1);
    for (int step = 0; step < n; ++step) {
        int best = -1, best_touch = -1, best_open = 0;
        for (int x = 0; x < n; ++x) {
            if (done[x]) continue;
            int touch = 0, open = 0;
            std::map<int, int> local;
            for (int a : d.crossings()[x].arcs) ++local[a];
            for (const auto& [a, k] : local) {
                if (seen[a] > 0) ++touch;
                if (seen[a] + k == 1) ++open;
            }
            if (touch > best_touch || (touch == best_touch && open < best_open)) {
                best = x;
                best_touch = touch;
                best_open = open;
            }
        }
        done[best] = true;
        const auto& arcs = d.crossings()[best].arcs;
        for (int a : arcs) ++seen[a];
        std::map<std::pair<Frontier, int>, LaurentPoly> next;
        for (const auto& [key, poly] : states) {
            for (int b = 0; b < 2; ++b) {
                SweepResult r = sweep(key.first, arcs, b == 1, seen);
                if (static_cast<int>(r.frontier.size()) > frontier_cap)
                    throw CapExceeded("frontier width exceeds " + std::to_string(frontier_cap) + " open arcs");
                next[{std::move(r.frontier), key.second + r.closed}] +=
                    poly * LaurentPoly::monomial(b == 0 ? 1 : -1);
            }
        }
        states = std::move(next);
    }
    LaurentPoly total;
    for (const auto& [key, poly] : states) {
        if (!key.first.empty()) throw std::logic_error("frontier sweep ended with open arcs");
        total += poly * LaurentPoly::delta().pow(key.second + d.free_loops() - 1);
    }
    return total;
}

LaurentPoly normalized_invariant(const LinkDiagram& d, const BracketOptions& opts) {
    const int w = writhe(d);
    const LaurentPoly factor = LaurentPoly::monomial(-3 * w, (w % 2 == 0) ? 1 : -1);
    return factor * bracket(d, opts);
}

LaurentPoly unlink_invariant(int components) {
    if (components < 1) throw PreconditionError("an unlink has at least one component");
    return LaurentPoly::delta().pow(components - 1);
}

bool is_bracket_trivial(const LinkDiagram& d, const BracketOptions& opts) {
    return normalized_invariant(d, opts) == unlink_invariant(count_components(d));
}

std::string jones_text(const LaurentPoly& normalized) {
    if (normalized.is_zero()) return "0";
    std::string out;
    const auto& terms = normalized.terms();
    // Ascending A exponent = descending t exponent.
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        const int num = -it->first;  // t exponent = num / 4
        const int g = std::gcd(num < 0 ? -num : num, 4);
        const int n = num / (g == 0 ? 4 : g), den = 4 / (g == 0 ? 4 : g);
        LaurentPoly::Coeff c = it->second;
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (c < 0) c = -c;
        std::string power;
        if (num == 0)
            power = "";
        else if (den == 1)
            power = n == 1 ? "t" : "t^" + std::to_string(n);
        else
            power = "t^" + std::to_string(n) + "/" + std::to_string(den);
        if (power.empty())
            out += std::to_string(c);
        else
            out += (c == 1 ? "" : std::to_string(c)) + power;
    }
    return out;
}

}  // namespace qknots
