#include "qknots/quantum_knot.hpp"

#include <cmath>
#include <random>

#include "qknots/braid.hpp"
#include "qknots/errors.hpp"
#include "qknots/pd_io.hpp"

namespace qknots {

KnotClassKey class_key(const LinkDiagram& d, const BracketOptions& opts) {
    const int c = d.component_count();
    const LaurentPoly b = bracket(d, opts);
    int self = 0;
    std::vector<std::vector<int>> cross(c, std::vector<int>(c, 0));  // signed crossing sums, = 2 lk
    for (int x = 0; x < d.crossing_count(); ++x) {
        auto [u, o] = d.strand_components(x);
        const int s = to_int(d.crossings()[x].sign);
        if (u == o)
            self += s;
        else
            cross[std::min(u, o)][std::max(u, o)] += s;
    }
    KnotClassKey key{c, {}};
    bool first = true;
    // Flipping every component at once changes nothing, so component 0 stays fixed.
    const std::uint64_t flips = c > 1 ? (std::uint64_t{1} << (c - 1)) : 1;
    for (std::uint64_t mask = 0; mask < flips; ++mask) {
        auto eps = [&](int i) { return i > 0 && ((mask >> (i - 1)) & 1U) ? -1 : 1; };
        int w = self;
        for (int i = 0; i < c; ++i)
            for (int j = i + 1; j < c; ++j) w += eps(i) * eps(j) * cross[i][j];
        const LaurentPoly inv = LaurentPoly::monomial(-3 * w, w % 2 == 0 ? 1 : -1) * b;
        std::string text = inv.to_string();
        if (first || text < key.fingerprint) key.fingerprint = std::move(text);
        first = false;
    }
    return key;
}

std::string class_name(const KnotClassKey& key) {
    static const std::map<KnotClassKey, std::string> catalog = [] {
        std::map<KnotClassKey, std::string> m;
        m[class_key(LinkDiagram::unknot())] = "unknot";
        for (int k = 2; k <= 5; ++k) m[class_key(LinkDiagram::unlink(k))] = std::to_string(k) + "-unlink";
        m[class_key(parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"))] = "trefoil_R";
        m[class_key(parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"))] = "trefoil_L";
        m[class_key(braid_closure(parse_braid("n=3: s1 s2^-1 s1 s2^-1")))] = "figure_eight";
        m[class_key(braid_closure(parse_braid("n=2: s1 s1")))] = "hopf";
        m[class_key(braid_closure(parse_braid("n=3: s1 s2^-1 s1 s2^-1 s1 s2^-1")))] = "borromean";
        return m;
    }();
    if (auto it = catalog.find(key); it != catalog.end()) return it->second;
    return std::to_string(key.component_count) + ":" + key.fingerprint;
}

QuantumKnot QuantumKnot::from_weighted_diagrams(const std::vector<std::pair<LinkDiagram, Complex>>& items,
                                                const BracketOptions& opts) {
    if (items.empty()) throw PreconditionError("a quantum knot needs at least one diagram");
    Terms terms;
    for (const auto& [d, amp] : items) {
        if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
            throw PreconditionError("amplitudes must be finite");
        const KnotClassKey key = class_key(d, opts);
        auto it = terms.find(key);
        if (it == terms.end())
            terms.emplace(key, QuantumTerm{amp, d});
        else
            it->second.amplitude += amp;
    }
    QuantumKnot q;
    q.terms_ = std::move(terms);
    return q.normalized();
}

QuantumKnot QuantumKnot::from_terms(Terms terms, const BracketOptions& opts) {
    for (const auto& [key, term] : terms)
        if (class_key(term.representative, opts) != key)
            throw PreconditionError("representative does not match its class key " + class_name(key));
    QuantumKnot q;
    q.terms_ = std::move(terms);
    return q;
}

double QuantumKnot::norm_squared() const {
    double s = 0.0;
    for (const auto& [key, term] : terms_) s += std::norm(term.amplitude);
    return s;
}

bool QuantumKnot::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

QuantumKnot QuantumKnot::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw PreconditionError("cannot normalize: every amplitude is zero");
    // Already-normalized states are returned unscaled so normalizing is idempotent.
    const double scale = std::abs(n2 - 1.0) <= 1e-14 ? 1.0 : 1.0 / std::sqrt(n2);
    QuantumKnot q;
    for (const auto& [key, term] : terms_) {
        if (term.amplitude == Complex(0.0, 0.0)) continue;
        q.terms_.emplace(key, QuantumTerm{term.amplitude * scale, term.representative});
    }
    return q;
}

std::map<KnotClassKey, double> QuantumKnot::outcome_distribution() const {
    std::map<KnotClassKey, double> out;
    for (const auto& [key, term] : terms_) out[key] = std::norm(term.amplitude);
    return out;
}

AmplitudeRule uniform_rule(int node_count) {
    const double a = std::pow(2.0, -0.5 * node_count);
    return [a](std::uint64_t, const std::vector<std::uint8_t>&) { return Complex(a, 0.0); };
}

QuantumKnot from_flat_diagram(const FlatDiagram& f, const AmplitudeRule& rule, const FlatOptions& opts) {
    const int n = f.node_count();
    if (n > opts.node_cap)
        throw CapExceeded("flat diagram has " + std::to_string(n) + " nodes; the cap is " +
                          std::to_string(opts.node_cap));
    const AmplitudeRule amp = rule ? rule : uniform_rule(n);
    const auto keys = opts.parallel ? classify_resolutions_parallel(f, opts.bracket)
                                    : classify_resolutions_serial(f, opts.bracket);
    struct Acc {
        double weight = 0.0;
        Complex phase_from;
        std::uint64_t first = 0;
    };
    std::map<KnotClassKey, Acc> acc;
    std::vector<std::uint8_t> choice(n);
    for (std::uint64_t i = 0; i < keys.size(); ++i) {
        for (int k = 0; k < n; ++k) choice[k] = static_cast<std::uint8_t>((i >> (n - 1 - k)) & 1U);
        const Complex a = amp(i, choice);
        if (a == Complex(0.0, 0.0)) continue;
        auto [it, fresh] = acc.try_emplace(keys[i]);
        if (fresh) {
            it->second.phase_from = a;
            it->second.first = i;
        }
        it->second.weight += std::norm(a);
    }
    QuantumKnot::Terms terms;
    for (const auto& [key, a] : acc) {
        const Complex unit = a.phase_from / std::abs(a.phase_from);
        terms.emplace(key, QuantumTerm{unit * std::sqrt(a.weight), resolve_index(f, a.first)});
    }
    if (terms.empty()) throw PreconditionError("amplitude rule gives zero for every resolution");
    QuantumKnot q = QuantumKnot::from_terms(std::move(terms), BracketOptions{opts.bracket.crossing_cap, false,
                                                                              opts.bracket.frontier_fallback,
                                                                              opts.bracket.frontier_cap});
    return q.normalized();
}

MeasurementOutcome measure(const QuantumKnot& q, std::uint64_t seed) {
    if (!q.is_normalized()) throw PreconditionError("measure needs a normalized state");
    std::mt19937_64 gen(seed);
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    double cum = 0.0;
    const QuantumKnot::Terms::value_type* chosen = nullptr;
    for (const auto& entry : q.terms()) {
        const double p = std::norm(entry.second.amplitude);
        if (p <= 0.0) continue;
        chosen = &entry;
        cum += p;
        if (u < cum) break;
    }
    if (!chosen) throw PreconditionError("state has no outcome with positive probability");
    MeasurementOutcome out;
    out.key = chosen->first;
    out.probability = std::norm(chosen->second.amplitude);
    out.collapsed.terms_.emplace(chosen->first, QuantumTerm{Complex(1.0, 0.0), chosen->second.representative});
    return out;
}

std::vector<std::pair<SmoothingState, LaurentPoly>> internal_state_expansion(const LinkDiagram& d, int crossing_cap) {
    std::vector<std::pair<SmoothingState, LaurentPoly>> out;
    for_each_state(d, [&](const SmoothingState& s) { out.emplace_back(s, state_weight(s)); }, crossing_cap);
    return out;
}

void to_json(nlohmann::json& j, const KnotClassKey& k) {
    j = nlohmann::json{{"components", k.component_count}, {"fingerprint", k.fingerprint}, {"name", class_name(k)}};
}

void to_json(nlohmann::json& j, const QuantumKnot& q) {
    j = nlohmann::json::array();
    for (const auto& [key, term] : q.terms())
        j.push_back({{"key", key},
                     {"amplitude_re", term.amplitude.real()},
                     {"amplitude_im", term.amplitude.imag()},
                     {"probability", std::norm(term.amplitude)},
                     {"representative", term.representative}});
}

}  // namespace qknots
