#include "qknots/link_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "qknots/errors.hpp"
#include "qknots/pd_io.hpp"

namespace qknots {

LinkPattern link_pattern(const LinkDiagram& d, const PatternOptions& opts) {
    const int n = d.component_count();
    if (n < 2) throw PreconditionError("a link pattern needs at least 2 components");
    if (n > opts.component_cap)
        throw CapExceeded(std::to_string(n) + " components exceed the cap of " + std::to_string(opts.component_cap));
    LinkPattern p;
    p.component_count = n;
    p.full_linked = !is_bracket_trivial(d, opts.bracket);
    p.linking_matrix = linking_matrix(d);
    for (int c = 0; c < n; ++c) p.remainder_linked.push_back(!is_bracket_trivial(delete_component(d, c), opts.bracket));
    return p;
}

std::string to_string(BrunnianVerdict v) {
    switch (v) {
        case BrunnianVerdict::brunnian: return "brunnian";
        case BrunnianVerdict::not_brunnian: return "not_brunnian";
        default: return "indeterminate";
    }
}

BrunnianVerdict is_brunnian(const LinkDiagram& d, const PatternOptions& opts) {
    if (d.component_count() < 3) return BrunnianVerdict::indeterminate;
    try {
        for (const auto& row : linking_matrix(d))
            for (int v : row)
                if (v != 0) return BrunnianVerdict::not_brunnian;
        const LinkPattern p = link_pattern(d, opts);
        if (!p.full_linked) return BrunnianVerdict::not_brunnian;
        for (bool linked : p.remainder_linked)
            if (linked) return BrunnianVerdict::not_brunnian;
        return BrunnianVerdict::brunnian;
    } catch (const CapExceeded&) {
        return BrunnianVerdict::indeterminate;
    }
}

BraidWord template_weave(int strand_count) {
    return BraidWord{strand_count + 1, {{strand_count, -1}, {strand_count, -1}}};
}

BraidWord brunnian_template(const BraidWord& b, const PatternOptions& opts) {
    b.validate();
    const LinkDiagram closure = braid_closure(b);
    const BrunnianVerdict in = is_brunnian(closure, opts);
    if (in == BrunnianVerdict::indeterminate && closure.component_count() >= 3)
        throw CapExceeded("input closure too large to check; raise the crossing cap or enable the frontier engine");
    if (in != BrunnianVerdict::brunnian)
        throw PreconditionError("input braid closure is " + to_string(in) + ", not brunnian");
    BraidWord widened = b;
    widened.strand_count = b.strand_count + 1;
    const BraidWord w = template_weave(b.strand_count);
    const BraidWord out = widened * w * widened.inverse() * w.inverse();
    const BrunnianVerdict verdict = is_brunnian(braid_closure(out), opts);
    if (verdict == BrunnianVerdict::indeterminate)
        throw CapExceeded("template output " + out.to_string() +
                          " too large to verify; raise the crossing cap or enable the frontier engine");
    if (verdict != BrunnianVerdict::brunnian)
        throw TemplateVerificationError("template output " + out.to_string() + " is " + to_string(verdict));
    return out;
}

ProbabilisticLink::ProbabilisticLink(LinkDiagram base, std::map<int, int> influences)
    : base_(std::move(base)), influences_(std::move(influences)) {
    for (const auto& [c, x] : influences_) {
        if (c < 0 || c >= base_.component_count())
            throw PreconditionError("influence from unknown component " + std::to_string(c));
        if (x < 0 || x >= base_.crossing_count())
            throw PreconditionError("influence on unknown crossing " + std::to_string(x));
        const auto [u, o] = base_.strand_components(x);
        if (u == c || o == c)
            throw PreconditionError("component " + std::to_string(c) + " influences crossing " + std::to_string(x) +
                                    ", which disappears when that component is cut");
    }
}

ProbabilisticLink parse_problink(const std::string& text) {
    std::istringstream in(text);
    std::string line, pd;
    std::map<int, int> influences;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string key = "influence:";
        const auto pos = line.find(key);
        const auto hash = line.find('#');
        if (pos == std::string::npos || (hash != std::string::npos && hash < pos)) {
            pd += line + "\n";
            continue;
        }
        pd += "\n";
        std::istringstream ls(line.substr(pos + key.size(), hash == std::string::npos ? std::string::npos
                                                                                      : hash - pos - key.size()));
        std::string tok;
        while (ls >> tok) {
            int c = 0, x = 0;
            char colon = 0;
            std::istringstream ts(tok);
            if (!(ts >> c >> colon >> x) || colon != ':' || !ts.eof())
                throw ParseError("expected <component>:<crossing>", line_no, line.find(tok) + 1, tok);
            if (!influences.emplace(c, x).second)
                throw ParseError("component listed twice", line_no, line.find(tok) + 1, tok);
        }
    }
    return ProbabilisticLink(parse_pd(pd), std::move(influences));
}

namespace {

int influenced_crossing(const ProbabilisticLink& p, int c) {
    if (c < 0 || c >= p.base().component_count()) throw PreconditionError("unknown component " + std::to_string(c));
    auto it = p.influences().find(c);
    if (it == p.influences().end()) throw PreconditionError("component " + std::to_string(c) + " has no influence");
    return it->second;
}

}  // namespace

CutResult cut_probabilistic(const ProbabilisticLink& p, int c, std::uint64_t seed) {
    CutResult r;
    r.crossing = influenced_crossing(p, c);
    std::mt19937_64 gen(seed);
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    r.switched = u < 0.5;
    r.remainder = delete_component(r.switched ? switch_crossing(p.base(), r.crossing) : p.base(), c);
    return r;
}

CutDistribution cut_distribution(const ProbabilisticLink& p, int c, const PatternOptions& opts) {
    const int x = influenced_crossing(p, c);
    CutDistribution out;
    for (const LinkDiagram& d : {p.base(), switch_crossing(p.base(), x)}) {
        const bool linked = !is_bracket_trivial(delete_component(d, c), opts.bracket);
        (linked ? out.linked : out.unlinked) += 0.5;
    }
    return out;
}

std::vector<double> entangled_probabilities(const std::vector<PatternRow>& pattern) {
    std::vector<double> out;
    for (const auto& row : pattern) {
        double p = 0.0;
        for (const auto& b : row.branches)
            if (b.defined && b.entangled) p += b.probability;
        out.push_back(p);
    }
    return out;
}

MatchReport aravind_match(const std::vector<double>& link_linked, const std::vector<PatternRow>& pattern,
                          const MatchOptions& opts) {
    const int n = static_cast<int>(link_linked.size());
    if (n != static_cast<int>(pattern.size()))
        throw PreconditionError("link has " + std::to_string(n) + " components but the state has " +
                                std::to_string(pattern.size()) + " qubits");
    const auto ent = entangled_probabilities(pattern);
    auto report_for = [&](const std::vector<int>& qubit_of) {
        MatchReport r;
        r.full_match = true;
        for (int c = 0; c < n; ++c) {
            MatchEntry e;
            e.component = c;
            e.qubit = qubit_of[c];
            e.link_linked = link_linked[c];
            e.state_entangled = ent[e.qubit];
            e.match = std::abs(e.link_linked - e.state_entangled) <= opts.tolerance;
            r.full_match &= e.match;
            r.entries.push_back(e);
        }
        return r;
    };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    MatchReport best = report_for(perm);
    if (!opts.permutation_search) return best;
    auto score = [](const MatchReport& r) {
        return std::count_if(r.entries.begin(), r.entries.end(), [](const MatchEntry& e) { return e.match; });
    };
    while (std::next_permutation(perm.begin(), perm.end())) {
        MatchReport r = report_for(perm);
        if (score(r) > score(best)) best = std::move(r);
    }
    return best;
}

MatchReport aravind_match(const LinkPattern& lp, const std::vector<PatternRow>& pattern, const MatchOptions& opts) {
    std::vector<double> linked;
    for (bool b : lp.remainder_linked) linked.push_back(b ? 1.0 : 0.0);
    return aravind_match(linked, pattern, opts);
}

MatchReport aravind_match(const ProbabilisticLink& p, const std::vector<PatternRow>& pattern, const MatchOptions& opts,
                          const PatternOptions& popts) {
    std::vector<double> linked;
    for (int c = 0; c < p.base().component_count(); ++c) {
        if (p.influences().count(c))
            linked.push_back(cut_distribution(p, c, popts).linked);
        else
            linked.push_back(is_bracket_trivial(delete_component(p.base(), c), popts.bracket) ? 0.0 : 1.0);
    }
    return aravind_match(linked, pattern, opts);
}

void to_json(nlohmann::json& j, const LinkPattern& p) {
    j = nlohmann::json{{"components", p.component_count},
                       {"full_linked", p.full_linked},
                       {"remainder_linked", p.remainder_linked},
                       {"linking_matrix", p.linking_matrix}};
}

void to_json(nlohmann::json& j, const MatchReport& r) {
    auto entries = nlohmann::json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"component", e.component},
                           {"qubit", e.qubit},
                           {"link_linked_probability", e.link_linked},
                           {"state_entangled_probability", e.state_entangled},
                           {"match", e.match}});
    j = nlohmann::json{{"full_match", r.full_match}, {"entries", entries}, {"caveat", r.caveat}};
}

}  // namespace qknots
