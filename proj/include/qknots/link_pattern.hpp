#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qknots/braid.hpp"
#include "qknots/bracket.hpp"
#include "qknots/diagram.hpp"
#include "qknots/entangle.hpp"

namespace qknots {

inline constexpr int kDefaultComponentCap = 8;

struct PatternOptions {
    BracketOptions bracket{};
    int component_cap = kDefaultComponentCap;
};

/// Linked/unlinked flags of a link and of every one-component deletion. "Linked"
/// means the bracket triviality test fails; linking numbers ride along as evidence.
struct LinkPattern {
    int component_count = 0;
    bool full_linked = false;
    std::vector<bool> remainder_linked;
    std::vector<std::vector<int>> linking_matrix;
};

LinkPattern link_pattern(const LinkDiagram& d, const PatternOptions& opts = {});

enum class BrunnianVerdict { brunnian, not_brunnian, indeterminate };
std::string to_string(BrunnianVerdict v);

/// Indeterminate for fewer than 3 components or when a cap stops the bracket.
BrunnianVerdict is_brunnian(const LinkDiagram& d, const PatternOptions& opts = {});

/// Raised when the constructed template fails its own Brunnian check.
class TemplateVerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Weaving word of the new strand: s_n^-2 on n + 1 strands, n = b.strand_count.
BraidWord template_weave(int strand_count);

/// B W B^-1 W^-1 on strand_count + 1 strands, with W = template_weave. Requires a
/// Brunnian input closure and verifies the output closure. CapExceeded when a cap
/// stops either check.
BraidWord brunnian_template(const BraidWord& b, const PatternOptions& opts = {});

/// A diagram where cutting a component may flip one crossing (probability 1/2).
class ProbabilisticLink {
public:
    /// Throws PreconditionError if an influenced crossing involves its own component.
    ProbabilisticLink(LinkDiagram base, std::map<int, int> influences);

    const LinkDiagram& base() const noexcept { return base_; }
    const std::map<int, int>& influences() const noexcept { return influences_; }

private:
    LinkDiagram base_;
    std::map<int, int> influences_;
};

/// PD text plus "influence: <component>:<crossing> ..." lines.
ProbabilisticLink parse_problink(const std::string& text);

struct CutResult {
    int crossing = -1;  ///< influenced crossing, id in the uncut diagram
    bool switched = false;
    LinkDiagram remainder;
};

/// Flips the influenced crossing when the first draw of mt19937_64(seed), mapped to
/// [0, 1), falls below 1/2; then deletes component c.
CutResult cut_probabilistic(const ProbabilisticLink& p, int c, std::uint64_t seed);

struct CutDistribution {
    double linked = 0.0;
    double unlinked = 0.0;
};

/// Both branches (switch / no switch) with weight 1/2 each, classified by the triviality test.
CutDistribution cut_distribution(const ProbabilisticLink& p, int c, const PatternOptions& opts = {});

struct MatchEntry {
    int component = 0;
    int qubit = 0;
    double link_linked = 0.0;
    double state_entangled = 0.0;
    bool match = false;
};

struct MatchReport {
    bool full_match = false;
    std::vector<MatchEntry> entries;
    std::string caveat = "the correspondence is basis dependent";
};

struct MatchOptions {
    /// Try every component -> qubit pairing and keep the one with the most matches.
    bool permutation_search = false;
    double tolerance = 1e-9;
};

/// Per qubit: probability that the post-measurement state is entangled.
std::vector<double> entangled_probabilities(const std::vector<PatternRow>& pattern);

/// Compares per-component linked probabilities with per-qubit entangled probabilities.
MatchReport aravind_match(const std::vector<double>& link_linked, const std::vector<PatternRow>& pattern,
                          const MatchOptions& opts = {});
MatchReport aravind_match(const LinkPattern& lp, const std::vector<PatternRow>& pattern, const MatchOptions& opts = {});
MatchReport aravind_match(const ProbabilisticLink& p, const std::vector<PatternRow>& pattern,
                          const MatchOptions& opts = {}, const PatternOptions& popts = {});

void to_json(nlohmann::json& j, const LinkPattern& p);
void to_json(nlohmann::json& j, const MatchReport& r);

}  // namespace qknots
