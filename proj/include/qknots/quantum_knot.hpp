#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qknots/bracket.hpp"
#include "qknots/diagram.hpp"

namespace qknots {

using Complex = std::complex<double>;

/// Invariant-level proxy for a knot or link type: component count plus the
/// canonical text of the normalized bracket, minimized over the relative
/// orientations of the components. Not a complete classifier.
struct KnotClassKey {
    int component_count = 1;
    std::string fingerprint = "1";
    friend auto operator<=>(const KnotClassKey&, const KnotClassKey&) = default;
};

KnotClassKey class_key(const LinkDiagram& d, const BracketOptions& opts = {});

/// Short name for well-known classes ("unknot", "trefoil_R", "hopf", "2-unlink", ...);
/// otherwise "<components>:<fingerprint>".
std::string class_name(const KnotClassKey& key);

struct QuantumTerm {
    Complex amplitude;
    LinkDiagram representative;
};



struct MeasurementOutcome;

/// Finite superposition of knot classes.
class QuantumKnot {
public:
    using Terms = std::map<KnotClassKey, QuantumTerm>;

    /// Groups diagrams by class key, sums amplitudes within a class (first diagram
    /// kept as representative), then normalizes. Throws PreconditionError when every
    /// amplitude vanishes.
    static QuantumKnot from_weighted_diagrams(const std::vector<std::pair<LinkDiagram, Complex>>& items,
                                              const BracketOptions& opts = {});
    /// Takes terms as given; throws PreconditionError if a representative's key differs.
    static QuantumKnot from_terms(Terms terms, const BracketOptions& opts = {});

    const Terms& terms() const noexcept { return terms_; }
    double norm_squared() const;
    bool is_normalized(double tol = 1e-9) const;
    QuantumKnot normalized() const;
    std::map<KnotClassKey, double> outcome_distribution() const;

private:
    friend MeasurementOutcome measure(const QuantumKnot& q, std::uint64_t seed);
    Terms terms_;
};

struct MeasurementOutcome {
    KnotClassKey key;
    double probability = 0.0;
    QuantumKnot collapsed;
};

/// Amplitude for resolution `index` (node i takes bit N-1-i).
using AmplitudeRule = std::function<Complex(std::uint64_t index, const std::vector<std::uint8_t>& choice)>;

/// 1 / sqrt(2^N) for every resolution.
AmplitudeRule uniform_rule(int node_count);

inline constexpr int kDefaultFlatNodeCap = 12;

struct FlatOptions {
    int node_cap = kDefaultFlatNodeCap;
    bool parallel = true;
    BracketOptions bracket{};
};

/// Class key of every resolution, indexed by resolution number.
std::vector<KnotClassKey> classify_resolutions_serial(const FlatDiagram& f, const BracketOptions& opts = {});
std::vector<KnotClassKey> classify_resolutions_parallel(const FlatDiagram& f, const BracketOptions& opts = {},
                                                        int threads = 0);

/// All 2^N resolutions, classified and merged in index order. Resolutions are
/// distinct outcomes, so probabilities within a class add: the class amplitude has
/// modulus sqrt(sum |a_r|^2) and the phase of its lowest-index resolution.
QuantumKnot from_flat_diagram(const FlatDiagram& f, const AmplitudeRule& rule = {}, const FlatOptions& opts = {});

/// Identifier recorded alongside sampled results.
inline constexpr const char* kRngAlgorithm = "mt19937_64";


/// Samples a class with probability |amplitude|^2 using std::mt19937_64(seed).
MeasurementOutcome measure(const QuantumKnot& q, std::uint64_t seed);

/// Every smoothing state with its weight <K|S>; the weights sum to the bracket.
std::vector<std::pair<SmoothingState, LaurentPoly>> internal_state_expansion(const LinkDiagram& d,
                                                                             int crossing_cap = kDefaultCrossingCap);

void to_json(nlohmann::json& j, const KnotClassKey& k);
void to_json(nlohmann::json& j, const QuantumKnot& q);

}  // namespace qknots
