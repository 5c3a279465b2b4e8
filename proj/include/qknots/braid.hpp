#pragma once

#include <string>
#include <vector>

#include "qknots/diagram.hpp"

namespace qknots {

/// One letter s_i^{+1} or s_i^{-1}; `generator` is 1-based.
struct BraidLetter {
    int generator = 1;
    int exponent = 1;
    friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

/// A braid word on `strand_count` strands. Strands are read top to bottom;
/// s_i crosses positions i and i+1 and is a positive crossing when both strands
/// are oriented downward.
struct BraidWord {
    int strand_count = 1;
    std::vector<BraidLetter> letters;

    /// Throws InputError if a generator index is outside [1, strand_count - 1].
    void validate() const;
    /// Strand permutation: result[p] = final position of the strand starting at position p.
    std::vector<int> permutation() const;
    /// Number of cycles of the permutation (= closure component count).
    int cycle_count() const;
    bool is_pure() const;

    BraidWord inverse() const;
    /// Cancels adjacent s_i s_i^-1 pairs until none remain.
    BraidWord freely_reduced() const;
    /// Removes the strand starting at position p (0-based) from a pure braid.
    BraidWord without_strand(int p) const;

    /// "n=3: s1 s2^-1 s1"
    std::string to_string() const;

    friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

BraidWord operator*(const BraidWord& a, const BraidWord& b);

/// Parses "n=<k>: s<i>[^±1] ...". Throws ParseError on bad syntax or indices.
BraidWord parse_braid(const std::string& text);

/// Closure diagram: one crossing per letter, strands joined bottom to top. The arc
/// entering the top of position p is labelled p + 1, so the closure component
/// through top position p has a smaller label than any later position's.
/// Positions untouched by any letter become crossing-free circles.
LinkDiagram braid_closure(const BraidWord& b);

}  // namespace qknots
