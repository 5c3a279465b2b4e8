#include "qknots/braid.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "qknots/errors.hpp"

namespace qknots {

void BraidWord::validate() const {
    if (strand_count < 1) throw InputError("braid needs at least one strand");
    for (const auto& l : letters) {
        if (l.generator < 1 || l.generator > strand_count - 1)
            throw InputError("generator s" + std::to_string(l.generator) + " out of range for " +
                             std::to_string(strand_count) + " strands");
        if (l.exponent != 1 && l.exponent != -1) throw InputError("braid exponents must be +1 or -1");
    }
}

std::vector<int> BraidWord::permutation() const {
    // at[pos] = starting position of the strand now at pos
    std::vector<int> at(strand_count);
    std::iota(at.begin(), at.end(), 0);
    for (const auto& l : letters) std::swap(at[l.generator - 1], at[l.generator]);
    std::vector<int> result(strand_count);
    for (int pos = 0; pos < strand_count; ++pos) result[at[pos]] = pos;
    return result;
}

int BraidWord::cycle_count() const {
    const auto perm = permutation();
    std::vector<bool> seen(strand_count, false);
    int cycles = 0;
    for (int p = 0; p < strand_count; ++p) {
        if (seen[p]) continue;
        ++cycles;
        for (int q = p; !seen[q]; q = perm[q]) seen[q] = true;
    }
    return cycles;
}

bool BraidWord::is_pure() const {
    const auto perm = permutation();
    for (int p = 0; p < strand_count; ++p)
        if (perm[p] != p) return false;
    return true;
}

BraidWord BraidWord::inverse() const {
    BraidWord out{strand_count, {}};
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back({it->generator, -it->exponent});
    return out;
}

BraidWord BraidWord::freely_reduced() const {
    BraidWord out{strand_count, {}};
    for (const auto& l : letters) {
        if (!out.letters.empty() && out.letters.back().generator == l.generator &&
            out.letters.back().exponent == -l.exponent)
            out.letters.pop_back();
        else
            out.letters.push_back(l);
    }
    return out;
}

BraidWord BraidWord::without_strand(int p) const {
    if (p < 0 || p >= strand_count) throw PreconditionError("strand index out of range");
    if (strand_count < 2) throw PreconditionError("cannot remove the only strand");
    BraidWord out{strand_count - 1, {}};
    int removed_pos = p;
    for (const auto& l : letters) {
        const int left = l.generator - 1, right = l.generator;
        if (left == removed_pos) {
            removed_pos = right;
        } else if (right == removed_pos) {
            removed_pos = left;
        } else {
            const int gen = l.generator - (removed_pos < left ? 1 : 0);
            out.letters.push_back({gen, l.exponent});
        }
    }
    return out;
}

std::string BraidWord::to_string() const {
    std::string s = "n=" + std::to_string(strand_count) + ":";
    for (const auto& l : letters) {
        s += " s" + std::to_string(l.generator);
        if (l.exponent < 0) s += "^-1";
    }
    return s;
}

BraidWord operator*(const BraidWord& a, const BraidWord& b) {
    BraidWord out{std::max(a.strand_count, b.strand_count), a.letters};
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

BraidWord parse_braid(const std::string& text) {
    // Strip comments, keep column bookkeeping per line.
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    auto at_end = [&] { return i >= text.size(); };
    auto advance = [&] {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    auto skip_space = [&] {
        while (!at_end()) {
            if (text[i] == '#') {
                while (!at_end() && text[i] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',') {
                advance();
            } else {
                break;
            }
        }
    };
    auto read_int = [&](std::string& tok) -> int {
        std::size_t start = i;
        if (!at_end() && (text[i] == '-' || text[i] == '+')) {
            tok += text[i];
            advance();
        }
        std::size_t digits = i;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            tok += text[i];
            advance();
        }
        if (i == digits) throw ParseError("expected an integer", line, col, tok);
        return std::stoi(text.substr(start, i - start));
    };

    BraidWord b;
    skip_space();
    {
        const std::size_t l0 = line, c0 = col;
        std::string tok;
        if (at_end() || text[i] != 'n') throw ParseError("braid must start with 'n=<strands>:'", l0, c0, "");
        tok += 'n';
        advance();
        if (at_end() || text[i] != '=') throw ParseError("expected '=' after 'n'", line, col, tok);
        tok += '=';
        advance();
        b.strand_count = read_int(tok);
        if (at_end() || text[i] != ':') throw ParseError("expected ':' after strand count", line, col, tok);
        advance();
        if (b.strand_count < 1) throw ParseError("strand count must be positive", l0, c0, tok);
    }
    while (true) {
        skip_space();
        if (at_end()) break;
        const std::size_t l0 = line, c0 = col;
        std::string tok;
        if (text[i] != 's') {
            while (!at_end() && !std::isspace(static_cast<unsigned char>(text[i]))) {
                tok += text[i];
                advance();
            }
            throw ParseError("expected a generator 's<i>'", l0, c0, tok);
        }
        tok += 's';
        advance();
        BraidLetter letter;
        letter.generator = read_int(tok);
        if (!at_end() && text[i] == '^') {
            tok += '^';
            advance();
            bool brace = !at_end() && text[i] == '{';
            if (brace) {
                tok += '{';
                advance();
            }
            letter.exponent = read_int(tok);
            if (brace) {
                if (at_end() || text[i] != '}') throw ParseError("expected '}'", line, col, tok);
                tok += '}';
                advance();
            }
            if (letter.exponent != 1 && letter.exponent != -1)
                throw ParseError("exponent must be +1 or -1", l0, c0, tok);
        }
        if (!at_end() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',' && text[i] != '#')
            throw ParseError("unexpected character after generator", line, col, tok + text[i]);
        if (letter.generator < 1 || letter.generator > b.strand_count - 1)
            throw ParseError("generator index out of range for " + std::to_string(b.strand_count) + " strands", l0,
                             c0, tok);
        b.letters.push_back(letter);
    }
    return b;
}

LinkDiagram braid_closure(const BraidWord& b) {
    b.validate();
    const int n = b.strand_count;
    int next_label = n + 1;
    std::vector<int> current(n);
    std::iota(current.begin(), current.end(), 1);
    std::vector<Crossing> crossings;
    crossings.reserve(b.letters.size());
    for (const auto& l : b.letters) {
        const int left = l.generator - 1, right = l.generator;
        const int left_in = current[left], right_in = current[right];
        const int out_left_pos = next_label++;   // strand arriving at the left position
        const int out_right_pos = next_label++;  // strand arriving at the right position
        Crossing c;
        if (l.exponent > 0) {
            // under: left strand (NW -> SE); over: right strand (NE -> SW)
            c.arcs = {left_in, out_left_pos, out_right_pos, right_in};
            c.sign = CrossingSign::positive;
        } else {
            // under: right strand (NE -> SW); over: left strand (NW -> SE)
            c.arcs = {right_in, left_in, out_left_pos, out_right_pos};
            c.sign = CrossingSign::negative;
        }
        crossings.push_back(c);
        current[left] = out_left_pos;
        current[right] = out_right_pos;
    }
    // Join the bottom of each position to its top.
    std::map<int, int> join;
    int free_loops = 0;
    for (int p = 0; p < n; ++p) {
        if (current[p] == p + 1)
            ++free_loops;
        else
            join[current[p]] = p + 1;
    }
    std::set<int> used;
    for (auto& c : crossings)
        for (int& a : c.arcs) {
            if (auto it = join.find(a); it != join.end()) a = it->second;
            used.insert(a);
        }
    // Compact labels, preserving their order.
    std::map<int, int> compact;
    int next = 1;
    for (int a : used) compact[a] = next++;
    for (auto& c : crossings)
        for (int& a : c.arcs) a = compact.at(a);
    if (crossings.empty() && free_loops == 0) free_loops = 1;
    return LinkDiagram::from_crossings(std::move(crossings), free_loops);
}

}  // namespace qknots
