#include "qknots/pd_io.hpp"

#include <cctype>
#include <set>

#include "qknots/errors.hpp"

namespace qknots {

namespace {

class Scanner {
public:
    explicit Scanner(const std::string& text) : text_(text) {}

    bool at_end() const { return i_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[i_]; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }

    void advance() {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    /// Skips whitespace, commas and comments. Stops at a newline when `stop_at_newline`.
    void skip(bool stop_at_newline = false) {
        while (!at_end()) {
            const char c = text_[i_];
            if (c == '#') {
                while (!at_end() && text_[i_] != '\n') advance();
            } else if (c == '\n' && stop_at_newline) {
                return;
            } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
                advance();
            } else {
                return;
            }
        }
    }

    bool consume(char c) {
        if (peek() != c) return false;
        advance();
        return true;
    }

    bool consume(const std::string& word) {
        if (text_.compare(i_, word.size(), word) != 0) return false;
        for (std::size_t k = 0; k < word.size(); ++k) advance();
        return true;
    }

    std::string word_here() const {
        std::size_t j = i_;
        while (j < text_.size() && !std::isspace(static_cast<unsigned char>(text_[j]))) ++j;
        return text_.substr(i_, j - i_);
    }

    int integer(bool allow_sign) {
        const std::size_t start = i_;
        const std::size_t l = line_, c = col_;
        if (allow_sign && (peek() == '+' || peek() == '-')) advance();
        const std::size_t digits = i_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[i_]))) advance();
        if (i_ == digits) throw ParseError("expected an integer", l, c, text_.substr(start, i_ - start + 1));
        return std::stoi(text_.substr(start, i_ - start));
    }

private:
    const std::string& text_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

}  // namespace

LinkDiagram parse_pd(const std::string& text) {
    Scanner sc(text);
    std::vector<std::array<int, 4>> tuples;
    std::set<int> reverse;
    int circles = 0;
    bool saw_item = false;
    while (true) {
        sc.skip();
        if (sc.at_end()) break;
        const std::size_t l = sc.line(), c = sc.column();
        const std::string tok = sc.word_here();
        if (sc.consume("orient:")) {
            while (true) {
                sc.skip(true);
                if (sc.at_end() || sc.peek() == '\n') break;
                const std::size_t l2 = sc.line(), c2 = sc.column();
                const std::string w = sc.word_here();
                if (sc.peek() != '+' && sc.peek() != '-')
                    throw ParseError("orient entries must be signed arc labels", l2, c2, w);
                const bool rev = sc.peek() == '-';
                const int arc = sc.integer(true);
                if (arc == 0) throw ParseError("arc labels are positive", l2, c2, w);
                if (rev) reverse.insert(arc < 0 ? -arc : arc);
            }
            continue;
        }
        if (sc.consume("X[")) {
            std::array<int, 4> t{};
            for (int k = 0; k < 4; ++k) {
                while (sc.peek() == ' ') sc.advance();
                if (sc.peek() == ']') throw ParseError("crossing needs exactly 4 arc labels", l, c, tok);
                t[k] = sc.integer(false);
                while (sc.peek() == ' ') sc.advance();
                if (k < 3 && !sc.consume(',')) throw ParseError("expected ',' inside crossing", l, c, tok);
            }
            if (!sc.consume(']')) throw ParseError("crossing needs exactly 4 arc labels", l, c, tok);
            for (int a : t)
                if (a <= 0) throw ParseError("arc labels must be positive", l, c, tok);
            tuples.push_back(t);
            saw_item = true;
            continue;
        }
        if (sc.consume("O[")) {
            const int k = sc.integer(false);
            if (!sc.consume(']')) throw ParseError("expected ']'", l, c, tok);
            if (k < 1) throw ParseError("circle count must be positive", l, c, tok);
            circles += k;
            saw_item = true;
            continue;
        }
        throw ParseError("unknown token (expected X[...], O[...] or orient:)", l, c, tok);
    }
    if (!saw_item) throw ParseError("empty diagram", 1, 1, "");
    try {
        return LinkDiagram::from_pd_tuples(tuples, circles, reverse);
    } catch (const ParseError&) {
        throw;
    } catch (const InputError& e) {
        throw ParseError(e.what(), 1, 1, "");
    }
}

std::string to_pd_text(const LinkDiagram& d) {
    std::vector<std::array<int, 4>> tuples;
    for (const auto& c : d.crossings()) tuples.push_back(c.arcs);
    std::string orient;
    if (!tuples.empty()) {
        const LinkDiagram def = LinkDiagram::from_pd_tuples(tuples, d.free_loops());
        for (const auto& comp : d.components()) {
            if (comp.is_free_loop()) continue;
            const int m = comp.min_arc();
            const Endpoint h = d.head(m);
            const Crossing& mine = d.crossings()[h.crossing];
            const Crossing& theirs = def.crossings()[h.crossing];
            const int rot = mine.arcs == theirs.arcs ? 0 : 2;
            const Endpoint h0 = def.head(m);
            if (h0.crossing != h.crossing || (h0.slot + rot) % 4 != h.slot) orient += " -" + std::to_string(m);
        }
    }
    std::string s;
    if (!orient.empty()) s += "orient:" + orient + "\n";
    bool first = true;
    for (const auto& t : tuples) {
        if (!first) s += " ";
        first = false;
        s += "X[" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + "," +
             std::to_string(t[3]) + "]";
    }
    if (d.free_loops() > 0) {
        if (!first) s += " ";
        s += "O[" + std::to_string(d.free_loops()) + "]";
    }
    return s;
}

void to_json(nlohmann::json& j, const LinkDiagram& d) {
    j = nlohmann::json::object();
    auto crossings = nlohmann::json::array();
    for (int x = 0; x < d.crossing_count(); ++x) {
        const Crossing& c = d.crossings()[x];
        crossings.push_back({{"id", x}, {"arcs", c.arcs}, {"sign", to_int(c.sign)}});
    }
    auto components = nlohmann::json::array();
    auto orientations = nlohmann::json::array();
    for (int i = 0; i < d.component_count(); ++i) {
        const Component& comp = d.components()[i];
        components.push_back({{"id", i}, {"arcs", comp.arcs}, {"free_loop", comp.is_free_loop()}});
        auto entries = nlohmann::json::array();
        for (const auto& e : comp.entries) entries.push_back({e.crossing, e.slot});
        orientations.push_back({{"component", i}, {"entries", entries}});
    }
    j["crossings"] = crossings;
    j["components"] = components;
    j["orientations"] = orientations;
    j["free_loops"] = d.free_loops();
}

void from_json(const nlohmann::json& j, LinkDiagram& d) {
    std::vector<Crossing> crossings;
    for (const auto& jc : j.at("crossings")) {
        Crossing c;
        c.arcs = jc.at("arcs").get<std::array<int, 4>>();
        const int s = jc.at("sign").get<int>();
        if (s != 1 && s != -1) throw InputError("crossing sign must be +1 or -1");
        c.sign = s > 0 ? CrossingSign::positive : CrossingSign::negative;
        crossings.push_back(c);
    }
    d = LinkDiagram::from_crossings(std::move(crossings), j.at("free_loops").get<int>());
}

}  // namespace qknots
