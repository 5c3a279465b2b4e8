#include "qknots/laurent.hpp"

#include <limits>
#include <cctype>
#include <stdexcept>

#include "qknots/errors.hpp"

namespace qknots {

namespace {

LaurentPoly::Coeff checked_add(LaurentPoly::Coeff a, LaurentPoly::Coeff b) {
    LaurentPoly::Coeff r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("LaurentPoly: coefficient overflow");
    return r;
}

LaurentPoly::Coeff checked_mul(LaurentPoly::Coeff a, LaurentPoly::Coeff b) {
    LaurentPoly::Coeff r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("LaurentPoly: coefficient overflow");
    return r;
}

}  // namespace

LaurentPoly::LaurentPoly(Coeff c) {
    if (c != 0) terms_[0] = c;
}

LaurentPoly LaurentPoly::monomial(int exponent, Coeff c) {
    LaurentPoly p;
    if (c != 0) p.terms_[exponent] = c;
    return p;
}

LaurentPoly LaurentPoly::delta() {
    LaurentPoly p;
    p.terms_[2] = -1;
    p.terms_[-2] = -1;
    return p;
}

LaurentPoly::Coeff LaurentPoly::coeff(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0 : it->second;
}

int LaurentPoly::min_degree() const {
    if (terms_.empty()) throw std::domain_error("LaurentPoly: degree of zero polynomial");
    return terms_.begin()->first;
}

int LaurentPoly::max_degree() const {
    if (terms_.empty()) throw std::domain_error("LaurentPoly: degree of zero polynomial");
    return terms_.rbegin()->first;
}

LaurentPoly LaurentPoly::mirrored() const {
    LaurentPoly p;
    for (const auto& [e, c] : terms_) p.terms_[-e] = c;
    return p;
}

LaurentPoly LaurentPoly::pow(unsigned n) const {
    LaurentPoly result(1);
    LaurentPoly base = *this;
    while (n > 0) {
        if (n & 1u) result *= base;
        n >>= 1u;
        if (n > 0) base *= base;
    }
    return result;
}

void LaurentPoly::add_term(int exponent, Coeff c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
        it->second = checked_add(it->second, c);
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
    for (const auto& [e, c] : rhs.terms_) {
        if (c == std::numeric_limits<Coeff>::min()) throw std::overflow_error("LaurentPoly: coefficient overflow");
        add_term(e, -c);
    }
    return *this;
}

LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs) {
    LaurentPoly out;
    for (const auto& [e1, c1] : lhs.terms_)
        for (const auto& [e2, c2] : rhs.terms_) out.add_term(e1 + e2, checked_mul(c1, c2));
    return out;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) {
    *this = *this * rhs;
    return *this;
}

LaurentPoly operator-(const LaurentPoly& p) {
    LaurentPoly out;
    out -= p;
    return out;
}

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const int e = it->first;
        const Coeff c = it->second;
        const bool negative = c < 0;
        // |c| without overflowing on INT64_MIN
        const std::uint64_t mag = negative ? std::uint64_t(0) - std::uint64_t(c) : std::uint64_t(c);
        if (first) {
            if (negative) s += "-";
        } else {
            s += negative ? " - " : " + ";
        }
        first = false;
        if (e == 0) {
            s += std::to_string(mag);
            continue;
        }
        if (mag != 1) s += std::to_string(mag);
        s += "A";
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    auto fail = [&](std::size_t pos) -> LaurentPoly {
        throw ParseError("malformed Laurent polynomial", 1, pos + 1, text);
    };
    if (t == "0") return {};
    LaurentPoly p;
    std::size_t i = 0;
    if (t.empty()) fail(0);
    while (i < t.size()) {
        int sign = 1;
        if (t[i] == '+' || t[i] == '-') {
            sign = t[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail(i);
        }
        std::size_t start = i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        Coeff mag = 1;
        bool has_digits = i > start;
        if (has_digits) mag = std::stoll(t.substr(start, i - start));
        int exponent = 0;
        if (i < t.size() && t[i] == 'A') {
            ++i;
            exponent = 1;
            if (i < t.size() && t[i] == '^') {
                ++i;
                std::size_t es = i;
                if (i < t.size() && t[i] == '-') ++i;
                std::size_t ds = i;
                while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
                if (i == ds) fail(es);
                exponent = std::stoi(t.substr(es, i - es));
            }
        } else if (!has_digits) {
            fail(start);
        }
        p.add_term(exponent, sign * mag);
    }
    return p;
}

void to_json(nlohmann::json& j, const LaurentPoly& p) {
    j = nlohmann::json::object();
    for (const auto& [e, c] : p.terms()) j[std::to_string(e)] = c;
}

void from_json(const nlohmann::json& j, LaurentPoly& p) {
    p = LaurentPoly{};
    for (const auto& [key, value] : j.items()) p.add_term(std::stoi(key), value.get<LaurentPoly::Coeff>());
}

}  // namespace qknots
