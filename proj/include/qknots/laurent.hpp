#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

namespace qknots {

/// Exact Laurent polynomial in the variable A with 64-bit integer coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly when
/// their coefficient maps are equal. Arithmetic throws std::overflow_error rather
/// than wrapping.
class LaurentPoly {
public:
    using Coeff = std::int64_t;
    using Terms = std::map<int, Coeff>;

    LaurentPoly() = default;
    /// The constant polynomial c.
    LaurentPoly(Coeff c);  // NOLINT(google-explicit-constructor)

    /// c * A^exponent
    static LaurentPoly monomial(int exponent, Coeff c = 1);
    /// The loop value -A^2 - A^-2.
    static LaurentPoly delta();

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    Coeff coeff(int exponent) const;
    int min_degree() const;
    int max_degree() const;

    /// Substitutes A -> A^-1.
    LaurentPoly mirrored() const;
    LaurentPoly pow(unsigned n) const;

    LaurentPoly& operator+=(const LaurentPoly& rhs);
    LaurentPoly& operator-=(const LaurentPoly& rhs);
    LaurentPoly& operator*=(const LaurentPoly& rhs);
    /// Adds c * A^exponent in place.
    void add_term(int exponent, Coeff c);

    friend LaurentPoly operator+(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs += rhs; }
    friend LaurentPoly operator-(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs -= rhs; }
    friend LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs);
    friend LaurentPoly operator-(const LaurentPoly& p);
    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    /// Canonical text, descending exponents: "-A^4 - A^-4", "A^3 - 2 + 3A^-1", "0".
    std::string to_string() const;
    /// Inverse of to_string (accepts the same grammar, whitespace-insensitive).
    static LaurentPoly parse(const std::string& text);

private:
    Terms terms_;
};

/// JSON form: object mapping decimal exponent to coefficient.
void to_json(nlohmann::json& j, const LaurentPoly& p);
void from_json(const nlohmann::json& j, LaurentPoly& p);

}  // namespace qknots
