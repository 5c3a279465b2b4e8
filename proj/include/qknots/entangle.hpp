#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace qknots {

using Complex = std::complex<double>;

inline constexpr int kDefaultQubitCap = 20;
/// Relative singular-value threshold of the product test.
inline constexpr double kRankTolerance = 1e-9;

/// Dense n-qubit state. Qubit 0 is the leftmost bit: basis index = sum_q b_q 2^(n-1-q).
class PureState {
public:
    /// Takes amplitudes as given. `normalized` is the state's label; from_amplitudes
    /// derives it from the norm.
    PureState(int qubits, std::vector<Complex> amplitudes, bool normalized);

    static PureState from_amplitudes(int qubits, std::vector<Complex> amplitudes, int qubit_cap = kDefaultQubitCap);
    static PureState basis(int qubits, std::uint64_t index);

    int qubit_count() const noexcept { return qubits_; }
    const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
    Complex amplitude(std::uint64_t index) const { return amps_.at(index); }
    bool is_normalized() const noexcept { return normalized_; }
    double norm_squared() const;
    PureState normalized() const;

    /// "0.707106781187|000> + 0.707106781187|111>"
    std::string to_string() const;

private:
    int qubits_;
    std::vector<Complex> amps_;
    bool normalized_;
};

/// (|0...0> + |1...1>) / sqrt(2)
PureState ghz(int n);
PureState tensor(const PureState& a, const PureState& b);

/// Parses lines "<bitstring> <re> [<im>]" (repeated bitstrings add) or a single
/// "ghz <n>" line; '#' starts a comment.
PureState parse_state(const std::string& text, int qubit_cap = kDefaultQubitCap);

struct OutcomeBranch {
    int qubit = 0;
    int outcome = 0;
    double probability = 0.0;
    /// False when the branch has probability 0; `residual` is then meaningless.
    bool defined = false;
    PureState residual{1, {Complex(1.0, 0.0), Complex(0.0, 0.0)}, true};
};

/// Measures qubit q with result b. Needs a normalized state with at least 2 qubits.
OutcomeBranch project_qubit(const PureState& s, int q, int b);

struct ProductTest {
    bool product = false;
    /// sigma_2 / sigma_1 of the reshaped amplitude matrix.
    double ratio = 0.0;
    /// Ratio within two decades of the threshold on either side.
    bool near_threshold = false;
};

ProductTest product_test(const PureState& s, const std::vector<int>& left);
bool is_product_bipartition(const PureState& s, const std::vector<int>& left);
/// Every single-qubit cut is a product cut. True for one qubit.
bool is_fully_product(const PureState& s);

struct BranchInfo {
    int outcome = 0;
    double probability = 0.0;
    bool defined = false;
    bool entangled = false;
    bool near_threshold = false;
};

struct PatternRow {
    int qubit = 0;
    std::array<BranchInfo, 2> branches;
};

std::vector<PatternRow> entanglement_pattern(const PureState& s);

/// Applies m to factor q: the coefficient pair (c0, c1) becomes m * (c0, c1). The
/// result keeps the normalized label only when m is unitary (within 1e-12).
PureState apply_local_basis_change(const PureState& s, int q, const Eigen::Matrix2cd& m);

/// Parses "a,b;c,d" with real or "re+imi" complex entries.
Eigen::Matrix2cd parse_matrix2(const std::string& text);
/// "1", "-0.5", "2i", "0.5-0.5i".
Complex parse_complex(const std::string& text);
/// Comma/semicolon separated parse_complex entries.
std::vector<Complex> parse_complex_list(const std::string& text);
/// State file text ("<bits> <re> [<im>]" per nonzero amplitude), full precision.
std::string to_state_text(const PureState& s);

void to_json(nlohmann::json& j, const PureState& s);
void to_json(nlohmann::json& j, const BranchInfo& b);
void to_json(nlohmann::json& j, const PatternRow& r);

}  // namespace qknots
