#include "qknots/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <Eigen/SVD>

#include "qknots/errors.hpp"

namespace qknots {

namespace {

int bit_of(std::uint64_t index, int n, int q) { return static_cast<int>((index >> (n - 1 - q)) & 1U); }

void check_qubit(const PureState& s, int q) {
    if (q < 0 || q >= s.qubit_count())
        throw PreconditionError("qubit " + std::to_string(q) + " out of range for " + std::to_string(s.qubit_count()) +
                                " qubits");
}

std::string fmt12(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace

PureState::PureState(int qubits, std::vector<Complex> amplitudes, bool normalized)
    : qubits_(qubits), amps_(std::move(amplitudes)), normalized_(normalized) {
    if (qubits_ < 1) throw PreconditionError("a state needs at least one qubit");
    if (qubits_ > 62) throw CapExceeded("too many qubits");
    if (amps_.size() != (std::size_t{1} << qubits_))
        throw PreconditionError("expected 2^" + std::to_string(qubits_) + " amplitudes");
    for (const auto& a : amps_)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw PreconditionError("amplitudes must be finite");
}

PureState PureState::from_amplitudes(int qubits, std::vector<Complex> amplitudes, int qubit_cap) {
    if (qubits > qubit_cap)
        throw CapExceeded(std::to_string(qubits) + " qubits exceed the cap of " + std::to_string(qubit_cap));
    double n2 = 0.0;
    for (const auto& a : amplitudes) n2 += std::norm(a);
    const bool normalized = std::abs(n2 - 1.0) <= 1e-9;
    return PureState(qubits, std::move(amplitudes), normalized);
}

PureState PureState::basis(int qubits, std::uint64_t index) {
    std::vector<Complex> a(std::size_t{1} << qubits);
    a.at(index) = 1.0;
    return PureState(qubits, std::move(a), true);
}

double PureState::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

PureState PureState::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw PreconditionError("cannot normalize the zero vector");
    std::vector<Complex> a = amps_;
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& x : a) x *= scale;
    return PureState(qubits_, std::move(a), true);
}

std::string PureState::to_string() const {
    std::string out;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        const Complex a = amps_[i];
        if (std::abs(a) < 1e-15) continue;
        std::string coef;
        if (std::abs(a.imag()) < 1e-15)
            coef = fmt12(a.real());
        else
            coef = "(" + fmt12(a.real()) + (a.imag() < 0 ? "-" : "+") + fmt12(std::abs(a.imag())) + "i)";
        std::string ket;
        for (int q = 0; q < qubits_; ++q) ket += bit_of(i, qubits_, q) ? '1' : '0';
        if (!out.empty()) out += " + ";
        out += coef + "|" + ket + ">";
    }
    return out.empty() ? "0" : out;
}

PureState ghz(int n) {
    if (n < 2) throw PreconditionError("GHZ needs at least 2 qubits");
    if (n > kDefaultQubitCap) throw CapExceeded("GHZ size exceeds the qubit cap");
    std::vector<Complex> a(std::size_t{1} << n);
    a.front() = a.back() = 1.0 / std::sqrt(2.0);
    return PureState(n, std::move(a), true);
}

PureState tensor(const PureState& a, const PureState& b) {
    const int n = a.qubit_count() + b.qubit_count();
    std::vector<Complex> out(std::size_t{1} << n);
    const std::size_t nb = b.amplitudes().size();
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
        for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = a.amplitudes()[i] * b.amplitudes()[j];
    return PureState(n, std::move(out), a.is_normalized() && b.is_normalized());
}

PureState parse_state(const std::string& text, int qubit_cap) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    int n = -1;
    std::map<std::uint64_t, Complex> entries;
    std::optional<PureState> shorthand;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "ghz") {
            int k = 0;
            if (!(ls >> k)) throw ParseError("expected 'ghz <n>'", line_no, 1, line);
            if (k > qubit_cap) throw CapExceeded("GHZ size exceeds the qubit cap");
            if (shorthand || !entries.empty()) throw ParseError("ghz must be the only entry", line_no, 1, first);
            try {
                shorthand = ghz(k);
            } catch (const PreconditionError& e) {
                throw ParseError(e.what(), line_no, 1, line);
            }
            continue;
        }
        if (shorthand) throw ParseError("ghz must be the only entry", line_no, 1, first);
        if (first.find_first_not_of("01") != std::string::npos)
            throw ParseError("expected a bitstring of 0/1", line_no, 1, first);
        const int len = static_cast<int>(first.size());
        if (n < 0) {
            if (len > qubit_cap) throw CapExceeded(std::to_string(len) + " qubits exceed the cap");
            n = len;
        } else if (len != n) {
            throw ParseError("bitstring length differs from earlier lines", line_no, 1, first);
        }
        double re = 0.0, im = 0.0;
        std::string tok;
        if (!(ls >> tok)) throw ParseError("missing real part", line_no, first.size() + 1, first);
        try {
            std::size_t used = 0;
            re = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            if (ls >> tok) {
                im = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            }
        } catch (const std::logic_error&) {
            throw ParseError("not a number", line_no, line.find(tok) + 1, tok);
        }
        if (ls >> tok) throw ParseError("unexpected trailing token", line_no, line.find(tok) + 1, tok);
        entries[std::stoull(first, nullptr, 2)] += Complex(re, im);
    }
    if (shorthand) return *shorthand;
    if (n < 0) throw ParseError("empty state", 1, 1, "");
    std::vector<Complex> a(std::size_t{1} << n);
    for (const auto& [i, v] : entries) a[i] = v;
    return PureState::from_amplitudes(n, std::move(a), qubit_cap);
}

OutcomeBranch project_qubit(const PureState& s, int q, int b) {
    check_qubit(s, q);
    if (b != 0 && b != 1) throw PreconditionError("outcome must be 0 or 1");
    if (!s.is_normalized()) throw PreconditionError("projection probabilities need a normalized state");
    const int n = s.qubit_count();
    if (n < 2) throw PreconditionError("projection needs at least 2 qubits to leave a residual");
    std::vector<Complex> rest(std::size_t{1} << (n - 1));
    double p = 0.0;
    for (std::uint64_t i = 0; i < s.amplitudes().size(); ++i) {
        if (bit_of(i, n, q) != b) continue;
        const std::uint64_t high = i >> (n - q);
        const std::uint64_t low = i & ((std::uint64_t{1} << (n - 1 - q)) - 1);
        const std::uint64_t j = (high << (n - 1 - q)) | low;
        rest[j] = s.amplitudes()[i];
        p += std::norm(s.amplitudes()[i]);
    }
    OutcomeBranch br;
    br.qubit = q;
    br.outcome = b;
    br.probability = p;
    br.defined = p > 0.0;
    if (br.defined) br.residual = PureState(n - 1, std::move(rest), false).normalized();
    return br;
}

ProductTest product_test(const PureState& s, const std::vector<int>& left) {
    const int n = s.qubit_count();
    std::set<int> l(left.begin(), left.end());
    for (int q : l) check_qubit(s, q);
    if (l.empty() || static_cast<int>(l.size()) == n)
        throw PreconditionError("bipartition needs a nonempty proper subset of qubits");
    std::vector<int> right;
    for (int q = 0; q < n; ++q)
        if (!l.count(q)) right.push_back(q);
    const std::vector<int> lv(l.begin(), l.end());
    Eigen::MatrixXcd m(std::size_t{1} << lv.size(), std::size_t{1} << right.size());
    for (std::uint64_t i = 0; i < s.amplitudes().size(); ++i) {
        std::uint64_t r = 0, c = 0;
        for (int q : lv) r = (r << 1) | bit_of(i, n, q);
        for (int q : right) c = (c << 1) | bit_of(i, n, q);
        m(r, c) = s.amplitudes()[i];
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0)) throw PreconditionError("product test on the zero vector");
    ProductTest t;
    t.ratio = sv.size() > 1 ? sv(1) / sv(0) : 0.0;
    t.product = t.ratio <= kRankTolerance;
    t.near_threshold = t.ratio > kRankTolerance * 1e-2 && t.ratio < kRankTolerance * 1e2;
    return t;
}

bool is_product_bipartition(const PureState& s, const std::vector<int>& left) { return product_test(s, left).product; }

bool is_fully_product(const PureState& s) {
    for (int q = 0; q < s.qubit_count() && s.qubit_count() > 1; ++q)
        if (!is_product_bipartition(s, {q})) return false;
    return true;
}

std::vector<PatternRow> entanglement_pattern(const PureState& s) {
    if (s.qubit_count() < 2) throw PreconditionError("an entanglement pattern needs at least 2 qubits");
    std::vector<PatternRow> rows;
    for (int q = 0; q < s.qubit_count(); ++q) {
        PatternRow row;
        row.qubit = q;
        for (int b = 0; b < 2; ++b) {
            const OutcomeBranch br = project_qubit(s, q, b);
            BranchInfo& info = row.branches[b];
            info.outcome = b;
            info.probability = br.probability;
            info.defined = br.defined;
            if (!br.defined) continue;
            const PureState& r = br.residual;
            for (int k = 0; k < r.qubit_count() && r.qubit_count() > 1; ++k) {
                const ProductTest t = product_test(r, {k});
                info.entangled |= !t.product;
                info.near_threshold |= t.near_threshold;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

PureState apply_local_basis_change(const PureState& s, int q, const Eigen::Matrix2cd& m) {
    check_qubit(s, q);
    if (std::abs(m.determinant()) <= 1e-12 * std::max(1.0, m.squaredNorm()))
        throw PreconditionError("basis-change matrix is singular");
    const bool unitary = (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= 1e-12;
    const int n = s.qubit_count();
    const std::uint64_t stride = std::uint64_t{1} << (n - 1 - q);
    std::vector<Complex> out = s.amplitudes();
    for (std::uint64_t i = 0; i < out.size(); ++i) {
        if (i & stride) continue;
        const Complex c0 = s.amplitudes()[i], c1 = s.amplitudes()[i | stride];
        out[i] = m(0, 0) * c0 + m(0, 1) * c1;
        out[i | stride] = m(1, 0) * c0 + m(1, 1) * c1;
    }
    return PureState(n, std::move(out), s.is_normalized() && unitary);
}

Complex parse_complex(const std::string& text) {
    std::string tok = text;
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) throw ParseError("empty number", 1, 1, text);
    try {
        if (tok.back() == 'i') {
            // re+imi, re-imi or imi
            const std::string body = tok.substr(0, tok.size() - 1);
            std::size_t split = body.find_last_of("+-");
            while (split != std::string::npos && split > 0 && (body[split - 1] == 'e' || body[split - 1] == 'E'))
                split = body.find_last_of("+-", split - 1);
            if (split == std::string::npos || split == 0) {
                std::size_t used = 0;
                const double im = body.empty() || body == "+" ? 1.0 : body == "-" ? -1.0 : std::stod(body, &used);
                if (used != 0 && used != body.size()) throw std::invalid_argument(tok);
                return {0.0, im};
            }
            const std::string re = body.substr(0, split), im = body.substr(split);
            std::size_t used = 0;
            const double rv = std::stod(re, &used);
            if (used != re.size()) throw std::invalid_argument(tok);
            double iv = im == "+" ? 1.0 : im == "-" ? -1.0 : 0.0;
            if (im != "+" && im != "-") {
                iv = std::stod(im, &used);
                if (used != im.size()) throw std::invalid_argument(tok);
            }
            return {rv, iv};
        }
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return {v, 0.0};
    } catch (const std::logic_error&) {
        throw ParseError("not a number", 1, 1, tok);
    }
}

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ';', ',');
    std::istringstream in(cleaned);
    std::string tok;
    std::vector<Complex> vals;
    while (std::getline(in, tok, ',')) vals.push_back(parse_complex(tok));
    if (!cleaned.empty() && cleaned.back() == ',') throw ParseError("trailing comma", 1, text.size(), text);
    return vals;
}

Eigen::Matrix2cd parse_matrix2(const std::string& text) {
    const auto vals = parse_complex_list(text);
    if (vals.size() != 4) throw ParseError("expected 4 entries 'a,b;c,d'", 1, 1, text);
    Eigen::Matrix2cd m;
    m << vals[0], vals[1], vals[2], vals[3];
    return m;
}

std::string to_state_text(const PureState& s) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::uint64_t i = 0; i < s.amplitudes().size(); ++i) {
        const Complex a = s.amplitudes()[i];
        if (a == Complex(0.0, 0.0)) continue;
        for (int q = 0; q < s.qubit_count(); ++q) os << (bit_of(i, s.qubit_count(), q) ? '1' : '0');
        os << ' ' << a.real();
        if (a.imag() != 0.0) os << ' ' << a.imag();
        os << '\n';
    }
    return os.str();
}

void to_json(nlohmann::json& j, const PureState& s) {
    auto amps = nlohmann::json::array();
    for (std::uint64_t i = 0; i < s.amplitudes().size(); ++i) {
        const Complex a = s.amplitudes()[i];
        if (a == Complex(0.0, 0.0)) continue;
        std::string ket;
        for (int q = 0; q < s.qubit_count(); ++q) ket += bit_of(i, s.qubit_count(), q) ? '1' : '0';
        amps.push_back({{"basis", ket}, {"re", a.real()}, {"im", a.imag()}});
    }
    j = nlohmann::json{{"qubits", s.qubit_count()}, {"normalized", s.is_normalized()}, {"amplitudes", amps}};
}

void to_json(nlohmann::json& j, const BranchInfo& b) {
    j = nlohmann::json{{"outcome", b.outcome}, {"probability", b.probability}, {"defined", b.defined}};
    if (b.defined) j["residual"] = b.entangled ? "entangled" : "unentangled";
    if (b.near_threshold) j["warning"] = "singular-value ratio near the rank threshold";
}

void to_json(nlohmann::json& j, const PatternRow& r) {
    j = nlohmann::json{{"qubit", r.qubit}, {"branches", r.branches}};
}

}  // namespace qknots
