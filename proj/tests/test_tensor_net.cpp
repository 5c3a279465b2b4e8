#include <doctest.h>

#include <Eigen/QR>
#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "qknots/errors.hpp"
#include "qknots/tensor_net.hpp"
#include "qknots/yang_baxter.hpp"

using namespace qknots;

namespace {

// Oracle: literal sum over every label assignment of every edge and free end.
Tensor brute_force(const NetworkGraph& g) {
    std::map<PortRef, int> slot;
    std::vector<int> dims;
    for (const auto& e : g.edges) {
        slot[e.a] = slot[e.b] = static_cast<int>(dims.size());
        dims.push_back(g.nodes[e.a.node].dims[e.a.port]);
    }
    const int internal = static_cast<int>(dims.size());
    Tensor out;
    for (const auto& f : g.free_ends) {
        slot[f] = static_cast<int>(dims.size());
        dims.push_back(g.nodes[f.node].dims[f.port]);
        out.dims.push_back(dims.back());
    }
    out.data.assign(out.size(), Complex{});
    std::vector<int> label(dims.size(), 0);
    while (true) {
        Complex term = 1.0;
        for (const auto& n : g.nodes) {
            std::size_t off = 0;
            for (int p = 0; p < n.port_count(); ++p) off = off * n.dims[p] + label[slot.at({n.id, p})];
            term *= n.entries[off];
        }
        std::size_t o = 0;
        for (std::size_t k = internal; k < dims.size(); ++k) o = o * dims[k] + label[k];
        out.data[o] += term;
        std::size_t k = dims.size();
        while (k > 0) {
            --k;
            if (++label[k] < dims[k]) break;
            label[k] = 0;
            if (k == 0) return out;
        }
        if (dims.empty()) return out;
    }
}

double rel_error(const Tensor& a, const Tensor& b) {
    REQUIRE(a.dims == b.dims);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        num = std::max(num, std::abs(a.data[i] - b.data[i]));
        den = std::max(den, std::abs(b.data[i]));
    }
    return num / std::max(1.0, den);
}

Eigen::MatrixXcd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXcd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m.entries[i * m.cols + j];
    return e;
}

DenseMatrix from_eigen(const Eigen::MatrixXcd& e) {
    DenseMatrix m{static_cast<int>(e.rows()), static_cast<int>(e.cols()), {}};
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.entries.push_back(e(i, j));
    return m;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int d) {
    const Eigen::MatrixXcd a = to_eigen(gen::random_matrix(rng, d, d));
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
}

Complex sandwich(const std::vector<Complex>& a, const DenseMatrix& m, const std::vector<Complex>& b) {
    Complex s{};
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) s += std::conj(a[i]) * m.entries[i * m.cols + j] * b[j];
    return s;
}

std::vector<Complex> basis(int d, int i) {
    std::vector<Complex> v(d);
    v[i] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("small contractions") {
    SUBCASE("single node without edges is its own tensor") {
        NetworkGraph g;
        g.add_node(matrix_node(2, 3, {1, 2, 3, 4, 5, 6}));
        g.free_ends = {{0, 0}, {0, 1}};
        const auto t = contract(g);
        CHECK(t.dims == std::vector<int>{2, 3});
        CHECK(t.at({1, 2}) == Complex(6));
    }
    SUBCASE("trace of the identity is d") {
        CHECK(contract_scalar(trace_network({3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}})) == Complex(3));
    }
    SUBCASE("diagonal trace") {
        CHECK(contract_scalar(trace_network({3, 3, {1, 0, 0, 0, 2, 0, 0, 0, 5}})) == Complex(8));
    }
    SUBCASE("random trace matches the diagonal sum") {
        std::mt19937_64 rng(1);
        const auto m = gen::random_matrix(rng, 4, 4);
        Complex diag{};
        for (int i = 0; i < 4; ++i) diag += m.entries[i * 5];
        CHECK(std::abs(contract_scalar(trace_network(m)) - diag) < 1e-12);
    }
    SUBCASE("matrix chains") {
        std::mt19937_64 rng(2);
        const auto m = gen::random_matrix(rng, 2, 3), n = gen::random_matrix(rng, 3, 4);
        const auto one = contract(matrix_chain_network({m}));
        CHECK(one.data == m.entries);
        const auto mn = contract(matrix_chain_network({m, n}));
        const Eigen::MatrixXcd ref = to_eigen(m) * to_eigen(n);
        CHECK(mn.dims == std::vector<int>{2, 4});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) CHECK(std::abs(mn.at({i, j}) - ref(i, j)) < 1e-12);
        const auto sq = gen::random_matrix(rng, 3, 3);
        const auto inv = from_eigen(to_eigen(sq).inverse());
        const auto id = contract(matrix_chain_network({sq, inv}));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(std::abs(id.at({i, j}) - Complex(i == j ? 1.0 : 0.0)) < 1e-9);
        CHECK_THROWS_AS(matrix_chain_network({m, m}), PreconditionError);
        CHECK_THROWS_AS(trace_network(m), PreconditionError);
    }
}

TEST_CASE("property: contraction equals the brute-force oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        CAPTURE(trial);
        const auto g = gen::random_network(rng);
        const auto oracle = brute_force(g);
        const auto greedy = contract(g);
        CHECK(rel_error(greedy, oracle) < 1e-9);
        const auto seq = contract(g, {.order = ContractionOrder::sequential});
        CHECK(rel_error(seq, greedy) < 1e-9);
        // Every output entry sums in the same fixed order either way.
        const auto serial = contract(g, {.parallel = false});
        CHECK(serial.data == greedy.data);
    }
}

TEST_CASE("cutting and inserting") {
    std::mt19937_64 rng(3);
    const auto m = gen::random_matrix(rng, 3, 3);
    const auto g = trace_network(m);
    SUBCASE("cut self-edge gives the matrix back") {
        const auto cut = cut_edge(g, 0);
        CHECK(cut.free_ends.size() == 2);
        CHECK(contract(cut).data == m.entries);
        CHECK(std::abs(contract_scalar(connect_ends(cut, 0, 1)) - contract_scalar(g)) < 1e-12);
        CHECK_THROWS_AS(cut_edge(g, 1), PreconditionError);
    }
    SUBCASE("multi-node cut adds two free ends") {
        const auto chain = matrix_chain_network({m, m, m});
        CHECK(cut_edge(chain, 1).free_ends.size() == chain.free_ends.size() + 2);
    }
    SUBCASE("ket then bra") {
        const auto a = gen::random_vector(rng, 3), b = gen::random_vector(rng, 3);
        const auto open = cut_edge(g, 0);  // free ends: row (out), column (in)
        const auto psi = contract(insert_ket(open, 1, b));
        const Eigen::VectorXcd ref = to_eigen(m) * Eigen::Map<const Eigen::VectorXcd>(b.data(), 3);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(psi.data[i] - ref(i)) < 1e-12);
        std::vector<Complex> abar;
        for (auto z : a) abar.push_back(std::conj(z));
        const auto amp = contract_scalar(insert_bra(insert_ket(open, 1, b), 0, abar));
        CHECK(std::abs(amp - sandwich(a, m, b)) < 1e-12);
        CHECK_THROWS_AS(insert_ket(open, 0, gen::random_vector(rng, 2)), PreconditionError);
        CHECK_THROWS_AS(insert_ket(open, 5, b), PreconditionError);
    }
}

TEST_CASE("ket-bra insertion reproduces <a|M|b>") {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int d = 2; d <= 4; ++d)
        for (int trial = 0; trial < 100; ++trial) {
            const auto m = gen::random_matrix(rng, d, d);
            const auto a = gen::random_vector(rng, d), b = gen::random_vector(rng, d);
            const auto v = contract_scalar(insert_ketbra(trace_network(m), 0, DensityInsertion::amplitude(a, b)));
            worst = std::max(worst, std::abs(v - sandwich(a, m, b)));
        }
    CHECK(worst < 1e-9);

    const DenseMatrix id{3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}};
    CHECK(std::abs(contract_scalar(insert_ketbra(trace_network(id), 0, DensityInsertion::basis(3, 1, 1))) - 1.0) <
          1e-12);
    // a orthogonal to M b
    const auto m = gen::random_matrix(rng, 2, 2);
    const std::vector<Complex> b{1.0, 0.0};
    const Complex mb0 = m.entries[0], mb1 = m.entries[2];
    const std::vector<Complex> a{-std::conj(mb1), std::conj(mb0)};
    CHECK(std::abs(contract_scalar(insert_ketbra(trace_network(m), 0, DensityInsertion::amplitude(a, b)))) < 1e-9);
}

TEST_CASE("doubling gives the squared modulus") {
    std::mt19937_64 rng(9);
    for (int d = 2; d <= 4; ++d)
        for (int trial = 0; trial < 100; ++trial) {
            const auto m = gen::random_matrix(rng, d, d);
            const auto a = basis(d, gen::uniform_int(rng, 0, d - 1)), b = basis(d, gen::uniform_int(rng, 0, d - 1));
            const auto n = insert_ketbra(trace_network(m), 0, DensityInsertion::amplitude(a, b));
            const Complex amp = contract_scalar(n);
            const Complex dbl = contract_scalar(double_network(n));
            CHECK(std::abs(dbl - std::norm(amp)) < 1e-9);
            CHECK(std::abs(dbl.imag()) < 1e-12);
            CHECK(dbl.real() >= 0.0);
        }
    SUBCASE("unitary M with a = M b") {
        const Eigen::MatrixXcd u = random_unitary(rng, 3);
        const auto b = gen::random_vector(rng, 3);
        Eigen::VectorXcd bv = Eigen::Map<const Eigen::VectorXcd>(b.data(), 3);
        bv.normalize();
        const Eigen::VectorXcd av = u * bv;
        const std::vector<Complex> bb(bv.data(), bv.data() + 3), aa(av.data(), av.data() + 3);
        const auto n = insert_ketbra(trace_network(from_eigen(u)), 0, DensityInsertion::amplitude(aa, bb));
        CHECK(std::abs(contract_scalar(double_network(n)) - 1.0) < 1e-9);
    }
    SUBCASE("two measurement sites are refused") {
        const auto m = gen::random_matrix(rng, 2, 2);
        auto chain = matrix_chain_network({m, m});
        chain.edges.push_back({chain.free_ends[0], chain.free_ends[1]});
        chain.free_ends.clear();
        auto two = insert_ketbra(insert_ketbra(chain, 0, DensityInsertion::basis(2, 0, 0)), 0,
                                 DensityInsertion::basis(2, 1, 1));
        CHECK_THROWS_AS(double_network(two), PreconditionError);
        CHECK_THROWS_AS(double_network(trace_network(m)), PreconditionError);
    }
}

TEST_CASE("Yang-Baxter checks") {
    CHECK(check_yang_baxter(identity_crossing(2), 1e-12));
    CHECK(check_yang_baxter(swap_crossing(3), 1e-12));
    const auto r = default_crossing_tensor();
    CHECK(is_unitary(r, 1e-12));
    CHECK(check_yang_baxter(r, 1e-12));
    std::mt19937_64 rng(4);
    const CrossingTensor u{2, random_unitary(rng, 4)};
    CHECK(is_unitary(u, 1e-9));
    CHECK_FALSE(check_yang_baxter(u, 1e-6));
    CHECK_THROWS_AS(link_to_network(fixtures::borromean_braid(), u), PreconditionError);
    CHECK_THROWS_AS(check_yang_baxter(CrossingTensor{2, Eigen::MatrixXcd::Identity(3, 3)}, 1e-9), PreconditionError);
}

TEST_CASE("braid closures as networks") {
    const auto r = default_crossing_tensor();
    CHECK(std::abs(contract_scalar(link_to_network(BraidWord{3, {}}, r).graph) - 8.0) < 1e-12);
    const auto cancel = link_to_network(parse_braid("n=2: s1 s1^-1"), r);
    CHECK(std::abs(contract_scalar(cancel.graph) - 4.0) < 1e-9);
    const auto b = fixtures::borromean_braid();
    const auto net = link_to_network(b, r);
    CHECK(net.graph.nodes.size() == b.letters.size());
    CHECK(std::abs(contract_scalar(net.graph) - braid_trace_dense(b, r)) < 1e-9);

    SUBCASE("property: network evaluation equals the dense trace") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            const auto w = gen::random_braid(rng, 4, 10);
            CAPTURE(w.to_string());
            CHECK(std::abs(contract_scalar(link_to_network(w, r).graph) - braid_trace_dense(w, r)) < 1e-9);
        }
    }
}

TEST_CASE("property: R2 and R3 rewrites leave the evaluation unchanged") {
    const auto r = default_crossing_tensor();
    std::mt19937_64 rng(31);
    int r3_checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto w = gen::random_braid(rng, 4, 10);
        if (w.strand_count < 2) continue;
        const Complex base = contract_scalar(link_to_network(w, r).graph);
        // R2: insert s_i s_i^-1 at a random place.
        auto r2 = w;
        const int i = gen::uniform_int(rng, 1, w.strand_count - 1);
        const int sign = gen::uniform_int(rng, 0, 1) ? 1 : -1;
        const auto at = r2.letters.begin() + gen::uniform_int(rng, 0, static_cast<int>(r2.letters.size()));
        r2.letters.insert(at, {{i, sign}, {i, -sign}});
        CHECK(std::abs(contract_scalar(link_to_network(r2, r).graph) - base) < 1e-9);
        // R3: splice s_i s_i+1 s_i and s_i+1 s_i s_i+1 into the same place.
        if (w.strand_count >= 3) {
            const int j = gen::uniform_int(rng, 1, w.strand_count - 2);
            const int pos = gen::uniform_int(rng, 0, static_cast<int>(w.letters.size()));
            auto lhs = w, rhs = w;
            lhs.letters.insert(lhs.letters.begin() + pos, {{j, 1}, {j + 1, 1}, {j, 1}});
            rhs.letters.insert(rhs.letters.begin() + pos, {{j + 1, 1}, {j, 1}, {j + 1, 1}});
            CHECK(std::abs(contract_scalar(link_to_network(lhs, r).graph) -
                           contract_scalar(link_to_network(rhs, r).graph)) < 1e-9);
            ++r3_checked;
        }
    }
    CHECK(r3_checked > 20);
}

TEST_CASE("measuring a component") {
    const auto r = default_crossing_tensor();
    SUBCASE("completeness sum reproduces the uncut value") {
        const auto net = link_to_network(fixtures::borromean_braid(), r);
        for (int c = 0; c < 3; ++c) {
            Complex sum{};
            Complex uncut{};
            for (int i = 0; i < 2; ++i) {
                const auto m = measure_component(net, c, DensityInsertion::basis(2, i, i));
                sum += m.value;
                uncut = m.uncut;
            }
            CHECK(std::abs(sum - uncut) < 1e-9);
        }
    }
    SUBCASE("a single insertion differs from deleting the component") {
        const auto net = link_to_network(fixtures::borromean_braid(), r);
        for (int c = 0; c < 3; ++c)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const auto m = measure_component(net, c, DensityInsertion::basis(2, a, b));
                    REQUIRE(m.deleted.has_value());
                    CHECK(std::abs(m.value - *m.deleted) > 1e-6);
                }
    }
    SUBCASE("identity braid gives <a|b> d^(n-1)") {
        std::mt19937_64 rng(8);
        const auto net = link_to_network(BraidWord{3, {}}, r);
        const auto a = gen::random_vector(rng, 2), b = gen::random_vector(rng, 2);
        const Complex ab = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
        CHECK(std::abs(measure_component(net, 1, DensityInsertion::amplitude(a, b)).value - ab * 4.0) < 1e-12);
    }
    SUBCASE("bad component") {
        const auto net = link_to_network(fixtures::borromean_braid(), r);
        CHECK_THROWS_AS(measure_component(net, 3, DensityInsertion::basis(2, 0, 0)), PreconditionError);
    }
}

TEST_CASE("network JSON round trip and caps") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = gen::random_network(rng);
        const nlohmann::json j = g;
        const auto back = j.get<NetworkGraph>();
        CHECK(nlohmann::json(back) == j);
        CHECK(contract(back).data == contract(g).data);
    }
    CHECK_THROWS_AS(nlohmann::json::parse(R"({"nodes":[{"id":0,"shape":[2],"entries":[[1,0]]}],"edges":[]})")
                        .get<NetworkGraph>(),
                    InputError);
    const auto big = link_to_network(parse_braid("n=4: s1 s2 s3 s1 s2 s3"), default_crossing_tensor());
    CHECK_THROWS_AS(contract(big.graph, {.budget = 8}), CapExceeded);
    CHECK_THROWS_AS(contract(big.graph, {.node_cap = 2}), CapExceeded);
}
