#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "qknots/errors.hpp"
#include "qknots/quantum_knot.hpp"

using namespace qknots;

namespace {

std::map<std::string, double> named(const QuantumKnot& q) {
    std::map<std::string, double> out;
    for (const auto& [k, p] : q.outcome_distribution()) out[class_name(k)] += p;
    return out;
}

}  // namespace

TEST_CASE("class names of the fixtures") {
    CHECK(class_name(class_key(fixtures::right_trefoil())) == "trefoil_R");
    CHECK(class_name(class_key(fixtures::left_trefoil())) == "trefoil_L");
    CHECK(class_name(class_key(fixtures::hopf())) == "hopf");
    CHECK(class_name(class_key(fixtures::positive_hopf())) == "hopf");
    CHECK(class_name(class_key(fixtures::borromean())) == "borromean");
    CHECK(class_key(fixtures::right_trefoil()) != class_key(fixtures::left_trefoil()));
}

TEST_CASE("right trefoil's normalized invariant is -A^-16 + A^-12 + A^-4") {
    // Jones polynomial t + t^3 - t^4 under t = A^-4.
    CHECK(class_key(fixtures::right_trefoil()).fingerprint == "A^-4 + A^-12 - A^-16");
}

TEST_CASE("from_weighted_diagrams") {
    SUBCASE("single unknot") {
        const auto q = QuantumKnot::from_weighted_diagrams({{LinkDiagram::unknot(), {1, 0}}});
        CHECK(named(q) == std::map<std::string, double>{{"unknot", 1.0}});
    }
    SUBCASE("unknot + trefoil") {
        const auto q = QuantumKnot::from_weighted_diagrams(
            {{LinkDiagram::unknot(), {1, 0}}, {fixtures::right_trefoil(), {1, 0}}});
        const auto n = named(q);
        CHECK(n.at("unknot") == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(n.at("trefoil_R") == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("unknot and a kinked unknot share a class; amplitudes add") {
        const auto kink = apply_reidemeister(LinkDiagram::unknot(),
                                             R1Add{StrandRef::on_circle(0), Side::left, CrossingSign::positive});
        const auto q = QuantumKnot::from_weighted_diagrams({{LinkDiagram::unknot(), {1, 0}}, {kink, {1, 0}}});
        REQUIRE(q.terms().size() == 1);
        CHECK(q.terms().begin()->second.amplitude.real() == doctest::Approx(1.0));
        CHECK(q.terms().begin()->second.representative.crossing_count() == 0);
    }
    SUBCASE("all-zero amplitudes are rejected") {
        CHECK_THROWS_AS(QuantumKnot::from_weighted_diagrams({{LinkDiagram::unknot(), {0, 0}}}), PreconditionError);
    }
}

TEST_CASE("flat diagrams") {
    SUBCASE("flat trefoil: 3/4, 1/8, 1/8") {
        const auto n = named(from_flat_diagram(flatten(fixtures::right_trefoil())));
        CHECK(n.size() == 3);
        CHECK(n.at("unknot") == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(n.at("trefoil_L") == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(n.at("trefoil_R") == doctest::Approx(0.125).epsilon(1e-12));
    }
    SUBCASE("flat circle") {
        CHECK(named(from_flat_diagram(flatten(LinkDiagram::unknot()))) == std::map<std::string, double>{{"unknot", 1.0}});
    }
    SUBCASE("flat Hopf: 1/2 Hopf, 1/2 unlink") {
        const auto n = named(from_flat_diagram(flatten(fixtures::hopf())));
        CHECK(n.at("hopf") == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(n.at("2-unlink") == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("alternating resolution is the trefoil, a non-alternating one the unknot") {
        const auto t = fixtures::right_trefoil();
        const auto f = flatten(t);
        std::vector<std::uint8_t> original;
        for (int i = 0; i < 3; ++i) original.push_back(f.nodes[i].arcs == t.crossings()[i].arcs ? 0 : 1);
        CHECK(resolve(f, original) == t);
        auto one_switched = original;
        one_switched[0] ^= 1U;
        CHECK(class_name(class_key(resolve(f, one_switched))) == "unknot");
    }
    SUBCASE("serial and parallel classification agree") {
        const auto f = flatten(fixtures::borromean());
        CHECK(classify_resolutions_serial(f) == classify_resolutions_parallel(f));
    }
    SUBCASE("node cap") {
        FlatOptions opts;
        opts.node_cap = 2;
        CHECK_THROWS_AS(from_flat_diagram(flatten(fixtures::right_trefoil()), {}, opts), CapExceeded);
    }
}

TEST_CASE("measurement") {
    const auto q = from_flat_diagram(flatten(fixtures::right_trefoil()));
    SUBCASE("seed determinism and collapse") {
        const auto a = measure(q, 42), b = measure(q, 42);
        CHECK(a.key == b.key);
        CHECK(a.collapsed.terms().size() == 1);
        CHECK(a.collapsed.is_normalized());
        CHECK(a.probability > 0.0);
    }
    SUBCASE("both outcomes of an equal superposition occur") {
        const auto two = QuantumKnot::from_weighted_diagrams(
            {{LinkDiagram::unknot(), {1, 0}}, {fixtures::left_trefoil(), {0, 1}}});
        std::set<KnotClassKey> seen;
        for (std::uint64_t s = 0; s < 64; ++s) seen.insert(measure(two, s).key);
        CHECK(seen.size() == 2);
    }
    SUBCASE("unnormalized input is rejected") {
        CHECK_THROWS_AS(measure(QuantumKnot{}, 1), PreconditionError);
    }
}

TEST_CASE("internal state expansion sums to the bracket") {
    const auto pairs = internal_state_expansion(fixtures::hopf());
    CHECK(pairs.size() == 4);
    LaurentPoly sum;
    for (const auto& [s, w] : pairs) sum += w;
    CHECK(sum.to_string() == "-A^4 - A^-4");
    std::mt19937_64 rng(99);
    for (int i = 0; i < 40; ++i) {
        const auto d = gen::random_diagram(rng, 10);
        LaurentPoly total;
        for (const auto& [s, w] : internal_state_expansion(d)) total += w;
        CHECK(total == bracket(d));
    }
}

TEST_CASE("property: class keys are move-invariant and distributions sum to 1") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 60; ++i) {
        const auto d = gen::random_diagram(rng, 8);
        const auto site = gen::random_site(rng, d, 10);
        if (!site) continue;
        const auto e = apply_reidemeister(d, *site);
        CHECK(class_key(e) == class_key(d));
        const auto q1 = QuantumKnot::from_weighted_diagrams({{d, {0.6, 0.1}}, {fixtures::right_trefoil(), {0.3, -0.2}}});
        const auto q2 = QuantumKnot::from_weighted_diagrams({{e, {0.6, 0.1}}, {fixtures::right_trefoil(), {0.3, -0.2}}});
        REQUIRE(q1.terms().size() == q2.terms().size());
        auto it2 = q2.terms().begin();
        for (const auto& [k, t] : q1.terms()) {
            CHECK(k == it2->first);
            CHECK(std::abs(t.amplitude - it2->second.amplitude) < 1e-12);
            ++it2;
        }
        double total = 0;
        for (const auto& [k, p] : q1.outcome_distribution()) total += p;
        CHECK(std::abs(total - 1.0) < 1e-9);
        CHECK(q1.normalized().outcome_distribution() == q1.outcome_distribution());
    }
}
