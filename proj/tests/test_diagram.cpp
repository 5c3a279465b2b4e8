#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "qknots/bracket.hpp"
#include "qknots/errors.hpp"

using namespace qknots;

TEST_CASE("components and linking numbers of known links") {
    CHECK(count_components(fixtures::borromean()) == 3);
    CHECK(count_components(fixtures::right_trefoil()) == 1);
    CHECK(count_components(LinkDiagram::unlink(4)) == 4);
    CHECK(linking_number(fixtures::hopf(), 0, 1) == -1);
    CHECK(linking_number(fixtures::positive_hopf(), 0, 1) == 1);
    const auto m = linking_matrix(fixtures::borromean());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m[i][j] == 0);
    CHECK(writhe(fixtures::right_trefoil()) == 3);
    CHECK(writhe(fixtures::left_trefoil()) == -3);
}

TEST_CASE("PD parse errors carry a position") {
    try {
        parse_pd("X[1,2,3,4]\n  X[1,2,oops,4]");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() >= 3);
    }
    CHECK_THROWS_AS(parse_pd("X[1,2,3]"), ParseError);
    CHECK_THROWS_AS(parse_pd("Y[1,2,3,4]"), ParseError);
    // Structural problems are input errors too.
    CHECK_THROWS_AS(parse_pd("X[1,2,3,5]"), InputError);
    CHECK_THROWS_AS(parse_pd("X[1,1,1,1]"), InputError);
    CHECK_THROWS_AS(parse_braid("n=2: s2"), ParseError);
    CHECK_THROWS_AS(parse_braid("n=: s1"), ParseError);
}

TEST_CASE("comments, circles and orient headers") {
    const auto d = parse_pd("# a comment\nX[4,1,3,2], X[2,3,1,4] O[2]");
    CHECK(d.free_loops() == 2);
    CHECK(count_components(d) == 4);
    const auto r = parse_pd("orient: -1\nX[4,1,3,2] X[2,3,1,4]");
    CHECK(linking_number(r, 0, 1) == 1);
    CHECK(parse_pd(to_pd_text(r)) == r);
    // A component that is never the under-strand: both ends of arc 2 sit in slot 3.
    const auto over_only = LinkDiagram::from_crossings(
        {{{1, 4, 3, 2}, CrossingSign::negative}, {{3, 4, 1, 2}, CrossingSign::positive}}, 0);
    CHECK(parse_pd(to_pd_text(over_only)) == over_only);
}

TEST_CASE("property: text and JSON round trips") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        CAPTURE(trial);
        const auto d = gen::random_diagram(rng, 8);
        const auto back = parse_pd(to_pd_text(d));
        CHECK(same_up_to_relabeling(back, d));
        CHECK(writhe(back) == writhe(d));
        CHECK(linking_matrix(back) == linking_matrix(d));
        nlohmann::json j = d;
        CHECK(j.get<LinkDiagram>() == d);
        CHECK(same_up_to_relabeling(d.canonical(), d));
    }
}

TEST_CASE("property: braid closure components equal permutation cycles") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const auto b = gen::random_braid(rng, 5, 10);
        CAPTURE(b.to_string());
        const auto d = braid_closure(b);
        CHECK(count_components(d) == b.cycle_count());
        CHECK(d.crossing_count() == static_cast<int>(b.letters.size()));
        CHECK(writhe(d) == oracle::signed_sum(d));
        int exp_sum = 0;
        for (const auto& l : b.letters) exp_sum += l.exponent;
        CHECK(writhe(d) == exp_sum);
        CHECK(parse_braid(b.to_string()) == b);
        CHECK((b * b.inverse()).freely_reduced().letters.empty());
    }
}

TEST_CASE("property: switching a crossing is an involution that flips its sign") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = gen::random_diagram(rng, 8);
        if (d.crossing_count() == 0) continue;
        const int c = gen::uniform_int(rng, 0, d.crossing_count() - 1);
        const auto s = switch_crossing(d, c);
        CHECK(s.crossing(c).sign == -d.crossing(c).sign);
        CHECK(writhe(s) == writhe(d) - 2 * to_int(d.crossing(c).sign));
        CHECK(same_up_to_relabeling(switch_crossing(s, c), d));
        CHECK(count_components(s) == count_components(d));
    }
}

TEST_CASE("property: deleting a component") {
    std::mt19937_64 rng(10);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto d = gen::random_diagram(rng, 8);
        const int n = count_components(d);
        if (n < 2) continue;
        const int c = gen::uniform_int(rng, 0, n - 1);
        const auto r = delete_component(d, c);
        CHECK(count_components(r) == n - 1);
        // Linking numbers among the survivors are unchanged.
        std::vector<int> keep;
        for (int i = 0; i < n; ++i)
            if (i != c) keep.push_back(i);
        const auto before = linking_matrix(d), after = linking_matrix(r);
        // Survivors keep their relative order except crossing-free circles, which
        // renumber last; compare the multiset of pairwise values.
        std::multiset<int> mb, ma;
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = i + 1; j < keep.size(); ++j) {
                mb.insert(before[keep[i]][keep[j]]);
                ma.insert(after[i][j]);
            }
        CHECK(ma == mb);
        ++checked;
    }
    CHECK(checked > 50);
    CHECK_THROWS_AS(delete_component(fixtures::hopf(), 5), PreconditionError);
}

TEST_CASE("disjoint union multiplies brackets by delta") {
    const auto u = disjoint_union(fixtures::right_trefoil(), fixtures::hopf());
    CHECK(count_components(u) == 3);
    CHECK(connected_pieces(u).size() == 2);
    CHECK(bracket(u) == bracket(fixtures::right_trefoil()) * bracket(fixtures::hopf()) * LaurentPoly::delta());
}

TEST_CASE("flattening and resolving") {
    const auto t = fixtures::right_trefoil();
    const auto f = flatten(t);
    CHECK(f.node_count() == 3);
    std::set<std::string> seen;
    for (std::uint64_t i = 0; i < 8; ++i) {
        const auto r = resolve_index(f, i);
        CHECK(flatten(r) == f);
        seen.insert(to_pd_text(r));
    }
    CHECK(seen.size() == 8);
}
