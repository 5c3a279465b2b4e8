#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "qknots/bracket.hpp"
#include "qknots/errors.hpp"
#include "qknots/moves.hpp"

using namespace qknots;

namespace {

LaurentPoly minus_a_cubed(int sign) { return LaurentPoly::monomial(3 * sign, -1); }

}  // namespace

TEST_CASE("faces of the trefoil and Hopf link satisfy Euler") {
    CHECK(faces(fixtures::right_trefoil()).size() == 5);
    CHECK(faces(fixtures::hopf()).size() == 4);
    CHECK(satisfies_euler(fixtures::borromean()));
}

TEST_CASE("R1+ on the unknot gives a one-crossing unknot") {
    for (Side side : {Side::left, Side::right})
        for (CrossingSign sign : {CrossingSign::positive, CrossingSign::negative}) {
            const auto k = apply_reidemeister(LinkDiagram::unknot(), R1Add{StrandRef::on_circle(0), side, sign});
            CHECK(k.crossing_count() == 1);
            CHECK(count_components(k) == 1);
            CHECK(writhe(k) == to_int(sign));
            CHECK(bracket(k) == minus_a_cubed(to_int(sign)));
            CHECK(normalized_invariant(k) == LaurentPoly(1));
        }
}

TEST_CASE("a positive left kink has the documented PD form") {
    const auto k = apply_reidemeister(fixtures::right_trefoil(), R1Add{StrandRef::on_arc(1), Side::left, CrossingSign::positive});
    const Crossing& c = k.crossings().back();
    CHECK(c.arcs[2] == c.arcs[3]);
    CHECK(c.arcs[0] == 1);
    CHECK(c.sign == CrossingSign::positive);
}

TEST_CASE("R2+ followed by R2- restores the diagram up to relabeling") {
    const auto t = fixtures::right_trefoil();
    int checked = 0;
    for (const auto& site : enumerate_sites(t, {false, false, true, false, false})) {
        const auto up = apply_reidemeister(t, site);
        REQUIRE(up.crossing_count() == 5);
        const int n = up.crossing_count();
        const auto down = apply_reidemeister(up, R2Remove{n - 2, n - 1});
        CHECK(same_up_to_relabeling(down.canonical(), t.canonical()));
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("R3 on the Borromean rings keeps the bracket") {
    auto d = fixtures::borromean();
    // Make a triangle available: push one strand across a crossing's neighbourhood.
    int applied = 0;
    std::mt19937_64 rng(7);
    for (int step = 0; step < 40 && applied < 3; ++step) {
        auto r3s = enumerate_sites(d, {false, false, false, false, true});
        if (!r3s.empty()) {
            const auto next = apply_reidemeister(d, r3s.front());
            CHECK(bracket(next) == bracket(d));
            CHECK(satisfies_euler(next));
            d = next;
            ++applied;
        } else {
            auto site = gen::random_site(rng, d, 10);
            if (site && !std::holds_alternative<R1Add>(*site)) d = apply_reidemeister(d, *site);
        }
    }
    CHECK(applied > 0);
}

TEST_CASE("invalid sites are rejected with a reason") {
    const auto t = fixtures::right_trefoil();
    CHECK_THROWS_AS(apply_reidemeister(t, R1Remove{0}), PreconditionError);
    CHECK_THROWS_AS(apply_reidemeister(t, R2Remove{0, 1}), PreconditionError);
    CHECK_THROWS_AS(apply_reidemeister(t, R3{0, 1, 2}), PreconditionError);
    CHECK_THROWS_AS(apply_reidemeister(t, R1Add{StrandRef::on_arc(99), Side::left, CrossingSign::positive}),
                    PreconditionError);
}

TEST_CASE("property: moves keep planarity, components and linking numbers; bracket transforms exactly") {
    std::mt19937_64 rng(20261018);
    int r1 = 0, r2 = 0, r3 = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto d = gen::random_diagram(rng, 10);
        const auto site = gen::random_site(rng, d, 10);
        if (!site) continue;
        INFO("trial " << trial << ": " << describe(*site) << " on " << to_pd_text(d));
        const auto e = apply_reidemeister(d, *site);
        REQUIRE(satisfies_euler(e));
        CHECK(count_components(e) == count_components(d));
        CHECK(writhe(e) - writhe(d) == writhe_change(d, *site));
        CHECK(normalized_invariant(e) == normalized_invariant(d));
        const int dw = writhe_change(d, *site);
        if (dw != 0) {
            CHECK(bracket(e) == bracket(d) * minus_a_cubed(dw));
            ++r1;
        } else {
            CHECK(bracket(e) == bracket(d));
            (std::holds_alternative<R3>(*site) ? r3 : r2)++;
        }
        // Component ids can shift when circles are created or absorbed; compare as multisets.
        if (count_components(d) >= 2) {
            std::multiset<int> before, after;
            for (const auto& row : linking_matrix(d))
                for (int v : row) before.insert(v);
            for (const auto& row : linking_matrix(e))
                for (int v : row) after.insert(v);
            CHECK(before == after);
        }
    }
    CHECK(r1 > 20);
    CHECK(r2 > 20);
    CHECK(r3 > 5);
}
