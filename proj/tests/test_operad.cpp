#include <doctest.h>

#include "opseq/error.hpp"
#include "opseq/operad.hpp"
#include "support.hpp"

using namespace opseq;
using namespace opseq::testing;

TEST_CASE("permutation words")
{
    Permutation p{2, 0, 1};
    auto word = transposition_word(p);
    Permutation q = p;
    for (int a : word)
        q = compose_perm(q, adjacent_transposition(3, a));
    CHECK(q == Permutation{0, 1, 2});
    CHECK(compose_perm(p, inverse_perm(p)) == Permutation{0, 1, 2});
}

TEST_CASE("Comm")
{
    for (Ring ring : {Ring::prime_field(2), Ring::rationals(), Ring::integers()}) {
        Operad c = builtin_comm(ring);
        CHECK(c.rank(2) == 1);
        CHECK(c.compose(2, 2, 1, V({1}), V({1})) == c.compose(2, 2, 2, V({1}), V({1})));
        CHECK(c.act_transposition(2, 1, V({1})) == V({1}));
        CHECK(check_operad(c).ok());
    }
    CHECK(check_operad(builtin_comm(Ring::prime_field(5), 4)).ok());
}

TEST_CASE("Assoc")
{
    Ring z = Ring::integers();
    Operad a = builtin_assoc(z);
    CHECK(a.rank(3) == 6);
    Vector id2 = unit_vector(2, assoc_index({0, 1}));
    CHECK(a.compose(2, 2, 1, id2, id2) == unit_vector(6, assoc_index({0, 1, 2})));
    CHECK(a.compose(2, 2, 2, id2, id2) == unit_vector(6, assoc_index({0, 1, 2})));
    CHECK(check_operad(a).ok());
    CHECK(check_operad(builtin_assoc(Ring::prime_field(3), 4)).ok());

    Operad bad = a;
    auto& t = bad.compositions.at({2, 2, 1});
    Vector col = t.column(0);
    std::rotate(col.begin(), col.begin() + 1, col.end());
    t.set_column(0, col);
    auto r = check_operad(bad);
    CHECK_FALSE(r.ok());
    MESSAGE(r.to_string());
    CHECK((r.law == "associativity" || r.law == "equivariance"));
}

TEST_CASE("Assoc corrupted entry in arity 4")
{
    Operad a = builtin_assoc(Ring::rationals(), 4);
    auto& t = a.compositions.at({3, 2, 1});
    Vector col = t.column(0);
    for (auto& x : col)
        x *= 2;
    t.set_column(0, col);
    auto r = check_operad(a);
    CHECK_FALSE(r.ok());
    MESSAGE(r.to_string());
}

TEST_CASE("Lie")
{
    Ring q = Ring::rationals();
    Operad lie = builtin_lie(q);
    CHECK(lie.rank(3) == 2);
    CHECK(rank(lie.compositions.at({2, 2, 1}).hcat(lie.compositions.at({2, 2, 2})), q) == 2);
    CHECK(lie.act_transposition(2, 1, V({1})) == V({-1}));
    Vector e1 = unit_vector(2, 0);
    Vector sum = add(q, add(q, e1, lie.act(3, {1, 2, 0}, e1)), lie.act(3, {2, 0, 1}, e1));
    CHECK(is_zero(sum));
    CHECK(check_operad(lie).ok());
    CHECK(check_operad(builtin_lie(Ring::integers())).ok());
    CHECK(check_operad(builtin_lie(Ring::prime_field(5))).ok());
    CHECK_THROWS_AS(builtin_lie(q, 4), Error);
    try {
        builtin_lie(q, 4);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unsupported_arity);
    }
}

TEST_CASE("acyclic operad and Leibniz mutation")
{
    Ring q = Ring::rationals();
    Operad o = acyclic_operad(q);
    CHECK(check_operad(o).ok());
    Operad h = homology_operad(o);
    CHECK(h.rank(2) == 0);
    CHECK(h.rank(3) == 0);
    CHECK(h.rank(1) == 1);
    CHECK(check_operad(h).ok());

    Operad bad = o;
    bad.component(3).delta(0, 1) = 0;
    auto r = check_operad(bad);
    CHECK(r.law == "Leibniz");
}

TEST_CASE("homology operad of zero-differential operads")
{
    for (Operad o : {builtin_comm(Ring::rationals()), builtin_assoc(Ring::prime_field(5)), builtin_lie(Ring::integers())}) {
        Operad h = homology_operad(o);
        for (int n = 1; n <= o.arity_cap; ++n) {
            CHECK(h.rank(n) == o.rank(n));
            CHECK(h.component(n).transpositions == o.component(n).transpositions);
        }
        CHECK(h.compositions == o.compositions);
        CHECK(check_operad(h).ok());
        Operad hh = homology_operad(h);
        for (int n = 1; n <= o.arity_cap; ++n)
            CHECK(hh.rank(n) == h.rank(n));
    }
}

TEST_CASE("arity out of range")
{
    Operad c = builtin_comm(Ring::rationals());
    CHECK_THROWS_AS(c.component(4), Error);
}
