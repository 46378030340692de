#include <doctest.h>

#include "opseq/error.hpp"
#include "opseq/prop.hpp"

using namespace opseq;

TEST_CASE("endomorphism PROP")
{
    Ring q = Ring::rationals();
    Prop one = endomorphism_prop(q, 1);
    for (auto& [key, c] : one.components)
        CHECK(c.rank() == 1);
    CHECK(check_prop(one).ok());

    Prop two = endomorphism_prop(q, 2);
    CHECK(two.rank(2, 1) == 8);
    CHECK(two.unit == Vector{1, 0, 0, 1});
    CHECK(check_prop(two).ok());
    // 1_2 = 1 ⊗ 1 is the identity of V⊗V
    Vector id2 = two.identity(2);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(id2[k] == ((k % 4) == (k / 4) ? 1 : 0));
}

TEST_CASE("trivial PROP")
{
    CHECK(check_prop(trivial_prop(Ring::prime_field(3))).ok());
}

TEST_CASE("corrupted interchange is detected")
{
    Prop p = endomorphism_prop(Ring::rationals(), 2);
    auto& t = p.horizontal_table.at({1, 1, 1, 1});
    Vector c = t.column(5);
    Vector d = t.column(6);
    t.set_column(5, d);
    t.set_column(6, c);
    auto r = check_prop(p);
    CHECK_FALSE(r.ok());
    MESSAGE(r.to_string());
}

TEST_CASE("PROP algebras")
{
    Ring q = Ring::rationals();
    auto a = evaluation_algebra(q, 2);
    CHECK(check_prop_algebra(a).ok());

    auto bad = a;
    auto& entry = bad.gamma.begin()->second;
    entry.begin()->second = 2;
    CHECK_FALSE(check_prop_algebra(bad).ok());

    auto bad2 = a;
    // swap the output of one binary operation
    PropGammaKey key{2, 1, 1, {Generator{{0, 0}, 0}, Generator{{0, 0}, 1}}};
    REQUIRE(bad2.gamma.count(key));
    bad2.gamma[key] = TensorElement{{{Generator{{0, 0}, 1}}, Scalar(1)}};
    auto r = check_prop_algebra(bad2);
    CHECK_FALSE(r.ok());
    MESSAGE(r.to_string());
}
