#include <doctest.h>

#include <set>

#include "opseq/algebra.hpp"
#include "opseq/error.hpp"
#include "support.hpp"

using namespace opseq;
using namespace opseq::testing;

TEST_CASE("trivial algebra")
{
    OperadAlgebra a;
    a.operad = builtin_comm(Ring::rationals());
    a.carrier = DGBigradedModule{BigradedModule(Ring::rationals()), GradedMap{{0, -1}, {}}};
    CHECK(check_algebra(a).ok());
}

TEST_CASE("exterior algebra on one generator")
{
    for (Ring ring : {Ring::prime_field(2), Ring::prime_field(5)}) {
        auto c = exterior_one(ring);
        auto a = comm_algebra(c, exterior_one_product(c));
        // four arity-2 entries: 1·1, 1·e, e·1 nonzero, e·e = 0 absent
        std::size_t binary = 0;
        for (auto& [k, v] : a.gamma)
            binary += k.arity == 2;
        CHECK(binary == 3);
        CHECK(check_algebra(a).ok());
    }
}

TEST_CASE("sign flip is a derivation violation")
{
    Ring f5 = Ring::prime_field(5);
    auto c = koszul_small(f5);
    auto a = comm_algebra(c, koszul_small_product());
    REQUIRE(check_algebra(a).ok());
    GammaKey key{2, 0, {Generator{{0, 0}, 0}, Generator{{0, 1}, 0}}};
    REQUIRE(a.gamma.count(key));
    a.gamma[key] = scale(f5, Scalar(-1), a.gamma[key]);
    auto r = check_algebra(a);
    CHECK(r.law == "derivation");
}

TEST_CASE("act")
{
    Ring f2 = Ring::prime_field(2);
    DGBigradedModule c{BigradedModule(f2), GradedMap{{0, -1}, {}}};
    c.module.set({0, 0}, Component{{"1", "x"}, {}});
    auto a = comm_algebra(c, [](const Generator& g, const Generator& h) -> Vector {
        Vector v(2);
        if (g.index + h.index < 2)
            v[g.index + h.index] = 1;
        return v;
    });
    REQUIRE(check_algebra(a).ok());
    Element x{{0, 0}, V({0, 1})};
    Element one{{0, 0}, V({1, 0})};
    CHECK(act(a, 1, a.operad.unit, {x}).v == x.v);
    CHECK(is_zero(act(a, 2, V({1}), {x, x}).v));
    CHECK(act(a, 2, V({1}), {one, x}).v == x.v);
    CHECK(is_zero(act(a, 2, V({1}), {x, Element{{0, 0}, V({0, 0})}}).v));
    // additivity in a slot
    Element sum{{0, 0}, V({1, 1})};
    CHECK(act(a, 2, V({1}), {sum, one}).v == add(f2, act(a, 2, V({1}), {x, one}).v, act(a, 2, V({1}), {one, one}).v));
    CHECK_THROWS_AS(act(a, 4, V({1}), {x, x, x, x}), Error);
}

TEST_CASE("Assoc, Comm and Lie algebras pass the checker")
{
    Ring q = Ring::rationals();
    auto m = gl2(q);
    auto as = assoc_algebra(m, gl2_product());
    CHECK(check_algebra(as).ok());
    auto lie = lie_algebra(m, gl2_bracket(q));
    CHECK(check_algebra(lie).ok());
    auto ext = exterior_two(q);
    CHECK(check_algebra(comm_algebra(ext, exterior_two_product(q))).ok());
    CHECK(check_algebra(assoc_algebra(ext, exterior_two_product(q))).ok());

    // Γ(id₃; x,y,z) = Γ(id₂; Γ(id₂; x,y), z)
    Vector id3 = unit_vector(6, assoc_index({0, 1, 2})), id2 = unit_vector(2, assoc_index({0, 1}));
    Element x{{0, 0}, V({1, 2, 0, 1})}, y{{0, 0}, V({0, 1, 3, 0})}, z{{0, 0}, V({2, 0, 1, 1})};
    CHECK(act(as, 3, id3, {x, y, z}).v == act(as, 2, id2, {act(as, 2, id2, {x, y}), z}).v);
}

TEST_CASE("equivariance sign squares to one")
{
    Ring q = Ring::rationals();
    auto ext = exterior_two(q);
    auto a = assoc_algebra(ext, exterior_two_product(q));
    for (std::size_t op = 0; op < 2; ++op) {
        Vector pi = unit_vector(2, op);
        Vector tt = a.operad.act_transposition(2, 1, a.operad.act_transposition(2, 1, pi));
        CHECK(tt == pi);
    }
    // a·b = -b·a through the transposition
    Element ea{{0, 1}, V({1, 0})}, eb{{0, 1}, V({0, 1})};
    Vector w12 = unit_vector(2, 0), w21 = unit_vector(2, 1);
    CHECK(act(a, 2, w21, {ea, eb}).v == scale(q, Scalar(-1), act(a, 2, w12, {eb, ea}).v));
}

TEST_CASE("homology action: zero differential and acyclic carriers")
{
    Ring q = Ring::rationals();
    auto ext = exterior_two(q);
    auto a = comm_algebra(ext, exterior_two_product(q));
    auto h = homology_action(a);
    CHECK(h.gamma == a.gamma);
    CHECK(check_algebra(h).ok());

    DGBigradedModule acyc{BigradedModule(q), GradedMap{{0, -1}, {}}};
    acyc.module.set({0, 1}, Component{{"u"}, {}});
    acyc.module.set({0, 0}, Component{{"v"}, {}});
    acyc.d.blocks[{0, 1}] = M({{1}});
    OperadAlgebra z;
    z.operad = builtin_comm(q);
    z.carrier = acyc;
    z.fill_unit_action();
    REQUIRE(check_algebra(z).ok());
    auto hz = homology_action(z);
    CHECK(hz.gamma.empty());
    for (auto& [b, comp] : hz.carrier.module.components())
        CHECK(comp.rank() == 0);
}

namespace {

// All vectors in the F2-span of the columns.
std::set<std::vector<int>> f2_span(const Matrix& gens, std::size_t n)
{
    std::set<std::vector<int>> out;
    std::size_t k = gens.cols();
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
        std::vector<int> v(n, 0);
        for (std::size_t c = 0; c < k; ++c)
            if (mask >> c & 1)
                for (std::size_t r = 0; r < n; ++r)
                    v[r] ^= int(gens(r, c).get_num().get_si() & 1);
        out.insert(v);
    }
    return out;
}

std::vector<int> to_bits(const Vector& v)
{
    std::vector<int> out;
    for (auto& x : v)
        out.push_back(int(x.get_num().get_si() & 1));
    return out;
}

Vector from_bits(const std::vector<int>& v)
{
    Vector out;
    for (int x : v)
        out.push_back(Scalar(x));
    return out;
}

} // namespace

TEST_CASE("homology action matches coset multiplication")
{
    Ring f2 = Ring::prime_field(2);
    auto c = truncated_poly(f2);
    auto a = comm_algebra(c, truncated_poly_product());
    REQUIRE(check_algebra(a).ok());
    auto h = homology_action(a);
    REQUIRE(check_algebra(h).ok());
    auto hd = homology(c);
    CHECK(hd.size({0, 0}) == 2);
    CHECK(hd.size({0, 1}) == 2);

    std::map<Bidegree, std::set<std::vector<int>>> bnd;
    for (auto& [b, g] : hd.groups)
        bnd[b] = f2_span(boundaries(c, b), c.module.rank(b));

    // every pair of classes (including sums) in bidegrees with q1+q2 ≤ 1
    for (auto& [b1, g1] : hd.groups)
        for (auto& [b2, g2] : hd.groups) {
            Bidegree out{0, b1.q + b2.q};
            if (!c.module.contains(out))
                continue;
            for (std::size_t m1 = 0; m1 < (std::size_t(1) << g1.size()); ++m1)
                for (std::size_t m2 = 0; m2 < (std::size_t(1) << g2.size()); ++m2) {
                    Vector h1(g1.size()), h2(g2.size());
                    for (std::size_t k = 0; k < g1.size(); ++k)
                        h1[k] = (m1 >> k) & 1;
                    for (std::size_t k = 0; k < g2.size(); ++k)
                        h2[k] = (m2 >> k) & 1;
                    Vector r1 = g1.lift(h1), r2 = g2.lift(h2);
                    // all representatives r1 + β1, r2 + β2; products form a single coset
                    std::set<std::vector<int>> products;
                    for (auto& b1v : bnd[b1])
                        for (auto& b2v : bnd[b2]) {
                            Element x{b1, add(f2, r1, from_bits(b1v))}, y{b2, add(f2, r2, from_bits(b2v))};
                            products.insert(to_bits(act(a, 2, V({1}), {x, y}).v));
                        }
                    Element hx{b1, h1}, hy{b2, h2};
                    Vector gh = act(h, 2, V({1}), {hx, hy}).v;
                    Vector rep = hd.groups.at(out).lift(gh);
                    for (auto& p : products) {
                        Vector diff = sub(f2, from_bits(p), rep);
                        CHECK(bnd[out].count(to_bits(diff)) == 1);
                    }
                }
        }
}
