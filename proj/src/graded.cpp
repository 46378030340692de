#include "opseq/graded.hpp"

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

std::string Bidegree::str() const { return fmt::format("({},{})", p, q); }

bool Component::has_torsion() const
{
    for (const auto& o : orders)
        if (o != 0)
            return true;
    return false;
}

void BigradedModule::set(Bidegree b, Component c)
{
    if (!c.orders.empty() && c.orders.size() != c.labels.size())
        throw Error(Errc::invalid_argument, "component orders do not match its labels at " + b.str());
    for (const auto& o : c.orders)
        if (o != 0 && (!ring_.is_integers() || o < 2))
            throw Error(Errc::invalid_argument, "torsion orders must be >= 2 and need ring Z at " + b.str());
    components_[b] = std::move(c);
}

void BigradedModule::set_free(Bidegree b, std::size_t rank, const std::string& prefix)
{
    Component c;
    for (std::size_t i = 0; i < rank; ++i)
        c.labels.push_back(fmt::format("{}{}", prefix, i));
    set(b, std::move(c));
}

const Component* BigradedModule::find(Bidegree b) const
{
    auto it = components_.find(b);
    return it == components_.end() ? nullptr : &it->second;
}

std::size_t BigradedModule::rank(Bidegree b) const
{
    auto c = find(b);
    return c ? c->rank() : 0;
}

std::vector<Integer> BigradedModule::orders(Bidegree b) const
{
    auto c = find(b);
    if (!c)
        return {};
    if (c->orders.empty())
        return std::vector<Integer>(c->rank(), Integer(0));
    return c->orders;
}

Matrix BigradedModule::relations(Bidegree b) const { return relation_matrix(orders(b)); }

bool BigradedModule::is_free() const
{
    for (const auto& [b, c] : components_)
        if (c.has_torsion())
            return false;
    return true;
}

std::vector<Bidegree> BigradedModule::support() const
{
    std::vector<Bidegree> out;
    for (const auto& [b, c] : components_)
        out.push_back(b);
    return out;
}

Matrix GradedMap::block(const BigradedModule& source, const BigradedModule& target, Bidegree b) const
{
    std::size_t rows = target.rank(b + shift), cols = source.rank(b);
    auto it = blocks.find(b);
    if (it == blocks.end())
        return Matrix(rows, cols);
    if (it->second.rows() != rows || it->second.cols() != cols)
        throw Error(Errc::invalid_argument,
                    fmt::format("block at {} is {}x{}, expected {}x{}", b.str(), it->second.rows(), it->second.cols(), rows, cols));
    return it->second;
}

GradedMap compose(const Ring& ring, const GradedMap& g, const GradedMap& f)
{
    GradedMap out;
    out.shift = f.shift + g.shift;
    for (const auto& [b, fb] : f.blocks) {
        auto it = g.blocks.find(b + f.shift);
        if (it == g.blocks.end())
            continue;
        out.blocks[b] = mul(ring, it->second, fb);
    }
    return out;
}

GradedMap identity_map(const BigradedModule& m)
{
    GradedMap id;
    for (const auto& [b, c] : m.components())
        id.blocks[b] = Matrix::identity(c.rank());
    return id;
}

const Subquotient* HomologyData::find(Bidegree b) const
{
    auto it = groups.find(b);
    return it == groups.end() ? nullptr : &it->second;
}

std::size_t HomologyData::size(Bidegree b) const
{
    auto g = find(b);
    return g ? g->size() : 0;
}

BigradedModule HomologyData::as_module() const
{
    BigradedModule m(ring);
    for (const auto& [b, g] : groups) {
        Component c;
        for (std::size_t i = 0; i < g.size(); ++i)
            c.labels.push_back(fmt::format("h{}", i));
        if (ring.is_integers() && !g.invariant_factors().empty())
            c.orders = g.orders();
        m.set(b, std::move(c));
    }
    return m;
}

bool lands_in(const Matrix& m, const Matrix& relations, const Ring& ring)
{
    for (std::size_t c = 0; c < m.cols(); ++c) {
        Vector v = m.column(c);
        if (is_zero(v))
            continue;
        if (relations.cols() == 0 || !in_span(relations, v, ring))
            return false;
    }
    return true;
}

CheckReport check_complex(const DGBigradedModule& c)
{
    const Ring& ring = c.ring();
    // (0,-1) for chain complexes, (-r,-1) for page differentials
    if (c.d.shift.q != -1 || c.d.shift.p > 0)
        return CheckReport::fail("differential bidegree", "d must have bidegree (-r,-1), got " + c.d.shift.str());
    for (const auto& b : c.module.support()) {
        Matrix d1 = c.d_block(b);
        Bidegree b1 = b + c.d.shift;
        if (!lands_in(mul(ring, d1, c.module.relations(b)), c.module.relations(b1), ring))
            return CheckReport::fail("well-defined", "d does not preserve relations at " + b.str());
        if (!c.module.contains(b1))
            continue;
        Matrix dd = mul(ring, c.d_block(b1), d1);
        if (!lands_in(dd, c.module.relations(b1 + c.d.shift), ring))
            return CheckReport::fail("d^2 = 0", fmt::format("d{}*d{} = {}", (b1).str(), b.str(), dd.debug_string()));
    }
    return CheckReport::pass();
}

Matrix cycles(const DGBigradedModule& c, Bidegree b)
{
    Matrix d = c.d_block(b);
    std::size_t n = c.module.rank(b);
    if (d.rows() == 0)
        return Matrix::identity(n);
    Matrix rel = c.module.relations(b + c.d.shift);
    if (rel.cols() == 0)
        return kernel(d, c.ring());
    return preimage(d, rel, c.ring());
}

Matrix boundaries(const DGBigradedModule& c, Bidegree b)
{
    Bidegree src = b - c.d.shift;
    Matrix in = c.module.contains(src) ? c.d_block(src) : Matrix(c.module.rank(b), 0);
    return in.hcat(c.module.relations(b));
}

HomologyData homology(const DGBigradedModule& c)
{
    HomologyData h;
    h.ring = c.ring();
    for (const auto& b : c.module.support())
        h.groups.emplace(b, subquotient(c.module.rank(b), cycles(c, b), boundaries(c, b), c.ring()));
    return h;
}

CheckReport check_chain_map(const GradedMap& f, const DGBigradedModule& source, const DGBigradedModule& target)
{
    const Ring& ring = source.ring();
    Scalar sign = sign_of(f.shift.q);
    for (const auto& b : source.module.support()) {
        Matrix fb = f.block(source.module, target.module, b);
        Bidegree fb_target = b + f.shift;
        if (!lands_in(mul(ring, fb, source.module.relations(b)), target.module.relations(fb_target), ring))
            return CheckReport::fail("well-defined", "map does not preserve relations at " + b.str());
        Bidegree down = b + source.d.shift;
        Matrix lhs = mul(ring, f.block(source.module, target.module, down), source.d_block(b));
        Matrix rhs = scale(ring, sign, mul(ring, target.d_block(fb_target), fb));
        Matrix diff = sub(ring, lhs, rhs);
        if (!lands_in(diff, target.module.relations(fb_target + target.d.shift), ring))
            return CheckReport::fail("chain map", fmt::format("f d != (-1)^{} d f at {}", f.shift.q, b.str()));
    }
    return CheckReport::pass();
}

GradedMap induced_map_on_homology(const GradedMap& f, const HomologyData& hs, const HomologyData& ht)
{
    const Ring& ring = hs.ring;
    GradedMap out;
    out.shift = f.shift;
    for (const auto& [b, g] : hs.groups) {
        Bidegree tb = b + f.shift;
        const Subquotient* tg = ht.find(tb);
        auto it = f.blocks.find(b);
        std::size_t rows = tg ? tg->size() : 0;
        Matrix block(rows, g.size());
        if (it != f.blocks.end() && g.size() > 0) {
            Matrix image = mul(ring, it->second, g.lift());
            for (std::size_t k = 0; k < g.size(); ++k) {
                Vector v = image.column(k);
                if (!tg) {
                    if (!is_zero(v))
                        throw Error(Errc::project_undefined, "image outside the target support at " + tb.str());
                    continue;
                }
                auto coords = tg->project(v);
                if (!coords)
                    throw Error(Errc::project_undefined, "image of a representative is not a cycle at " + tb.str());
                block.set_column(k, *coords);
            }
        }
        out.blocks[b] = block;
    }
    return out;
}

} // namespace opseq
