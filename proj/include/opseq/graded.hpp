#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "opseq/check.hpp"
#include "opseq/linalg.hpp"

namespace opseq {

struct Bidegree {
    long p = 0;
    long q = 0;

    auto operator<=>(const Bidegree&) const = default;
    Bidegree operator+(const Bidegree& o) const { return {p + o.p, q + o.q}; }
    Bidegree operator-(const Bidegree& o) const { return {p - o.p, q - o.q}; }
    std::string str() const;
};

/// One component: labeled generators, each free (order 0) or cyclic ℤ/d.
struct Component {
    std::vector<std::string> labels;
    std::vector<Integer> orders; // empty, or one per label

    std::size_t rank() const noexcept { return labels.size(); }
    bool has_torsion() const;
    Integer order(std::size_t i) const { return orders.empty() ? Integer(0) : orders[i]; }
};

class BigradedModule {
public:
    BigradedModule() = default;
    explicit BigradedModule(Ring ring) : ring_(ring) {}

    const Ring& ring() const noexcept { return ring_; }
    const std::map<Bidegree, Component>& components() const noexcept { return components_; }

    void set(Bidegree b, Component c);
    /// Convenience: free component with labels prefix_0, prefix_1, ...
    void set_free(Bidegree b, std::size_t rank, const std::string& prefix = "e");
    bool contains(Bidegree b) const { return components_.count(b) != 0; }
    const Component* find(Bidegree b) const;
    std::size_t rank(Bidegree b) const;
    std::vector<Integer> orders(Bidegree b) const;
    /// Columns generating the relations lattice at b (empty unless torsion).
    Matrix relations(Bidegree b) const;
    bool is_free() const;
    std::vector<Bidegree> support() const;

private:
    Ring ring_ = Ring::rationals();
    std::map<Bidegree, Component> components_;
};

/// Map of fixed bidegree; a missing block is zero.
struct GradedMap {
    Bidegree shift;
    std::map<Bidegree, Matrix> blocks; // keyed by source bidegree

    /// Block at b sized against the two modules (zero when absent).
    Matrix block(const BigradedModule& source, const BigradedModule& target, Bidegree b) const;
};

GradedMap compose(const Ring& ring, const GradedMap& g, const GradedMap& f);
GradedMap identity_map(const BigradedModule& m);

struct DGBigradedModule {
    BigradedModule module;
    GradedMap d; // shift (0,-1)

    const Ring& ring() const noexcept { return module.ring(); }
    Matrix d_block(Bidegree b) const { return d.block(module, module, b); }
};

/// Homology groups with representative data. Coordinates of a group are the
/// normal-form coordinates of its Subquotient.
struct HomologyData {
    Ring ring = Ring::rationals();
    std::map<Bidegree, Subquotient> groups;

    const Subquotient* find(Bidegree b) const;
    std::size_t size(Bidegree b) const;
    /// Groups as a module with labels h_i and torsion orders.
    BigradedModule as_module() const;
};

/// Every column of `m` lies in span(relations); trivially true when m is zero.
bool lands_in(const Matrix& m, const Matrix& relations, const Ring& ring);

CheckReport check_complex(const DGBigradedModule& c);
/// Cycles at b: {x : d x ∈ relations}.
Matrix cycles(const DGBigradedModule& c, Bidegree b);
/// Boundaries at b: image of incoming d plus relations.
Matrix boundaries(const DGBigradedModule& c, Bidegree b);
HomologyData homology(const DGBigradedModule& c);

/// f d = (-1)^b d f, b the vertical shift of f; also f(relations) ⊆ relations.
CheckReport check_chain_map(const GradedMap& f, const DGBigradedModule& source, const DGBigradedModule& target);
/// Blocks: project_target ∘ f ∘ lift_source. Throws ProjectUndefined.
GradedMap induced_map_on_homology(const GradedMap& f, const HomologyData& hs, const HomologyData& ht);

} // namespace opseq
