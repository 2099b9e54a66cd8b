#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kreeb/caps.hpp"
#include "kreeb/groups.hpp"
#include "kreeb/rational.hpp"
#include "kreeb/snf.hpp"

namespace kreeb {

// Point of T^p = R^p / Z^p; coordinates kept reduced into [0, 1).
struct TorusPoint {
    std::vector<Rat> x;

    static TorusPoint reduced(std::vector<Rat> coords);
    std::size_t dim() const { return x.size(); }
    bool operator==(const TorusPoint&) const = default;
};

std::string show(const TorusPoint& p);

// Self-map of T^p of the form (x . A)_i = x_{perm[i]} + trans[i] mod 1;
// a coordinate permutation followed by an exact translation.
struct AffineTorusMap {
    std::vector<int> perm;
    std::vector<Rat> trans;

    static AffineTorusMap identity(std::size_t p);
    std::size_t dim() const { return perm.size(); }
    bool is_identity() const;
    bool is_translation() const;
    bool operator==(const AffineTorusMap&) const = default;
};

// `perm=[...] trans=[...]`
std::string show(const AffineTorusMap& a);

TorusPoint apply(const AffineTorusMap& map, const TorusPoint& x);

// Right-action composition: apply(apply(x, a), b) == apply(x, compose(a, b)).
AffineTorusMap compose(const AffineTorusMap& a, const AffineTorusMap& b);

// A fixed point exists iff every permutation cycle has integer translation
// sum; returns a concrete witness when one exists.
std::optional<TorusPoint> fixed_point(const AffineTorusMap& map);

// ---------------------------------------------------------------------------
// Torus actions. An action stores the construction recipe and evaluates any
// group element to an affine map on demand. The recipes mirror the five
// ways free actions are assembled:
//   trivial(n)            unit group fixing T^n
//   cyclic(m)             Z_m rotating T^1 by k/m
//   product(actions)      blockwise product action
//   extend_trivial(a, n)  same group, n fixed extra coordinates
//   wreath(a, m)          G wr Z_m on T^{pm+1}: block i of the result reads
//                         block (i+k mod m) through alpha(i), and the last
//                         coordinate advances by k/m
// ---------------------------------------------------------------------------

class TorusAction {
public:
    TorusAction();  // trivial action on T^0

    const FiniteExpr& group() const { return group_; }
    std::size_t dimension() const { return dim_; }

    AffineTorusMap evaluate(const Element& g) const;

    // Formulaic route: applies the recipe to the point directly, without
    // building the composed affine map. Used to cross-check evaluate.
    TorusPoint apply_direct(const Element& g, const TorusPoint& x) const;

private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    TorusAction(NodePtr root, FiniteExpr group, std::size_t dim);
    NodePtr root_;
    FiniteExpr group_;
    std::size_t dim_ = 0;

    friend TorusAction act_trivial(std::size_t n);
    friend TorusAction act_cyclic(long long m);
    friend TorusAction act_product(std::vector<TorusAction> actions);
    friend TorusAction act_extend_trivial(TorusAction action, std::size_t n);
    friend TorusAction act_wreath(TorusAction action, long long m);
};

TorusAction act_trivial(std::size_t n);
TorusAction act_cyclic(long long m);  // m >= 1; m == 1 degenerates to trivial on T^1
TorusAction act_product(std::vector<TorusAction> actions);
TorusAction act_extend_trivial(TorusAction action, std::size_t n);
TorusAction act_wreath(TorusAction action, long long m);  // m >= 2

// Per-element freeness certificate.
struct FreenessItem {
    Element g;
    bool fixed_point_free = false;
    std::optional<TorusPoint> witness;
};

struct FreenessReport {
    bool free = false;
    bool all_translations = false;  // every element acts by pure translation
    std::vector<FreenessItem> items;  // non-identity elements only
};

FreenessReport is_free(const TorusAction& action, const Caps& caps);

// ---------------------------------------------------------------------------
// pi1 of the quotient of a certified free action: the group of lifts
// x |-> x.evaluate(g) + z acting on R^p, z ranging over the deck lattice Z^p.
// ---------------------------------------------------------------------------

class CrystalGroup {
public:
    struct Elt {
        Element g;
        std::vector<Int> z;
        bool operator==(const Elt&) const = default;
    };

    CrystalGroup(TorusAction action, const Caps& caps);  // throws NotFree

    std::size_t lattice_rank() const { return action_.dimension(); }
    const FiniteExpr& deck_group() const { return action_.group(); }
    const TorusAction& action() const { return action_; }

    Elt identity_elt() const;
    Elt lift(const Element& g) const;  // zero-offset lift
    Elt lattice(std::vector<Int> z) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt inverse(const Elt& a) const;
    const Element& delta(const Elt& a) const { return a.g; }  // deck projection
    bool in_lattice(const Elt& a) const;

    // Integer carry of composing the zero-offset lifts of g then h.
    std::vector<Int> cocycle(const Element& g, const Element& h) const;

private:
    TorusAction action_;
};

CrystalGroup pi1_presentation(const TorusAction& action, const Caps& caps);

struct Homology {
    std::size_t rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1, ascending
    bool operator==(const Homology&) const = default;
};

// H1 of the quotient: abelianization of the crystal group from a finite
// relation matrix (lattice generators collapsed along permutation orbits,
// one lift generator per group element), invariant factors by SNF.
Homology homology_h1(const CrystalGroup& crystal, const Caps& caps);

}  // namespace kreeb
