#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kreeb/caps.hpp"
#include "kreeb/rational.hpp"

namespace kreeb {

// ---------------------------------------------------------------------------
// Group expressions.
//
// Source groups are built from the trivial group, Z, finite products and
// the wreath-over-Z construction S wr_m Z (maps Z_m -> S paired with an
// integer). Target groups replace Z by nothing and wr_m Z by wr Z_m; they
// are always finite. Z_m itself is Wreath(Trivial, m).
//
// Both expression kinds are kept in a normal form: products are flat,
// contain no trivial factors, and are never unary.
// ---------------------------------------------------------------------------

class SourceExpr {
public:
    enum class Kind { Trivial, FreeZ, Product, Wreath };

    SourceExpr();  // Trivial
    static SourceExpr trivial();
    static SourceExpr z();
    static SourceExpr product(std::vector<SourceExpr> factors);
    static SourceExpr wreath(SourceExpr inner, long long m);  // m >= 2

    Kind kind() const { return node_->kind; }
    const std::vector<SourceExpr>& factors() const { return node_->factors; }
    const SourceExpr& inner() const { return node_->factors[0]; }
    long long m() const { return node_->m; }

    bool operator==(const SourceExpr& o) const;

private:
    struct Node {
        Kind kind;
        std::vector<SourceExpr> factors;  // Product factors; Wreath inner at [0]
        long long m = 0;
    };
    explicit SourceExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

class FiniteExpr {
public:
    enum class Kind { Trivial, Product, Wreath };

    FiniteExpr();  // Trivial
    static FiniteExpr trivial();
    static FiniteExpr product(std::vector<FiniteExpr> factors);
    static FiniteExpr wreath(FiniteExpr inner, long long m);  // m >= 2
    static FiniteExpr cyclic(long long m);  // Z_m; Trivial when m == 1

    Kind kind() const { return node_->kind; }
    const std::vector<FiniteExpr>& factors() const { return node_->factors; }
    const FiniteExpr& inner() const { return node_->factors[0]; }
    long long m() const { return node_->m; }

    bool operator==(const FiniteExpr& o) const;

private:
    struct Node {
        Kind kind;
        std::vector<FiniteExpr> factors;
        long long m = 0;
    };
    explicit FiniteExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

Int order(const FiniteExpr& g);

// Nested term serialization: Triv, Z, Prod(a, b), Wr(inner, m), WrC(inner, m).
std::string show(const SourceExpr& e);
std::string show(const FiniteExpr& e);

// Short display name for reports: 1, Z_m, a x b, (g) wr Z_m.
std::string friendly_name(const FiniteExpr& e);

// ---------------------------------------------------------------------------
// Elements. The value mirrors its expression: Unit for Trivial, Int for
// FreeZ, Tuple for Product, Wreath for both wreath kinds (map components
// plus the integer/residue coordinate).
// ---------------------------------------------------------------------------

struct Element {
    enum class Kind { Unit, Int, Tuple, Wreath };

    Kind kind = Kind::Unit;
    long long n = 0;              // Int value or wreath coordinate
    std::vector<Element> comps;   // Tuple components or wreath map values

    static Element unit() { return {}; }
    static Element integer(long long v);
    static Element tuple(std::vector<Element> c);
    static Element wreath(std::vector<Element> map, long long k);

    bool operator==(const Element&) const = default;
    bool operator<(const Element& o) const;  // lexicographic on (kind, n, comps)
};

std::string show_element(const Element& e);

bool conforms(const SourceExpr& g, const Element& e);
bool conforms(const FiniteExpr& g, const Element& e);

Element identity(const SourceExpr& g);
Element identity(const FiniteExpr& g);
Element mul(const SourceExpr& g, const Element& a, const Element& b);
Element mul(const FiniteExpr& g, const Element& a, const Element& b);
Element inverse(const SourceExpr& g, const Element& a);
Element inverse(const FiniteExpr& g, const Element& a);

// Every element exactly once, in a deterministic order starting with the
// identity. Throws CapExceeded when order(g) > caps.max_order.
std::vector<Element> enumerate(const FiniteExpr& g, const Caps& caps);

// A generating set (possibly empty for the trivial group).
std::vector<Element> generating_set(const FiniteExpr& g);

long long element_order(const FiniteExpr& g, const Element& a);

// order -> number of elements of that order.
std::map<long long, long long> order_histogram(const FiniteExpr& g, const Caps& caps);

// ---------------------------------------------------------------------------
// Brute-force group arithmetic on an explicit multiplication table. This is
// the oracle-side path; it knows nothing about expressions.
// ---------------------------------------------------------------------------

struct MulTable {
    std::size_t n = 0;
    std::size_t id = 0;
    std::vector<std::size_t> t;    // t[a * n + b] = index of a*b
    std::vector<std::size_t> inv;

    std::size_t at(std::size_t a, std::size_t b) const { return t[a * n + b]; }
};

MulTable build_table(const FiniteExpr& g, const Caps& caps);

// Invariant factors d1 | d2 | ... (entries > 1, ascending) of the
// abelianization of the group presented by the table: commutator subgroup by
// closure, quotient, then peeling maximal-order cyclic summands.
std::vector<long long> abelian_invariants_from_table(const MulTable& table);

// Invariant factors of g/[g,g], computed purely by enumeration.
std::vector<long long> abelianization(const FiniteExpr& g, const Caps& caps);

// ---------------------------------------------------------------------------
// Structural homomorphisms source -> target. Shape rules: Trivial -> Trivial,
// Z -> killed, S wr_m Z -> G wr Z_m (compatible inners), products map
// componentwise with killed factors dropped from the target. A hom owns its
// normalized source and target expressions.
// ---------------------------------------------------------------------------

class StructuralHom {
public:
    enum class Kind { Trivial, KillZ, Wreath, Product };

    StructuralHom();  // Trivial -> Trivial
    static StructuralHom trivial();
    static StructuralHom kill_z();
    static StructuralHom wreath(StructuralHom inner, long long m);
    static StructuralHom product(std::vector<StructuralHom> children);

    Kind kind() const { return node_->kind; }
    const std::vector<StructuralHom>& children() const { return node_->children; }
    const StructuralHom& inner() const { return node_->children[0]; }
    long long m() const { return node_->m; }

    SourceExpr source() const { return node_->source; }
    FiniteExpr target() const { return node_->target; }

    // lambda: evaluates the homomorphism on a source element.
    Element eval(const Element& a) const;

    // Section of eval: eval(lift(t)) == t for every target element t.
    Element lift(const Element& t) const;

private:
    struct Node {
        Kind kind;
        std::vector<StructuralHom> children;  // Product children; Wreath inner at [0]
        long long m = 0;
        SourceExpr source;
        FiniteExpr target;
    };
    explicit StructuralHom(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace kreeb
