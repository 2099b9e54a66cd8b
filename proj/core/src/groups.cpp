#include "kreeb/groups.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "kreeb/errors.hpp"

namespace kreeb {

namespace {

long long residue(long long v, long long m) {
    long long r = v % m;
    return r < 0 ? r + m : r;
}

}  // namespace

// --- expressions -----------------------------------------------------------

SourceExpr::SourceExpr() {
    static const auto triv = std::make_shared<const Node>(Node{Kind::Trivial, {}, 0});
    node_ = triv;
}

SourceExpr SourceExpr::trivial() { return SourceExpr(); }

SourceExpr SourceExpr::z() {
    static const auto zn = std::make_shared<const Node>(Node{Kind::FreeZ, {}, 0});
    return SourceExpr(zn);
}

SourceExpr SourceExpr::product(std::vector<SourceExpr> factors) {
    std::vector<SourceExpr> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::Trivial) continue;
        if (f.kind() == Kind::Product)
            flat.insert(flat.end(), f.factors().begin(), f.factors().end());
        else
            flat.push_back(std::move(f));
    }
    if (flat.empty()) return trivial();
    if (flat.size() == 1) return flat[0];
    return SourceExpr(std::make_shared<const Node>(Node{Kind::Product, std::move(flat), 0}));
}

SourceExpr SourceExpr::wreath(SourceExpr inner, long long m) {
    if (m < 2) throw ShapeMismatch("wreath requires m >= 2");
    return SourceExpr(std::make_shared<const Node>(Node{Kind::Wreath, {std::move(inner)}, m}));
}

bool SourceExpr::operator==(const SourceExpr& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind() || m() != o.m()) return false;
    if (factors().size() != o.factors().size()) return false;
    for (std::size_t i = 0; i < factors().size(); ++i)
        if (!(factors()[i] == o.factors()[i])) return false;
    return true;
}

FiniteExpr::FiniteExpr() {
    static const auto triv = std::make_shared<const Node>(Node{Kind::Trivial, {}, 0});
    node_ = triv;
}

FiniteExpr FiniteExpr::trivial() { return FiniteExpr(); }

FiniteExpr FiniteExpr::product(std::vector<FiniteExpr> factors) {
    std::vector<FiniteExpr> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::Trivial) continue;
        if (f.kind() == Kind::Product)
            flat.insert(flat.end(), f.factors().begin(), f.factors().end());
        else
            flat.push_back(std::move(f));
    }
    if (flat.empty()) return trivial();
    if (flat.size() == 1) return flat[0];
    return FiniteExpr(std::make_shared<const Node>(Node{Kind::Product, std::move(flat), 0}));
}

FiniteExpr FiniteExpr::wreath(FiniteExpr inner, long long m) {
    if (m < 2) throw ShapeMismatch("wreath requires m >= 2");
    return FiniteExpr(std::make_shared<const Node>(Node{Kind::Wreath, {std::move(inner)}, m}));
}

FiniteExpr FiniteExpr::cyclic(long long m) {
    if (m < 1) throw ShapeMismatch("cyclic group requires m >= 1");
    if (m == 1) return trivial();
    return wreath(trivial(), m);
}

bool FiniteExpr::operator==(const FiniteExpr& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind() || m() != o.m()) return false;
    if (factors().size() != o.factors().size()) return false;
    for (std::size_t i = 0; i < factors().size(); ++i)
        if (!(factors()[i] == o.factors()[i])) return false;
    return true;
}

Int order(const FiniteExpr& g) {
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return 1;
        case FiniteExpr::Kind::Product: {
            Int n = 1;
            for (const auto& f : g.factors()) n *= order(f);
            return n;
        }
        case FiniteExpr::Kind::Wreath: {
            Int inner = order(g.inner());
            Int n;
            mpz_pow_ui(n.get_mpz_t(), inner.get_mpz_t(), static_cast<unsigned long>(g.m()));
            return n * to_int(g.m());
        }
    }
    return 1;
}

std::string show(const SourceExpr& e) {
    switch (e.kind()) {
        case SourceExpr::Kind::Trivial:
            return "Triv";
        case SourceExpr::Kind::FreeZ:
            return "Z";
        case SourceExpr::Kind::Product: {
            std::string s = "Prod(";
            for (std::size_t i = 0; i < e.factors().size(); ++i) {
                if (i) s += ", ";
                s += show(e.factors()[i]);
            }
            return s + ")";
        }
        case SourceExpr::Kind::Wreath:
            return "Wr(" + show(e.inner()) + ", " + std::to_string(e.m()) + ")";
    }
    return "Triv";
}

std::string show(const FiniteExpr& e) {
    switch (e.kind()) {
        case FiniteExpr::Kind::Trivial:
            return "Triv";
        case FiniteExpr::Kind::Product: {
            std::string s = "Prod(";
            for (std::size_t i = 0; i < e.factors().size(); ++i) {
                if (i) s += ", ";
                s += show(e.factors()[i]);
            }
            return s + ")";
        }
        case FiniteExpr::Kind::Wreath:
            return "WrC(" + show(e.inner()) + ", " + std::to_string(e.m()) + ")";
    }
    return "Triv";
}

std::string friendly_name(const FiniteExpr& e) {
    switch (e.kind()) {
        case FiniteExpr::Kind::Trivial:
            return "1";
        case FiniteExpr::Kind::Product: {
            std::string s;
            for (std::size_t i = 0; i < e.factors().size(); ++i) {
                if (i) s += " x ";
                s += friendly_name(e.factors()[i]);
            }
            return s;
        }
        case FiniteExpr::Kind::Wreath:
            if (e.inner().kind() == FiniteExpr::Kind::Trivial)
                return "Z_" + std::to_string(e.m());
            return "(" + friendly_name(e.inner()) + ") wr Z_" + std::to_string(e.m());
    }
    return "1";
}

// --- elements ---------------------------------------------------------------

bool Element::operator<(const Element& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (n != o.n) return n < o.n;
    return std::lexicographical_compare(comps.begin(), comps.end(), o.comps.begin(),
                                        o.comps.end());
}

Element Element::integer(long long v) {
    Element e;
    e.kind = Kind::Int;
    e.n = v;
    return e;
}

Element Element::tuple(std::vector<Element> c) {
    Element e;
    e.kind = Kind::Tuple;
    e.comps = std::move(c);
    return e;
}

Element Element::wreath(std::vector<Element> map, long long k) {
    Element e;
    e.kind = Kind::Wreath;
    e.comps = std::move(map);
    e.n = k;
    return e;
}

std::string show_element(const Element& e) {
    switch (e.kind) {
        case Element::Kind::Unit:
            return "e";
        case Element::Kind::Int:
            return std::to_string(e.n);
        case Element::Kind::Tuple: {
            std::string s = "(";
            for (std::size_t i = 0; i < e.comps.size(); ++i) {
                if (i) s += ", ";
                s += show_element(e.comps[i]);
            }
            return s + ")";
        }
        case Element::Kind::Wreath: {
            std::string s = "(map=[";
            for (std::size_t i = 0; i < e.comps.size(); ++i) {
                if (i) s += ", ";
                s += show_element(e.comps[i]);
            }
            return s + "], k=" + std::to_string(e.n) + ")";
        }
    }
    return "e";
}

bool conforms(const SourceExpr& g, const Element& e) {
    switch (g.kind()) {
        case SourceExpr::Kind::Trivial:
            return e.kind == Element::Kind::Unit;
        case SourceExpr::Kind::FreeZ:
            return e.kind == Element::Kind::Int;
        case SourceExpr::Kind::Product: {
            if (e.kind != Element::Kind::Tuple || e.comps.size() != g.factors().size())
                return false;
            for (std::size_t i = 0; i < e.comps.size(); ++i)
                if (!conforms(g.factors()[i], e.comps[i])) return false;
            return true;
        }
        case SourceExpr::Kind::Wreath: {
            if (e.kind != Element::Kind::Wreath ||
                e.comps.size() != static_cast<std::size_t>(g.m()))
                return false;
            for (const auto& c : e.comps)
                if (!conforms(g.inner(), c)) return false;
            return true;
        }
    }
    return false;
}

bool conforms(const FiniteExpr& g, const Element& e) {
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return e.kind == Element::Kind::Unit;
        case FiniteExpr::Kind::Product: {
            if (e.kind != Element::Kind::Tuple || e.comps.size() != g.factors().size())
                return false;
            for (std::size_t i = 0; i < e.comps.size(); ++i)
                if (!conforms(g.factors()[i], e.comps[i])) return false;
            return true;
        }
        case FiniteExpr::Kind::Wreath: {
            if (e.kind != Element::Kind::Wreath ||
                e.comps.size() != static_cast<std::size_t>(g.m()))
                return false;
            if (e.n < 0 || e.n >= g.m()) return false;  // residues stay reduced
            for (const auto& c : e.comps)
                if (!conforms(g.inner(), c)) return false;
            return true;
        }
    }
    return false;
}

Element identity(const SourceExpr& g) {
    switch (g.kind()) {
        case SourceExpr::Kind::Trivial:
            return Element::unit();
        case SourceExpr::Kind::FreeZ:
            return Element::integer(0);
        case SourceExpr::Kind::Product: {
            std::vector<Element> c;
            c.reserve(g.factors().size());
            for (const auto& f : g.factors()) c.push_back(identity(f));
            return Element::tuple(std::move(c));
        }
        case SourceExpr::Kind::Wreath: {
            std::vector<Element> map(g.m(), identity(g.inner()));
            return Element::wreath(std::move(map), 0);
        }
    }
    return Element::unit();
}

Element identity(const FiniteExpr& g) {
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return Element::unit();
        case FiniteExpr::Kind::Product: {
            std::vector<Element> c;
            c.reserve(g.factors().size());
            for (const auto& f : g.factors()) c.push_back(identity(f));
            return Element::tuple(std::move(c));
        }
        case FiniteExpr::Kind::Wreath: {
            std::vector<Element> map(g.m(), identity(g.inner()));
            return Element::wreath(std::move(map), 0);
        }
    }
    return Element::unit();
}

namespace {

template <typename Expr>
void require_conforms(const Expr& g, const Element& e, const char* who) {
    if (!conforms(g, e))
        throw ShapeMismatch(std::string(who) + ": element " + show_element(e) +
                            " does not conform to " + show(g));
}

}  // namespace

// (a, j)(b, k) = (c, j + k) with c(s) = a(s + k mod m) b(s); componentwise on
// products, addition on Z.
Element mul(const SourceExpr& g, const Element& a, const Element& b) {
    require_conforms(g, a, "mul");
    require_conforms(g, b, "mul");
    switch (g.kind()) {
        case SourceExpr::Kind::Trivial:
            return Element::unit();
        case SourceExpr::Kind::FreeZ:
            return Element::integer(a.n + b.n);
        case SourceExpr::Kind::Product: {
            std::vector<Element> c;
            c.reserve(g.factors().size());
            for (std::size_t i = 0; i < g.factors().size(); ++i)
                c.push_back(mul(g.factors()[i], a.comps[i], b.comps[i]));
            return Element::tuple(std::move(c));
        }
        case SourceExpr::Kind::Wreath: {
            const long long m = g.m();
            std::vector<Element> map;
            map.reserve(m);
            for (long long s = 0; s < m; ++s)
                map.push_back(mul(g.inner(), a.comps[residue(s + b.n, m)], b.comps[s]));
            return Element::wreath(std::move(map), a.n + b.n);
        }
    }
    return Element::unit();
}

Element mul(const FiniteExpr& g, const Element& a, const Element& b) {
    require_conforms(g, a, "mul");
    require_conforms(g, b, "mul");
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return Element::unit();
        case FiniteExpr::Kind::Product: {
            std::vector<Element> c;
            c.reserve(g.factors().size());
            for (std::size_t i = 0; i < g.factors().size(); ++i)
                c.push_back(mul(g.factors()[i], a.comps[i], b.comps[i]));
            return Element::tuple(std::move(c));
        }
        case FiniteExpr::Kind::Wreath: {
            const long long m = g.m();
            std::vector<Element> map;
            map.reserve(m);
            for (long long s = 0; s < m; ++s)
                map.push_back(mul(g.inner(), a.comps[residue(s + b.n, m)], b.comps[s]));
            return Element::wreath(std::move(map), residue(a.n + b.n, m));
        }
    }
    return Element::unit();
}

// inverse of (a, k) is (b, -k) with b(s) = a(s - k mod m)^-1.
Element inverse(const SourceExpr& g, const Element& a) {
    require_conforms(g, a, "inverse");
    switch (g.kind()) {
        case SourceExpr::Kind::Trivial:
            return Element::unit();
        case SourceExpr::Kind::FreeZ:
            return Element::integer(-a.n);
        case SourceExpr::Kind::Product: {
            std::vector<Element> c;
            c.reserve(g.factors().size());
            for (std::size_t i = 0; i < g.factors().size(); ++i)
                c.push_back(inverse(g.factors()[i], a.comps[i]));
            return Element::tuple(std::move(c));
        }
        case SourceExpr::Kind::Wreath: {
            const long long m = g.m();
            std::vector<Element> map;
            map.reserve(m);
            for (long long s = 0; s < m; ++s)
                map.push_back(inverse(g.inner(), a.comps[residue(s - a.n, m)]));
            return Element::wreath(std::move(map), -a.n);
        }
    }
    return Element::unit();
}

Element inverse(const FiniteExpr& g, const Element& a) {
    require_conforms(g, a, "inverse");
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return Element::unit();
        case FiniteExpr::Kind::Product: {
            std::vector<Element> c;
            c.reserve(g.factors().size());
            for (std::size_t i = 0; i < g.factors().size(); ++i)
                c.push_back(inverse(g.factors()[i], a.comps[i]));
            return Element::tuple(std::move(c));
        }
        case FiniteExpr::Kind::Wreath: {
            const long long m = g.m();
            std::vector<Element> map;
            map.reserve(m);
            for (long long s = 0; s < m; ++s)
                map.push_back(inverse(g.inner(), a.comps[residue(s - a.n, m)]));
            return Element::wreath(std::move(map), residue(-a.n, m));
        }
    }
    return Element::unit();
}

namespace {

std::vector<Element> enumerate_unchecked(const FiniteExpr& g) {
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return {Element::unit()};
        case FiniteExpr::Kind::Product: {
            std::vector<std::vector<Element>> per;
            per.reserve(g.factors().size());
            for (const auto& f : g.factors()) per.push_back(enumerate_unchecked(f));
            std::vector<Element> out;
            std::vector<std::size_t> idx(per.size(), 0);
            for (;;) {
                std::vector<Element> c;
                c.reserve(per.size());
                for (std::size_t i = 0; i < per.size(); ++i) c.push_back(per[i][idx[i]]);
                out.push_back(Element::tuple(std::move(c)));
                // odometer, last factor fastest
                std::size_t i = per.size();
                while (i > 0) {
                    --i;
                    if (++idx[i] < per[i].size()) break;
                    idx[i] = 0;
                    if (i == 0) return out;
                }
            }
        }
        case FiniteExpr::Kind::Wreath: {
            const long long m = g.m();
            std::vector<Element> inner = enumerate_unchecked(g.inner());
            std::vector<Element> out;
            std::vector<std::size_t> idx(m, 0);
            for (;;) {
                std::vector<Element> map;
                map.reserve(m);
                for (long long s = 0; s < m; ++s) map.push_back(inner[idx[s]]);
                for (long long k = 0; k < m; ++k) out.push_back(Element::wreath(map, k));
                std::size_t i = m;
                while (i > 0) {
                    --i;
                    if (++idx[i] < inner.size()) break;
                    idx[i] = 0;
                    if (i == 0) return out;
                }
            }
        }
    }
    return {Element::unit()};
}

}  // namespace

std::vector<Element> enumerate(const FiniteExpr& g, const Caps& caps) {
    Int n = order(g);
    if (n > to_int(caps.max_order))
        throw CapExceeded("group order " + n.get_str() + " exceeds cap " +
                          std::to_string(caps.max_order));
    std::vector<Element> out = enumerate_unchecked(g);
    assert(Int(static_cast<unsigned long>(out.size())) == n);
    return out;
}

std::vector<Element> generating_set(const FiniteExpr& g) {
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return {};
        case FiniteExpr::Kind::Product: {
            std::vector<Element> out;
            for (std::size_t i = 0; i < g.factors().size(); ++i) {
                for (const auto& gen : generating_set(g.factors()[i])) {
                    std::vector<Element> c;
                    c.reserve(g.factors().size());
                    for (std::size_t j = 0; j < g.factors().size(); ++j)
                        c.push_back(j == i ? gen : identity(g.factors()[j]));
                    out.push_back(Element::tuple(std::move(c)));
                }
            }
            return out;
        }
        case FiniteExpr::Kind::Wreath: {
            std::vector<Element> out;
            // inner generators planted at residue 0, plus the rotation.
            for (const auto& gen : generating_set(g.inner())) {
                std::vector<Element> map(g.m(), identity(g.inner()));
                map[0] = gen;
                out.push_back(Element::wreath(std::move(map), 0));
            }
            std::vector<Element> map(g.m(), identity(g.inner()));
            out.push_back(Element::wreath(std::move(map), 1));
            return out;
        }
    }
    return {};
}

long long element_order(const FiniteExpr& g, const Element& a) {
    const Element e = identity(g);
    Element cur = a;
    long long n = 1;
    while (!(cur == e)) {
        cur = mul(g, cur, a);
        ++n;
    }
    return n;
}

std::map<long long, long long> order_histogram(const FiniteExpr& g, const Caps& caps) {
    std::map<long long, long long> hist;
    for (const auto& a : enumerate(g, caps)) ++hist[element_order(g, a)];
    return hist;
}

// --- multiplication-table arithmetic ----------------------------------------

MulTable build_table(const FiniteExpr& g, const Caps& caps) {
    std::vector<Element> elems = enumerate(g, caps);
    std::map<Element, std::size_t> index;
    for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;

    MulTable table;
    table.n = elems.size();
    table.t.resize(table.n * table.n);
    table.inv.resize(table.n);
    table.id = index.at(identity(g));
    for (std::size_t a = 0; a < table.n; ++a)
        for (std::size_t b = 0; b < table.n; ++b) {
            std::size_t p = index.at(mul(g, elems[a], elems[b]));
            table.t[a * table.n + b] = p;
            if (p == table.id) table.inv[a] = b;
        }
    return table;
}

namespace {

// Subgroup closure of a seed set inside a table group.
std::vector<std::size_t> subgroup_closure(const MulTable& t, std::vector<std::size_t> seed) {
    std::vector<bool> in(t.n, false);
    std::vector<std::size_t> members;
    auto add = [&](std::size_t x) {
        if (!in[x]) {
            in[x] = true;
            members.push_back(x);
        }
    };
    add(t.id);
    for (std::size_t s : seed) add(s);
    for (std::size_t i = 0; i < members.size(); ++i) {
        add(t.inv[members[i]]);
        for (std::size_t j = 0; j <= i; ++j) {
            add(t.at(members[i], members[j]));
            add(t.at(members[j], members[i]));
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

// Quotient of a table group by a normal subgroup, as a new table.
MulTable quotient_table(const MulTable& t, const std::vector<std::size_t>& subgroup) {
    std::vector<bool> in_sub(t.n, false);
    for (std::size_t s : subgroup) in_sub[s] = true;

    std::vector<long long> coset_of(t.n, -1);
    std::vector<std::size_t> reps;
    for (std::size_t x = 0; x < t.n; ++x) {
        if (coset_of[x] >= 0) continue;
        std::size_t c = reps.size();
        reps.push_back(x);
        for (std::size_t s : subgroup) coset_of[t.at(x, s)] = static_cast<long long>(c);
    }

    MulTable q;
    q.n = reps.size();
    q.t.resize(q.n * q.n);
    q.inv.resize(q.n);
    q.id = static_cast<std::size_t>(coset_of[t.id]);
    for (std::size_t a = 0; a < q.n; ++a)
        for (std::size_t b = 0; b < q.n; ++b) {
            std::size_t p = static_cast<std::size_t>(coset_of[t.at(reps[a], reps[b])]);
            q.t[a * q.n + b] = p;
            if (p == q.id) q.inv[a] = b;
        }
    return q;
}

long long table_element_order(const MulTable& t, std::size_t a) {
    std::size_t cur = a;
    long long n = 1;
    while (cur != t.id) {
        cur = t.at(cur, a);
        ++n;
    }
    return n;
}

}  // namespace

std::vector<long long> abelian_invariants_from_table(const MulTable& table) {
    // Commutator subgroup.
    std::vector<std::size_t> comms;
    for (std::size_t a = 0; a < table.n; ++a)
        for (std::size_t b = 0; b < table.n; ++b) {
            std::size_t c = table.at(table.at(table.inv[a], table.inv[b]), table.at(a, b));
            comms.push_back(c);
        }
    MulTable q = quotient_table(table, subgroup_closure(table, std::move(comms)));

    // Peel off a maximal-order cyclic summand until the group is trivial.
    std::vector<long long> factors;
    while (q.n > 1) {
        std::size_t best = 0;
        long long best_order = 1;
        for (std::size_t x = 0; x < q.n; ++x) {
            long long o = table_element_order(q, x);
            if (o > best_order) {
                best_order = o;
                best = x;
            }
        }
        factors.push_back(best_order);
        q = quotient_table(q, subgroup_closure(q, {best}));
    }
    std::reverse(factors.begin(), factors.end());  // ascending, d1 | d2 | ...
    return factors;
}

std::vector<long long> abelianization(const FiniteExpr& g, const Caps& caps) {
    return abelian_invariants_from_table(build_table(g, caps));
}

// --- structural homomorphisms ------------------------------------------------

StructuralHom::StructuralHom() {
    static const auto triv = std::make_shared<const Node>(
        Node{Kind::Trivial, {}, 0, SourceExpr::trivial(), FiniteExpr::trivial()});
    node_ = triv;
}

StructuralHom StructuralHom::trivial() { return StructuralHom(); }

StructuralHom StructuralHom::kill_z() {
    static const auto n = std::make_shared<const Node>(
        Node{Kind::KillZ, {}, 0, SourceExpr::z(), FiniteExpr::trivial()});
    return StructuralHom(n);
}

StructuralHom StructuralHom::wreath(StructuralHom inner, long long m) {
    SourceExpr src = SourceExpr::wreath(inner.source(), m);
    FiniteExpr tgt = FiniteExpr::wreath(inner.target(), m);
    return StructuralHom(std::make_shared<const Node>(
        Node{Kind::Wreath, {std::move(inner)}, m, std::move(src), std::move(tgt)}));
}

StructuralHom StructuralHom::product(std::vector<StructuralHom> children) {
    // Same normalization as the expressions: flatten, drop trivial pairs,
    // unwrap singletons. Remaining children are KillZ or Wreath, so each
    // consumes exactly one source component.
    std::vector<StructuralHom> flat;
    for (auto& c : children) {
        if (c.kind() == Kind::Trivial) continue;
        if (c.kind() == Kind::Product)
            flat.insert(flat.end(), c.children().begin(), c.children().end());
        else
            flat.push_back(std::move(c));
    }
    if (flat.empty()) return trivial();
    if (flat.size() == 1) return flat[0];
    std::vector<SourceExpr> srcs;
    std::vector<FiniteExpr> tgts;
    for (const auto& c : flat) {
        srcs.push_back(c.source());
        tgts.push_back(c.target());
    }
    SourceExpr src = SourceExpr::product(std::move(srcs));
    FiniteExpr tgt = FiniteExpr::product(std::move(tgts));
    return StructuralHom(std::make_shared<const Node>(
        Node{Kind::Product, std::move(flat), 0, std::move(src), std::move(tgt)}));
}

Element StructuralHom::eval(const Element& a) const {
    if (!conforms(source(), a))
        throw ShapeMismatch("lambda: element " + show_element(a) +
                            " does not conform to " + show(source()));
    switch (kind()) {
        case Kind::Trivial:
        case Kind::KillZ:
            return Element::unit();
        case Kind::Wreath: {
            std::vector<Element> map;
            map.reserve(m());
            for (const auto& c : a.comps) map.push_back(inner().eval(c));
            return Element::wreath(std::move(map), residue(a.n, m()));
        }
        case Kind::Product: {
            std::vector<Element> out;
            for (std::size_t i = 0; i < children().size(); ++i) {
                if (children()[i].kind() == Kind::KillZ) continue;
                out.push_back(children()[i].eval(a.comps[i]));
            }
            if (out.empty()) return Element::unit();
            if (out.size() == 1) return out[0];
            return Element::tuple(std::move(out));
        }
    }
    return Element::unit();
}

Element StructuralHom::lift(const Element& t) const {
    if (!conforms(target(), t))
        throw ShapeMismatch("lift: element " + show_element(t) +
                            " does not conform to " + show(target()));
    switch (kind()) {
        case Kind::Trivial:
            return Element::unit();
        case Kind::KillZ:
            return Element::integer(0);
        case Kind::Wreath: {
            std::vector<Element> map;
            map.reserve(m());
            for (const auto& c : t.comps) map.push_back(inner().lift(c));
            return Element::wreath(std::move(map), t.n);
        }
        case Kind::Product: {
            // Distribute target components to the non-killed children.
            std::size_t produced = 0;
            for (const auto& c : children())
                if (c.kind() != Kind::KillZ) ++produced;
            std::vector<Element> comps;
            comps.reserve(children().size());
            std::size_t next = 0;
            for (const auto& c : children()) {
                if (c.kind() == Kind::KillZ) {
                    comps.push_back(Element::integer(0));
                } else if (produced == 1) {
                    comps.push_back(c.lift(t));
                } else {
                    comps.push_back(c.lift(t.comps[next]));
                    ++next;
                }
            }
            return Element::tuple(std::move(comps));
        }
    }
    return Element::unit();
}

}  // namespace kreeb
