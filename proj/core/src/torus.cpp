#include "kreeb/torus.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>

#include "kreeb/errors.hpp"

namespace kreeb {

// --- points and maps ----------------------------------------------------------

TorusPoint TorusPoint::reduced(std::vector<Rat> coords) {
    TorusPoint p;
    p.x.reserve(coords.size());
    for (auto& c : coords) p.x.push_back(mod1(c));
    return p;
}

std::string show(const TorusPoint& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        if (i) s += ", ";
        s += rat_str(p.x[i]);
    }
    return s + ")";
}

AffineTorusMap AffineTorusMap::identity(std::size_t p) {
    AffineTorusMap a;
    a.perm.resize(p);
    std::iota(a.perm.begin(), a.perm.end(), 0);
    a.trans.assign(p, Rat(0));
    return a;
}

bool AffineTorusMap::is_translation() const {
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] != static_cast<int>(i)) return false;
    return true;
}

bool AffineTorusMap::is_identity() const {
    if (!is_translation()) return false;
    for (const auto& t : trans)
        if (t != 0) return false;
    return true;
}

std::string show(const AffineTorusMap& a) {
    std::string s = "perm=[";
    for (std::size_t i = 0; i < a.perm.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a.perm[i]);
    }
    s += "] trans=[";
    for (std::size_t i = 0; i < a.trans.size(); ++i) {
        if (i) s += ",";
        s += rat_str(a.trans[i]);
    }
    return s + "]";
}

TorusPoint apply(const AffineTorusMap& map, const TorusPoint& x) {
    if (map.dim() != x.dim())
        throw DimensionMismatch("apply: map dim " + std::to_string(map.dim()) +
                                " vs point dim " + std::to_string(x.dim()));
    std::vector<Rat> out(map.dim());
    for (std::size_t i = 0; i < map.dim(); ++i)
        out[i] = mod1(x.x[map.perm[i]] + map.trans[i]);
    TorusPoint p;
    p.x = std::move(out);
    return p;
}

AffineTorusMap compose(const AffineTorusMap& a, const AffineTorusMap& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("compose: dims " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
    AffineTorusMap c;
    c.perm.resize(a.dim());
    c.trans.resize(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        c.perm[i] = a.perm[b.perm[i]];
        c.trans[i] = mod1(a.trans[b.perm[i]] + b.trans[i]);
    }
    return c;
}

std::optional<TorusPoint> fixed_point(const AffineTorusMap& map) {
    // Solving x_{perm(i)} + t_i = x_i around each cycle: solvable iff the
    // cycle's translation sum is an integer; then coordinates propagate from
    // an arbitrary anchor.
    const std::size_t p = map.dim();
    std::vector<Rat> sol(p, Rat(0));
    std::vector<bool> seen(p, false);
    for (std::size_t start = 0; start < p; ++start) {
        if (seen[start]) continue;
        Rat sum(0);
        std::size_t i = start;
        do {
            seen[i] = true;
            sum += map.trans[i];
            i = static_cast<std::size_t>(map.perm[i]);
        } while (i != start);
        if (sum.get_den() != 1) return std::nullopt;
        // anchor x_start = 0, then x_{perm(i)} = x_i - t_i
        Rat val(0);
        i = start;
        do {
            sol[i] = mod1(val);
            val = val - map.trans[i];
            i = static_cast<std::size_t>(map.perm[i]);
        } while (i != start);
    }
    TorusPoint w;
    w.x = std::move(sol);
    assert(apply(map, w) == w);
    return w;
}

// --- actions -------------------------------------------------------------------

struct TorusAction::Node {
    enum class K { Trivial, Cyclic, Product, Extend, Wreath } k;
    std::size_t dim = 0;
    std::size_t n = 0;  // Trivial width / Extend padding
    long long m = 0;    // Cyclic / Wreath
    std::vector<TorusAction> factors;  // Product
    TorusAction inner() const { return factors[0]; }  // Extend / Wreath
};

TorusAction::TorusAction(NodePtr root, FiniteExpr group, std::size_t dim)
    : root_(std::move(root)), group_(std::move(group)), dim_(dim) {}

TorusAction::TorusAction() {
    auto node = std::make_shared<Node>();
    node->k = Node::K::Trivial;
    root_ = node;
}

TorusAction act_trivial(std::size_t n) {
    auto node = std::make_shared<TorusAction::Node>();
    node->k = TorusAction::Node::K::Trivial;
    node->dim = n;
    node->n = n;
    return TorusAction(node, FiniteExpr::trivial(), n);
}

TorusAction act_cyclic(long long m) {
    if (m < 1) throw ShapeMismatch("act_cyclic requires m >= 1");
    if (m == 1) return act_trivial(1);
    auto node = std::make_shared<TorusAction::Node>();
    node->k = TorusAction::Node::K::Cyclic;
    node->dim = 1;
    node->m = m;
    return TorusAction(node, FiniteExpr::cyclic(m), 1);
}

TorusAction act_product(std::vector<TorusAction> actions) {
    // Flatten nested products; block order is preserved.
    std::vector<TorusAction> flat;
    for (auto& a : actions) {
        if (a.root_->k == TorusAction::Node::K::Product)
            flat.insert(flat.end(), a.root_->factors.begin(), a.root_->factors.end());
        else
            flat.push_back(std::move(a));
    }
    std::size_t dim = 0;
    std::vector<FiniteExpr> groups;
    bool all_trivial = true;
    for (const auto& a : flat) {
        dim += a.dimension();
        groups.push_back(a.group());
        if (a.group().kind() != FiniteExpr::Kind::Trivial) all_trivial = false;
    }
    if (flat.empty() || all_trivial) return act_trivial(dim);
    if (flat.size() == 1) return flat[0];
    FiniteExpr group = FiniteExpr::product(std::move(groups));
    auto node = std::make_shared<TorusAction::Node>();
    node->k = TorusAction::Node::K::Product;
    node->dim = dim;
    node->factors = std::move(flat);
    return TorusAction(node, std::move(group), dim);
}

TorusAction act_extend_trivial(TorusAction action, std::size_t n) {
    if (n == 0) return action;
    if (action.root_->k == TorusAction::Node::K::Trivial)
        return act_trivial(action.dimension() + n);
    std::size_t dim = action.dimension() + n;
    FiniteExpr group = action.group();
    auto node = std::make_shared<TorusAction::Node>();
    node->k = TorusAction::Node::K::Extend;
    node->dim = dim;
    node->n = n;
    node->factors = {std::move(action)};
    return TorusAction(node, std::move(group), dim);
}

TorusAction act_wreath(TorusAction action, long long m) {
    if (m < 2) throw ShapeMismatch("act_wreath requires m >= 2");
    std::size_t dim = action.dimension() * static_cast<std::size_t>(m) + 1;
    FiniteExpr group = FiniteExpr::wreath(action.group(), m);
    auto node = std::make_shared<TorusAction::Node>();
    node->k = TorusAction::Node::K::Wreath;
    node->dim = dim;
    node->m = m;
    node->factors = {std::move(action)};
    return TorusAction(node, std::move(group), dim);
}

namespace {

// How many components of a flat tuple element a normalized group expression
// consumes: products take one per factor, the trivial group none.
std::size_t consume_arity(const FiniteExpr& g) {
    switch (g.kind()) {
        case FiniteExpr::Kind::Trivial:
            return 0;
        case FiniteExpr::Kind::Product:
            return g.factors().size();
        case FiniteExpr::Kind::Wreath:
            return 1;
    }
    return 0;
}

// Slice `count` components for a factor out of the parent element.
Element take_components(const FiniteExpr& factor_group, const Element& parent,
                        std::size_t& next, std::size_t total) {
    std::size_t count = consume_arity(factor_group);
    if (count == 0) return Element::unit();
    if (total == 1) return parent;  // single-consumer parent is unwrapped
    if (count == 1) return parent.comps[next++];
    std::vector<Element> sub(parent.comps.begin() + next,
                             parent.comps.begin() + next + count);
    next += count;
    return Element::tuple(std::move(sub));
}

}  // namespace

AffineTorusMap TorusAction::evaluate(const Element& g) const {
    if (!conforms(group_, g))
        throw ShapeMismatch("evaluate: element " + show_element(g) +
                            " does not conform to " + show(group_));
    using K = Node::K;
    switch (root_->k) {
        case K::Trivial:
            return AffineTorusMap::identity(dim_);
        case K::Cyclic: {
            AffineTorusMap a = AffineTorusMap::identity(1);
            a.trans[0] = mod1(make_rat(g.n, root_->m));
            return a;
        }
        case K::Product: {
            std::size_t total = 0;
            for (const auto& f : root_->factors) total += consume_arity(f.group());
            AffineTorusMap out;
            out.perm.reserve(dim_);
            out.trans.reserve(dim_);
            std::size_t next = 0, offset = 0;
            for (const auto& f : root_->factors) {
                Element part = take_components(f.group(), g, next, total);
                AffineTorusMap fm = f.evaluate(part);
                for (std::size_t i = 0; i < fm.dim(); ++i) {
                    out.perm.push_back(fm.perm[i] + static_cast<int>(offset));
                    out.trans.push_back(fm.trans[i]);
                }
                offset += fm.dim();
            }
            return out;
        }
        case K::Extend: {
            AffineTorusMap inner = root_->inner().evaluate(g);
            std::size_t base = inner.dim();
            for (std::size_t i = 0; i < root_->n; ++i) {
                inner.perm.push_back(static_cast<int>(base + i));
                inner.trans.push_back(Rat(0));
            }
            return inner;
        }
        case K::Wreath: {
            const long long m = root_->m;
            const std::size_t p = root_->inner().dimension();
            const long long k = g.n;
            AffineTorusMap out;
            out.perm.resize(dim_);
            out.trans.resize(dim_);
            for (long long i = 0; i < m; ++i) {
                AffineTorusMap block = root_->inner().evaluate(g.comps[i]);
                long long src = (i + k) % m;
                for (std::size_t j = 0; j < p; ++j) {
                    out.perm[i * p + j] = static_cast<int>(src * p) + block.perm[j];
                    out.trans[i * p + j] = block.trans[j];
                }
            }
            out.perm[m * p] = static_cast<int>(m * p);
            out.trans[m * p] = mod1(make_rat(k, m));
            return out;
        }
    }
    return AffineTorusMap::identity(dim_);
}

TorusPoint TorusAction::apply_direct(const Element& g, const TorusPoint& x) const {
    if (x.dim() != dim_)
        throw DimensionMismatch("apply_direct: point dim " + std::to_string(x.dim()));
    if (!conforms(group_, g))
        throw ShapeMismatch("apply_direct: element does not conform");
    using K = Node::K;
    switch (root_->k) {
        case K::Trivial:
            return x;
        case K::Cyclic: {
            TorusPoint out;
            out.x.push_back(mod1(x.x[0] + make_rat(g.n, root_->m)));
            return out;
        }
        case K::Product: {
            std::size_t total = 0;
            for (const auto& f : root_->factors) total += consume_arity(f.group());
            TorusPoint out;
            out.x.reserve(dim_);
            std::size_t next = 0, offset = 0;
            for (const auto& f : root_->factors) {
                Element part = take_components(f.group(), g, next, total);
                TorusPoint block;
                block.x.assign(x.x.begin() + offset, x.x.begin() + offset + f.dimension());
                TorusPoint moved = f.apply_direct(part, block);
                out.x.insert(out.x.end(), moved.x.begin(), moved.x.end());
                offset += f.dimension();
            }
            return out;
        }
        case K::Extend: {
            const std::size_t inner_dim = root_->inner().dimension();
            TorusPoint head;
            head.x.assign(x.x.begin(), x.x.begin() + inner_dim);
            TorusPoint moved = root_->inner().apply_direct(g, head);
            moved.x.insert(moved.x.end(), x.x.begin() + inner_dim, x.x.end());
            return moved;
        }
        case K::Wreath: {
            const long long m = root_->m;
            const std::size_t p = root_->inner().dimension();
            const long long k = g.n;
            TorusPoint out;
            out.x.resize(dim_);
            // block i of the image is block (i+k mod m) moved by alpha(i)
            for (long long i = 0; i < m; ++i) {
                long long src = (i + k) % m;
                TorusPoint block;
                block.x.assign(x.x.begin() + src * p, x.x.begin() + (src + 1) * p);
                TorusPoint moved = root_->inner().apply_direct(g.comps[i], block);
                for (std::size_t j = 0; j < p; ++j) out.x[i * p + j] = moved.x[j];
            }
            out.x[m * p] = mod1(x.x[m * p] + make_rat(k, m));
            return out;
        }
    }
    return x;
}

FreenessReport is_free(const TorusAction& action, const Caps& caps) {
    FreenessReport report;
    report.free = true;
    report.all_translations = true;
    const Element e = identity(action.group());
    for (const auto& g : enumerate(action.group(), caps)) {
        AffineTorusMap map = action.evaluate(g);
        if (!map.is_translation()) report.all_translations = false;
        if (g == e) continue;
        FreenessItem item;
        item.g = g;
        item.witness = fixed_point(map);
        item.fixed_point_free = !item.witness.has_value();
        if (!item.fixed_point_free) report.free = false;
        report.items.push_back(std::move(item));
    }
    return report;
}

// --- crystal group -------------------------------------------------------------

CrystalGroup::CrystalGroup(TorusAction action, const Caps& caps)
    : action_(std::move(action)) {
    FreenessReport report = is_free(action_, caps);
    if (!report.free) {
        std::string msg = "action is not free";
        for (const auto& item : report.items)
            if (!item.fixed_point_free) {
                msg += ": element " + show_element(item.g) + " fixes " +
                       show(*item.witness);
                break;
            }
        throw NotFree(msg);
    }
}

CrystalGroup pi1_presentation(const TorusAction& action, const Caps& caps) {
    return CrystalGroup(action, caps);
}

CrystalGroup::Elt CrystalGroup::identity_elt() const {
    return Elt{identity(action_.group()), std::vector<Int>(action_.dimension())};
}

CrystalGroup::Elt CrystalGroup::lift(const Element& g) const {
    return Elt{g, std::vector<Int>(action_.dimension())};
}

CrystalGroup::Elt CrystalGroup::lattice(std::vector<Int> z) const {
    if (z.size() != action_.dimension()) throw DimensionMismatch("lattice offset size");
    return Elt{identity(action_.group()), std::move(z)};
}

bool CrystalGroup::in_lattice(const Elt& a) const {
    return a.g == identity(action_.group());
}

std::vector<Int> CrystalGroup::cocycle(const Element& g, const Element& h) const {
    // Compose the unreduced translations of the two lifts; the carry against
    // the reduced product map is the lattice correction.
    AffineTorusMap mg = action_.evaluate(g);
    AffineTorusMap mh = action_.evaluate(h);
    AffineTorusMap mgh = action_.evaluate(kreeb::mul(action_.group(), g, h));
    std::vector<Int> c(action_.dimension());
    for (std::size_t i = 0; i < action_.dimension(); ++i) {
        Rat raw = mg.trans[mh.perm[i]] + mh.trans[i];
        Rat diff = raw - mgh.trans[i];
        assert(diff.get_den() == 1);
        c[i] = diff.get_num();
    }
    return c;
}

CrystalGroup::Elt CrystalGroup::mul(const Elt& a, const Elt& b) const {
    // (g, z)(h, w) = (gh, sigma_h*z + w + c(g, h))
    AffineTorusMap mh = action_.evaluate(b.g);
    std::vector<Int> c = cocycle(a.g, b.g);
    std::vector<Int> z(action_.dimension());
    for (std::size_t i = 0; i < action_.dimension(); ++i)
        z[i] = a.z[mh.perm[i]] + b.z[i] + c[i];
    return Elt{kreeb::mul(action_.group(), a.g, b.g), std::move(z)};
}

CrystalGroup::Elt CrystalGroup::inverse(const Elt& a) const {
    Element ginv = kreeb::inverse(action_.group(), a.g);
    AffineTorusMap minv = action_.evaluate(ginv);
    std::vector<Int> c = cocycle(a.g, ginv);
    std::vector<Int> w(action_.dimension());
    for (std::size_t i = 0; i < action_.dimension(); ++i)
        w[i] = -a.z[minv.perm[i]] - c[i];
    Elt out{std::move(ginv), std::move(w)};
    assert(in_lattice(mul(a, out)));
    return out;
}

Homology homology_h1(const CrystalGroup& crystal, const Caps& caps) {
    const FiniteExpr& group = crystal.deck_group();
    const std::size_t p = crystal.lattice_rank();
    std::vector<Element> elems = enumerate(group, caps);
    std::map<Element, std::size_t> index;
    for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;

    // Conjugating a lattice generator by a lift permutes coordinates, so in
    // the abelianization the lattice generators collapse along the orbits of
    // the permutation image.
    std::vector<std::size_t> parent(p);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::vector<Element> gens = generating_set(group);
    for (const auto& s : gens) {
        AffineTorusMap m = crystal.action().evaluate(s);
        for (std::size_t i = 0; i < p; ++i) {
            std::size_t a = find(i), b = find(static_cast<std::size_t>(m.perm[i]));
            if (a != b) parent[a] = b;
        }
    }
    std::vector<long long> rep_col(p, -1);
    std::size_t n_reps = 0;
    for (std::size_t i = 0; i < p; ++i)
        if (find(i) == i) rep_col[i] = static_cast<long long>(n_reps++);
    auto col_of_coord = [&](std::size_t i) {
        return static_cast<std::size_t>(rep_col[find(i)]);
    };

    // Columns: lattice orbit representatives, then one lift per element.
    // Rows: x_id = 0 plus x_g + x_s - x_{gs} = c(g, s) for every g and every
    // generator s; the remaining pair relations follow from these.
    const std::size_t cols = n_reps + elems.size();
    std::vector<std::vector<Int>> rows;
    {
        std::vector<Int> row(cols);
        row[n_reps + index.at(identity(group))] = 1;
        rows.push_back(std::move(row));
    }
    for (const auto& s : gens) {
        for (const auto& g : elems) {
            std::vector<Int> row(cols);
            row[n_reps + index.at(g)] += 1;
            row[n_reps + index.at(s)] += 1;
            row[n_reps + index.at(kreeb::mul(group, g, s))] -= 1;
            std::vector<Int> c = crystal.cocycle(g, s);
            for (std::size_t i = 0; i < p; ++i) row[col_of_coord(i)] -= c[i];
            rows.push_back(std::move(row));
        }
    }

    IntMat rel(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) rel.at(r, c) = rows[r][c];
    SnfResult snf = smith_normal_form(rel);

    Homology h;
    std::size_t rank_of_relations = 0;
    for (const auto& d : snf.diag) {
        if (d == 0) continue;
        ++rank_of_relations;
        if (d > 1) h.torsion.push_back(d);
    }
    std::sort(h.torsion.begin(), h.torsion.end());
    h.rank = cols - rank_of_relations;
    return h;
}

}  // namespace kreeb
