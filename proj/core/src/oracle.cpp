#include "kreeb/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>
#include <set>

#include "kreeb/errors.hpp"

namespace kreeb {

bool TreeAutomorphism::is_identity() const {
    for (std::size_t i = 0; i < vperm.size(); ++i)
        if (vperm[i] != i) return false;
    return true;
}

namespace {

TreeAutomorphism identity_automorphism(const DecoratedReebTree& tree) {
    TreeAutomorphism a;
    a.vperm.resize(tree.vertex_count());
    std::iota(a.vperm.begin(), a.vperm.end(), 0);
    a.eperm.resize(tree.edges.size());
    std::iota(a.eperm.begin(), a.eperm.end(), 0);
    return a;
}

// apply a, then b
TreeAutomorphism compose_autos(const TreeAutomorphism& a, const TreeAutomorphism& b) {
    TreeAutomorphism c;
    c.vperm.resize(a.vperm.size());
    c.eperm.resize(a.eperm.size());
    for (std::size_t i = 0; i < a.vperm.size(); ++i) c.vperm[i] = b.vperm[a.vperm[i]];
    for (std::size_t i = 0; i < a.eperm.size(); ++i) c.eperm[i] = b.eperm[a.eperm[i]];
    return c;
}

void fill_edge_perm(const DecoratedReebTree& tree, TreeAutomorphism& a) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> by_ends;
    for (std::size_t e = 0; e < tree.edges.size(); ++e) {
        std::size_t u = tree.vindex(tree.edges[e].from);
        std::size_t v = tree.vindex(tree.edges[e].to);
        by_ends[{std::min(u, v), std::max(u, v)}] = e;
    }
    a.eperm.assign(tree.edges.size(), 0);
    for (std::size_t e = 0; e < tree.edges.size(); ++e) {
        std::size_t u = a.vperm[tree.vindex(tree.edges[e].from)];
        std::size_t v = a.vperm[tree.vindex(tree.edges[e].to)];
        auto it = by_ends.find({std::min(u, v), std::max(u, v)});
        if (it == by_ends.end())
            throw Error("internal: automorphism image is not an edge");
        a.eperm[e] = it->second;
    }
}

// One generator per atom with m >= 2: advance every orbit by one position,
// matching consecutive member subtrees along their canonical traversals.
std::vector<TreeAutomorphism> rotation_generators(const DecoratedReebTree& tree) {
    std::vector<TreeAutomorphism> gens;
    for (std::size_t vi = 0; vi < tree.vertex_count(); ++vi) {
        const Vertex& v = tree.vertex_at(vi);
        if (v.kind != VertexKind::Atom || v.symmetry.m < 2) continue;
        TreeAutomorphism g = identity_automorphism(tree);
        for (const auto& orbit : v.symmetry.orbits) {
            const std::size_t m = orbit.size();
            std::vector<std::vector<std::size_t>> walks;
            for (const auto& eid : orbit)
                walks.push_back(
                    tree.canonical_order(tree.far_vertex(tree.eindex(eid), vi)));
            for (std::size_t s = 0; s < m; ++s) {
                const auto& from = walks[s];
                const auto& to = walks[(s + 1) % m];
                assert(from.size() == to.size());
                for (std::size_t i = 0; i < from.size(); ++i) g.vperm[from[i]] = to[i];
            }
        }
        fill_edge_perm(tree, g);
        gens.push_back(std::move(g));
    }
    return gens;
}

long long shared_rotation_power(const DecoratedReebTree& tree,
                                const TreeAutomorphism& a, std::size_t atom,
                                std::string* why) {
    const Vertex& v = tree.vertex_at(atom);
    long long shared = -1;
    for (const auto& eid : v.symmetry.invariant)
        if (a.eperm[tree.eindex(eid)] != tree.eindex(eid)) {
            if (why)
                *why = "atom '" + v.id + "': invariant child '" + eid + "' moved";
            return -1;
        }
    if (v.symmetry.orbits.empty()) return 0;
    for (const auto& orbit : v.symmetry.orbits) {
        const std::size_t m = orbit.size();
        // power taking position 0 to the image of position 0
        std::size_t img0 = a.eperm[tree.eindex(orbit[0])];
        long long k = -1;
        for (std::size_t s = 0; s < m; ++s)
            if (tree.eindex(orbit[s]) == img0) k = static_cast<long long>(s);
        if (k < 0) {
            if (why) *why = "atom '" + v.id + "': orbit image leaves the orbit";
            return -1;
        }
        for (std::size_t s = 0; s < m; ++s)
            if (a.eperm[tree.eindex(orbit[s])] !=
                tree.eindex(orbit[(s + static_cast<std::size_t>(k)) % m])) {
                if (why)
                    *why = "atom '" + v.id + "': orbit image is not a rotation";
                return -1;
            }
        if (shared >= 0 && shared != k) {
            if (why)
                *why = "atom '" + v.id + "': orbits rotated by different powers";
            return -1;
        }
        shared = k;
    }
    return shared;
}

}  // namespace

bool validate_automorphism(const DecoratedReebTree& tree, const TreeAutomorphism& a,
                           std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t n = tree.vertex_count();
    if (a.vperm.size() != n || a.eperm.size() != tree.edges.size())
        return fail("permutation size mismatch");
    std::vector<bool> hit(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (a.vperm[i] >= n || hit[a.vperm[i]]) return fail("not a vertex bijection");
        hit[a.vperm[i]] = true;
    }
    if (a.vperm[tree.root_index()] != tree.root_index())
        return fail("root is not fixed");

    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& v = tree.vertex_at(i);
        const Vertex& w = tree.vertex_at(a.vperm[i]);
        if (v.kind != w.kind) return fail("vertex kind changed at '" + v.id + "'");
        if (v.f != w.f) return fail("value changed at '" + v.id + "'");
        if (v.kind == VertexKind::Atom &&
            (v.saddles != w.saddles || v.symmetry.m != w.symmetry.m))
            return fail("atom data changed at '" + v.id + "'");
        if (v.kind == VertexKind::Extremum && v.extremum != w.extremum)
            return fail("extremum kind changed at '" + v.id + "'");
    }

    // adjacency: every edge image is an edge (eperm was derived from vperm,
    // so check consistency of the two permutations)
    for (std::size_t e = 0; e < tree.edges.size(); ++e) {
        std::size_t u = a.vperm[tree.vindex(tree.edges[e].from)];
        std::size_t v = a.vperm[tree.vindex(tree.edges[e].to)];
        const EdgeRec& img = tree.edges[a.eperm[e]];
        std::size_t iu = tree.vindex(img.from), iv = tree.vindex(img.to);
        if (!((u == iu && v == iv) || (u == iv && v == iu)))
            return fail("edge permutation inconsistent at '" + tree.edges[e].id + "'");
    }

    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& v = tree.vertex_at(i);
        if (v.kind != VertexKind::Atom) continue;
        std::string reason;
        if (a.vperm[i] == i) {
            if (shared_rotation_power(tree, a, i, &reason) < 0) return fail(reason);
        } else {
            // moved atom: symmetry data must transport onto the image atom
            const Vertex& w = tree.vertex_at(a.vperm[i]);
            std::set<std::size_t> img_inv;
            for (const auto& eid : w.symmetry.invariant)
                img_inv.insert(tree.eindex(eid));
            for (const auto& eid : v.symmetry.invariant)
                if (!img_inv.count(a.eperm[tree.eindex(eid)]))
                    return fail("atom '" + v.id +
                                "': invariant child lands outside the image atom's "
                                "invariant children");
            for (const auto& orbit : v.symmetry.orbits) {
                std::vector<std::size_t> img;
                for (const auto& eid : orbit) img.push_back(a.eperm[tree.eindex(eid)]);
                bool matched = false;
                for (const auto& worbit : w.symmetry.orbits) {
                    if (worbit.size() != img.size()) continue;
                    for (std::size_t r = 0; r < worbit.size() && !matched; ++r) {
                        bool all = true;
                        for (std::size_t s = 0; s < img.size() && all; ++s)
                            all = img[s] ==
                                  tree.eindex(worbit[(s + r) % worbit.size()]);
                        matched = all;
                    }
                    if (matched) break;
                }
                if (!matched)
                    return fail("atom '" + v.id +
                                "': orbit image is not a rotation of an image-atom "
                                "orbit");
            }
        }
    }
    return true;
}

std::vector<TreeAutomorphism> enumerate_automorphisms(const DecoratedReebTree& tree,
                                                      const Caps& caps) {
    if (!tree.finalized()) throw Error("oracle requires a finalized tree");
    std::vector<TreeAutomorphism> gens = rotation_generators(tree);

    std::vector<TreeAutomorphism> elements{identity_automorphism(tree)};
    std::set<std::vector<std::size_t>> seen{elements[0].vperm};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t cur = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            TreeAutomorphism next = compose_autos(elements[cur], g);
            if (seen.insert(next.vperm).second) {
                if (static_cast<long long>(elements.size()) >= caps.max_order)
                    throw CapExceeded("automorphism count exceeds cap " +
                                      std::to_string(caps.max_order));
                elements.push_back(std::move(next));
                queue.push_back(elements.size() - 1);
            }
        }
    }

    // The closure is a group and every member is a legal automorphism.
    for (const auto& a : elements) {
        std::string why;
        if (!validate_automorphism(tree, a, &why))
            throw Error("internal: generated map is not an automorphism: " + why);
    }
    for (const auto& a : elements)
        for (const auto& b : elements)
            if (!seen.count(compose_autos(a, b).vperm))
                throw Error("internal: automorphism set not closed under composition");
    return elements;
}

namespace {

long long permutation_order(const std::vector<std::size_t>& perm) {
    std::vector<bool> seen(perm.size(), false);
    long long ord = 1;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        long long len = 0;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = perm[j];
            ++len;
        }
        ord = std::lcm(ord, len);
    }
    return ord;
}

MulTable table_from_automorphisms(const std::vector<TreeAutomorphism>& elements) {
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i].vperm] = i;
    MulTable t;
    t.n = elements.size();
    t.t.resize(t.n * t.n);
    t.inv.resize(t.n);
    for (std::size_t i = 0; i < t.n; ++i)
        if (elements[i].is_identity()) t.id = i;
    for (std::size_t a = 0; a < t.n; ++a)
        for (std::size_t b = 0; b < t.n; ++b) {
            std::size_t p = index.at(compose_autos(elements[a], elements[b]).vperm);
            t.t[a * t.n + b] = p;
            if (p == t.id) t.inv[a] = b;
        }
    return t;
}

std::string show_factors(const std::vector<long long>& fs) {
    std::string s = "[";
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(fs[i]);
    }
    return s + "]";
}

}  // namespace

OracleReport compare(const PieceResult& engine_result, const DecoratedReebTree& tree,
                     const Caps& caps) {
    OracleReport report;
    std::vector<TreeAutomorphism> autos = enumerate_automorphisms(tree, caps);
    report.automorphism_count = static_cast<unsigned long>(autos.size());
    for (const auto& a : autos) ++report.histogram[permutation_order(a.vperm)];
    report.abelianization = abelian_invariants_from_table(table_from_automorphisms(autos));

    Int engine_order = order(engine_result.target);
    if (engine_order != report.automorphism_count)
        report.mismatches.push_back("order: engine " + engine_order.get_str() +
                                    " vs oracle " +
                                    report.automorphism_count.get_str());
    std::map<long long, long long> engine_hist =
        order_histogram(engine_result.target, caps);
    if (engine_hist != report.histogram)
        report.mismatches.push_back("element-order histogram differs");
    std::vector<long long> engine_abel = abelianization(engine_result.target, caps);
    if (engine_abel != report.abelianization)
        report.mismatches.push_back("abelianization: engine " +
                                    show_factors(engine_abel) + " vs oracle " +
                                    show_factors(report.abelianization));
    report.match = report.mismatches.empty();
    return report;
}

std::optional<TorusPoint> grid_fixed_point_scan(const AffineTorusMap& map,
                                                const Caps& caps) {
    const std::size_t p = map.dim();
    Int denom = denominator_lcm(map.trans);
    Int points;
    mpz_pow_ui(points.get_mpz_t(), denom.get_mpz_t(), static_cast<unsigned long>(p));
    if (points > to_int(caps.max_grid_points))
        throw CapExceeded("grid of " + points.get_str() + " points exceeds cap " +
                          std::to_string(caps.max_grid_points));

    const long long L = static_cast<long long>(denom.get_si());
    std::vector<long long> idx(p, 0);
    for (;;) {
        TorusPoint x;
        x.x.reserve(p);
        for (std::size_t i = 0; i < p; ++i) x.x.push_back(mod1(make_rat(idx[i], L)));
        if (apply(map, x) == x) return x;
        std::size_t i = p;
        bool done = p == 0;
        while (i > 0) {
            --i;
            if (++idx[i] < L) break;
            idx[i] = 0;
            if (i == 0) done = true;
        }
        if (done) break;
    }
    return std::nullopt;
}

}  // namespace kreeb
