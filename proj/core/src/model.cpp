#include "kreeb/model.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

#include <json.hpp>

#include "kreeb/errors.hpp"

namespace kreeb {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Boundary: return "boundary";
        case VertexKind::Extremum: return "extremum";
        case VertexKind::Atom: return "atom";
    }
    return "?";
}

}  // namespace

// --- tree structure -----------------------------------------------------------

std::size_t DecoratedReebTree::vindex(const std::string& id) const {
    auto it = vid_.find(id);
    if (it == vid_.end()) throw InvariantViolation("unknown vertex id '" + id + "'");
    return it->second;
}

std::size_t DecoratedReebTree::eindex(const std::string& id) const {
    auto it = eid_.find(id);
    if (it == eid_.end()) throw InvariantViolation("unknown edge id '" + id + "'");
    return it->second;
}

std::size_t DecoratedReebTree::far_vertex(std::size_t edge, std::size_t from) const {
    const EdgeRec& e = edges[edge];
    std::size_t a = vid_.at(e.from), b = vid_.at(e.to);
    return a == from ? b : a;
}

std::vector<std::size_t> DecoratedReebTree::child_edges(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t e : adjacency_[v])
        if (static_cast<long long>(e) != parent_edge_[v]) out.push_back(e);
    return out;
}

long long DecoratedReebTree::extremum_count() const {
    long long n = 0;
    for (const auto& v : vertices)
        if (v.kind == VertexKind::Extremum) ++n;
    return n;
}

long long DecoratedReebTree::saddle_sum() const {
    long long n = 0;
    for (const auto& v : vertices)
        if (v.kind == VertexKind::Atom) n += v.saddles;
    return n;
}

void DecoratedReebTree::build_index() {
    vid_.clear();
    eid_.clear();
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (!vid_.emplace(vertices[i].id, i).second)
            throw InvariantViolation("duplicate vertex id '" + vertices[i].id + "'");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!eid_.emplace(edges[i].id, i).second)
            throw InvariantViolation("duplicate edge id '" + edges[i].id + "'");
        if (!vid_.count(edges[i].from) || !vid_.count(edges[i].to))
            throw InvariantViolation("edge '" + edges[i].id +
                                     "' references an unknown vertex");
        if (edges[i].from == edges[i].to)
            throw InvariantViolation("edge '" + edges[i].id + "' is a self-loop");
    }
    auto root_it = vid_.find(root_id);
    if (root_it == vid_.end())
        throw InvariantViolation("root '" + root_id + "' is not a vertex");
    root_ = root_it->second;

    adjacency_.assign(vertices.size(), {});
    for (std::size_t i = 0; i < edges.size(); ++i) {
        adjacency_[vid_.at(edges[i].from)].push_back(i);
        adjacency_[vid_.at(edges[i].to)].push_back(i);
    }
}

void DecoratedReebTree::orient_from_root() {
    parent_edge_.assign(vertices.size(), -1);
    std::vector<bool> seen(vertices.size(), false);
    std::deque<std::size_t> queue{root_};
    seen[root_] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t e : adjacency_[v]) {
            std::size_t w = far_vertex(e, v);
            if (seen[w]) continue;
            seen[w] = true;
            parent_edge_[w] = static_cast<long long>(e);
            queue.push_back(w);
            ++reached;
        }
    }
    if (reached != vertices.size())
        throw InvariantViolation("edge set does not connect all vertices to root '" +
                                 root_id + "'");
    if (edges.size() + 1 != vertices.size())
        throw InvariantViolation("edge set is not a tree (" +
                                 std::to_string(edges.size()) + " edges, " +
                                 std::to_string(vertices.size()) + " vertices)");
}

void DecoratedReebTree::check_structure() {
    const Vertex& root = vertices[root_];
    if (root.kind != VertexKind::Boundary)
        throw InvariantViolation("root '" + root_id + "' must be a boundary vertex");
    if (degree(root_) != 1)
        throw InvariantViolation("root '" + root_id + "' must have degree 1");

    long long boundary_count = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vertex& v = vertices[i];
        switch (v.kind) {
            case VertexKind::Boundary:
                ++boundary_count;
                if (degree(i) != 1)
                    throw InvariantViolation("boundary vertex '" + v.id +
                                             "' must have degree 1");
                break;
            case VertexKind::Extremum: {
                if (degree(i) != 1)
                    throw InvariantViolation("extremum '" + v.id +
                                             "' must have degree 1");
                std::size_t e = adjacency_[i][0];
                const Vertex& nb = vertices[far_vertex(e, i)];
                if (v.extremum == ExtremumKind::Max && !(v.f > nb.f))
                    throw InvariantViolation("max extremum '" + v.id +
                                             "' must exceed its neighbor's value");
                if (v.extremum == ExtremumKind::Min && !(v.f < nb.f))
                    throw InvariantViolation("min extremum '" + v.id +
                                             "' must be below its neighbor's value");
                break;
            }
            case VertexKind::Atom:
                if (degree(i) < 2)
                    throw InvariantViolation("atom '" + v.id + "' must have degree >= 2");
                if (v.saddles < 1)
                    throw InvariantViolation("atom '" + v.id + "' needs saddles >= 1");
                break;
        }
    }

    for (const EdgeRec& e : edges) {
        const Vertex& a = vertices[vid_.at(e.from)];
        const Vertex& b = vertices[vid_.at(e.to)];
        if (a.f == b.f)
            throw InvariantViolation("edge '" + e.id +
                                     "' joins vertices with equal values (" +
                                     a.id + ", " + b.id + ")");
    }

    const long long expected_boundaries = kind == PieceKind::Disk ? 1 : 2;
    if (boundary_count != expected_boundaries)
        throw InvariantViolation(
            std::string(kind == PieceKind::Disk ? "disk" : "cylinder") + " piece has " +
            std::to_string(boundary_count) + " boundary vertices, expected " +
            std::to_string(expected_boundaries));

    const long long chi = kind == PieceKind::Disk ? 1 : 0;
    if (extremum_count() - saddle_sum() != chi)
        throw InvariantViolation(
            "euler check failed: extrema(" + std::to_string(extremum_count()) +
            ") - saddles(" + std::to_string(saddle_sum()) + ") != " +
            std::to_string(chi) + " for this piece kind");
}

namespace {

// Lexicographically minimal rotation of a code vector, compared element-wise.
std::vector<CanonicalCode> min_rotation(const std::vector<CanonicalCode>& tuple) {
    std::vector<CanonicalCode> best = tuple;
    std::vector<CanonicalCode> cur = tuple;
    for (std::size_t r = 1; r < tuple.size(); ++r) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

std::string join_codes(const std::vector<CanonicalCode>& codes) {
    std::string out;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (i) out += ",";
        out += codes[i];
    }
    return out;
}

}  // namespace

void DecoratedReebTree::resolve_symmetries_and_codes() {
    // Bottom-up over the rooted tree: children codes exist before the parent
    // resolves its symmetry and builds its own code.
    std::vector<std::size_t> order;  // root first
    {
        std::deque<std::size_t> queue{root_};
        std::vector<bool> seen(vertices.size(), false);
        seen[root_] = true;
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (std::size_t e : child_edges(v)) {
                std::size_t w = far_vertex(e, v);
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    codes_.assign(vertices.size(), {});
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::size_t vi = *it;
        Vertex& v = vertices[vi];
        switch (v.kind) {
            case VertexKind::Extremum:
                codes_[vi] = std::string("E[") +
                             (v.extremum == ExtremumKind::Max ? "max," : "min,") +
                             rat_str(v.f) + "]";
                break;
            case VertexKind::Boundary: {
                codes_[vi] = "B[" + rat_str(v.f) + "]";
                std::vector<CanonicalCode> kids;
                for (std::size_t e : child_edges(vi))
                    kids.push_back(codes_[far_vertex(e, vi)]);
                if (!kids.empty()) {
                    std::sort(kids.begin(), kids.end());
                    codes_[vi] += "{" + join_codes(kids) + "}";
                }
                break;
            }
            case VertexKind::Atom: {
                std::vector<std::size_t> kids = child_edges(vi);
                std::set<std::string> kid_ids;
                std::unordered_map<std::string, CanonicalCode> code_of;
                for (std::size_t e : kids) {
                    kid_ids.insert(edges[e].id);
                    code_of[edges[e].id] = codes_[far_vertex(e, vi)];
                }

                AtomSymmetry sym;
                if (v.auto_symmetry) {
                    if (v.cyclic_order.size() != kids.size() ||
                        std::set<std::string>(v.cyclic_order.begin(),
                                              v.cyclic_order.end()) != kid_ids)
                        throw InvariantViolation(
                            "atom '" + v.id +
                            "': cyclic_order must list each child edge exactly once");
                    std::vector<std::pair<std::string, CanonicalCode>> listed;
                    for (const auto& eid : v.cyclic_order)
                        listed.emplace_back(eid, code_of.at(eid));
                    sym = detect_symmetry(listed);
                } else if (v.declared) {
                    sym = *v.declared;
                } else {
                    sym.m = 1;
                    for (std::size_t e : kids) sym.invariant.push_back(edges[e].id);
                }

                // Partition and shape checks on the resolved data.
                if (sym.m < 1)
                    throw InvariantViolation("atom '" + v.id + "': m must be >= 1");
                if ((sym.m == 1) != sym.orbits.empty())
                    throw InvariantViolation("atom '" + v.id +
                                             "': m == 1 iff there are no orbits");
                std::set<std::string> used;
                auto use = [&](const std::string& eid) {
                    if (!kid_ids.count(eid))
                        throw InvariantViolation("atom '" + v.id + "': edge '" + eid +
                                                 "' is not one of its child edges");
                    if (!used.insert(eid).second)
                        throw InvariantViolation("atom '" + v.id + "': edge '" + eid +
                                                 "' listed twice in its symmetry");
                };
                for (const auto& eid : sym.invariant) use(eid);
                for (std::size_t oi = 0; oi < sym.orbits.size(); ++oi) {
                    const auto& orbit = sym.orbits[oi];
                    if (orbit.size() != static_cast<std::size_t>(sym.m))
                        throw InvariantViolation(
                            "atom '" + v.id + "': orbit " + std::to_string(oi) +
                            " has " + std::to_string(orbit.size()) +
                            " members, expected m = " + std::to_string(sym.m));
                    for (const auto& eid : orbit) use(eid);
                    for (const auto& eid : orbit)
                        if (code_of.at(eid) != code_of.at(orbit[0]))
                            throw InvariantViolation(
                                "atom '" + v.id + "': orbit " + std::to_string(oi) +
                                " members '" + orbit[0] + "' and '" + eid +
                                "' hang non-isomorphic subtrees");
                }
                if (used.size() != kid_ids.size())
                    throw InvariantViolation(
                        "atom '" + v.id +
                        "': symmetry must partition all child edges (" +
                        std::to_string(used.size()) + " of " +
                        std::to_string(kid_ids.size()) + " covered)");
                if (sym.m >= 2 && !sym.invariant.empty())
                    notes_.push_back("atom '" + v.id + "': mixed declaration (m = " +
                                     std::to_string(sym.m) + " with " +
                                     std::to_string(sym.invariant.size()) +
                                     " invariant children) accepted as input");
                v.symmetry = std::move(sym);

                std::vector<CanonicalCode> inv_codes;
                for (const auto& eid : v.symmetry.invariant)
                    inv_codes.push_back(code_of.at(eid));
                std::sort(inv_codes.begin(), inv_codes.end());
                std::vector<std::string> orb_codes;
                for (const auto& orbit : v.symmetry.orbits) {
                    std::vector<CanonicalCode> tuple;
                    for (const auto& eid : orbit) tuple.push_back(code_of.at(eid));
                    orb_codes.push_back("(" + join_codes(min_rotation(tuple)) + ")");
                }
                std::sort(orb_codes.begin(), orb_codes.end());
                std::string orb_joined;
                for (const auto& oc : orb_codes) orb_joined += oc;
                codes_[vi] = "A[" + rat_str(v.f) + "," + std::to_string(v.saddles) +
                             "," + std::to_string(v.symmetry.m) + ",inv{" +
                             join_codes(inv_codes) + "},orb{" + orb_joined + "}]";
                break;
            }
        }
    }
}

void DecoratedReebTree::finalize() {
    if (vertices.empty()) throw InvariantViolation("piece has no vertices");
    build_index();
    orient_from_root();
    check_structure();
    resolve_symmetries_and_codes();
    finalized_ = true;
}

std::vector<std::size_t> DecoratedReebTree::canonical_invariant_edges(
    std::size_t atom) const {
    const Vertex& v = vertices[atom];
    std::vector<std::pair<std::pair<CanonicalCode, std::size_t>, std::size_t>> inv;
    for (const auto& eid : v.symmetry.invariant) {
        std::size_t e = eindex(eid);
        inv.push_back({{codes_[far_vertex(e, atom)], e}, e});
    }
    std::sort(inv.begin(), inv.end());
    std::vector<std::size_t> out;
    for (const auto& entry : inv) out.push_back(entry.second);
    return out;
}

std::vector<std::size_t> DecoratedReebTree::canonical_orbit_indices(
    std::size_t atom) const {
    const Vertex& v = vertices[atom];
    std::vector<std::pair<std::string, std::size_t>> orbs;
    for (std::size_t oi = 0; oi < v.symmetry.orbits.size(); ++oi) {
        std::vector<CanonicalCode> tuple;
        for (const auto& eid : v.symmetry.orbits[oi])
            tuple.push_back(codes_[far_vertex(eindex(eid), atom)]);
        orbs.push_back({join_codes(min_rotation(tuple)), oi});
    }
    std::sort(orbs.begin(), orbs.end());
    std::vector<std::size_t> out;
    for (const auto& [key, oi] : orbs) out.push_back(oi);
    return out;
}

std::vector<std::size_t> DecoratedReebTree::canonical_order(std::size_t v) const {
    std::vector<std::size_t> out;
    // Equal-code subtrees traverse isomorphic vertices at equal positions.
    auto visit = [&](auto&& self, std::size_t vi) -> void {
        out.push_back(vi);
        const Vertex& vx = vertices[vi];
        std::vector<std::size_t> kids = child_edges(vi);
        if (kids.empty()) return;
        if (vx.kind == VertexKind::Atom) {
            for (std::size_t e : canonical_invariant_edges(vi))
                self(self, far_vertex(e, vi));
            for (std::size_t oi : canonical_orbit_indices(vi))
                for (const auto& eid : vx.symmetry.orbits[oi])
                    self(self, far_vertex(eindex(eid), vi));
        } else {
            std::vector<std::pair<CanonicalCode, std::size_t>> order;
            for (std::size_t e : kids) order.push_back({codes_[far_vertex(e, vi)], e});
            std::sort(order.begin(), order.end());
            for (const auto& [code, e] : order) self(self, far_vertex(e, vi));
        }
    };
    visit(visit, v);
    return out;
}

CanonicalCode canonical_code(const DecoratedReebTree& tree, const std::string& vertex_id) {
    return tree.code_below(tree.vindex(vertex_id));
}

AtomSymmetry detect_symmetry(
    const std::vector<std::pair<std::string, CanonicalCode>>& children_cyclic_order) {
    const std::size_t n = children_cyclic_order.size();
    AtomSymmetry sym;
    if (n == 0) return sym;
    // Valid shifts form a subgroup of Z_n, so the smallest one is a divisor.
    std::size_t d0 = n;
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            ok = children_cyclic_order[i].second ==
                 children_cyclic_order[(i + d) % n].second;
        if (ok) {
            d0 = d;
            break;
        }
    }
    sym.m = static_cast<long long>(n / d0);
    if (sym.m == 1) {
        for (const auto& [id, code] : children_cyclic_order) sym.invariant.push_back(id);
        return sym;
    }
    for (std::size_t i = 0; i < d0; ++i) {
        std::vector<std::string> orbit;
        for (std::size_t s = 0; s < n / d0; ++s)
            orbit.push_back(children_cyclic_order[i + s * d0].first);
        sym.orbits.push_back(std::move(orbit));
    }
    return sym;
}

// --- equality -------------------------------------------------------------------

bool semantically_equal(const Vertex& a, const Vertex& b) {
    if (a.id != b.id || a.kind != b.kind || a.f != b.f) return false;
    switch (a.kind) {
        case VertexKind::Boundary:
            return true;
        case VertexKind::Extremum:
            return a.extremum == b.extremum;
        case VertexKind::Atom:
            return a.saddles == b.saddles && a.symmetry == b.symmetry;
    }
    return false;
}

bool semantically_equal(const DecoratedReebTree& a, const DecoratedReebTree& b) {
    if (a.kind != b.kind || a.root_id != b.root_id) return false;
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size())
        return false;
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
        if (!semantically_equal(a.vertices[i], b.vertices[i])) return false;
    for (std::size_t i = 0; i < a.edges.size(); ++i)
        if (!(a.edges[i] == b.edges[i])) return false;
    return true;
}

bool semantically_equal(const ProblemInstance& a, const ProblemInstance& b) {
    if (!(a.surface == b.surface)) return false;
    if (a.pieces.size() != b.pieces.size()) return false;
    for (std::size_t i = 0; i < a.pieces.size(); ++i)
        if (!semantically_equal(a.pieces[i], b.pieces[i])) return false;
    return true;
}

// --- parsing --------------------------------------------------------------------

namespace {

void check_keys(const json& o, const std::set<std::string>& allowed,
                const std::string& ctx) {
    for (const auto& [key, value] : o.items())
        if (!allowed.count(key))
            throw SchemaError("unknown field '" + key + "' in " + ctx);
}

const json& need(const json& o, const char* key, const std::string& ctx) {
    auto it = o.find(key);
    if (it == o.end()) throw SchemaError("missing field '" + std::string(key) +
                                         "' in " + ctx);
    return *it;
}

std::string need_string(const json& o, const char* key, const std::string& ctx) {
    const json& v = need(o, key, ctx);
    if (!v.is_string())
        throw SchemaError("field '" + std::string(key) + "' in " + ctx +
                          " must be a string");
    return v.get<std::string>();
}

long long need_nonneg_int(const json& o, const char* key, const std::string& ctx) {
    const json& v = need(o, key, ctx);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw SchemaError("field '" + std::string(key) + "' in " + ctx +
                          " must be a non-negative integer");
    return v.get<long long>();
}

std::vector<std::string> string_list(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw SchemaError(ctx + " must be an array of edge ids");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw SchemaError(ctx + " must contain strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

Vertex parse_vertex(const json& jv, const std::string& ctx) {
    if (!jv.is_object()) throw SchemaError(ctx + " must be an object");
    Vertex v;
    v.id = need_string(jv, "id", ctx);
    std::string type = need_string(jv, "type", ctx);
    const json& f = need(jv, "f", ctx);
    if (!f.is_string())
        throw SchemaError("field 'f' in " + ctx +
                          " must be an exact rational as a string");
    v.f = parse_rational(f.get<std::string>());

    if (type == "boundary") {
        v.kind = VertexKind::Boundary;
        check_keys(jv, {"id", "type", "f"}, ctx);
    } else if (type == "extremum") {
        v.kind = VertexKind::Extremum;
        check_keys(jv, {"id", "type", "f", "extremum"}, ctx);
        std::string ek = need_string(jv, "extremum", ctx);
        if (ek == "min")
            v.extremum = ExtremumKind::Min;
        else if (ek == "max")
            v.extremum = ExtremumKind::Max;
        else
            throw SchemaError("extremum in " + ctx + " must be 'min' or 'max'");
    } else if (type == "atom") {
        v.kind = VertexKind::Atom;
        check_keys(jv, {"id", "type", "f", "saddles", "symmetry", "cyclic_order"}, ctx);
        v.saddles = need_nonneg_int(jv, "saddles", ctx);
        if (auto it = jv.find("symmetry"); it != jv.end()) {
            if (it->is_string()) {
                if (it->get<std::string>() != "auto")
                    throw SchemaError("symmetry in " + ctx +
                                      " must be an object or \"auto\"");
                v.auto_symmetry = true;
                if (jv.find("cyclic_order") == jv.end())
                    throw SchemaError("symmetry \"auto\" in " + ctx +
                                      " requires cyclic_order");
                v.cyclic_order = string_list(jv.at("cyclic_order"),
                                             "cyclic_order in " + ctx);
            } else if (it->is_object()) {
                check_keys(*it, {"m", "invariant", "orbits"}, "symmetry of " + ctx);
                AtomSymmetry sym;
                sym.m = need_nonneg_int(*it, "m", "symmetry of " + ctx);
                if (auto inv = it->find("invariant"); inv != it->end())
                    sym.invariant = string_list(*inv, "invariant of " + ctx);
                if (auto orb = it->find("orbits"); orb != it->end()) {
                    if (!orb->is_array())
                        throw SchemaError("orbits of " + ctx + " must be an array");
                    for (const auto& tuple : *orb)
                        sym.orbits.push_back(
                            string_list(tuple, "orbit tuple of " + ctx));
                }
                v.declared = std::move(sym);
                if (jv.find("cyclic_order") != jv.end())
                    throw SchemaError("cyclic_order in " + ctx +
                                      " requires symmetry \"auto\"");
            } else {
                throw SchemaError("symmetry in " + ctx + " must be an object or \"auto\"");
            }
        } else if (jv.find("cyclic_order") != jv.end()) {
            throw SchemaError("cyclic_order in " + ctx + " requires symmetry \"auto\"");
        }
    } else {
        throw SchemaError("vertex type '" + type + "' in " + ctx +
                          " must be boundary, extremum or atom");
    }
    return v;
}

}  // namespace

ProblemInstance parse_instance(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("document must be a JSON object");
    check_keys(doc, {"surface", "pieces"}, "document");

    ProblemInstance inst;
    const json& surf = need(doc, "surface", "document");
    if (!surf.is_object()) throw SchemaError("surface must be an object");
    check_keys(surf, {"genus", "boundary", "orientable", "target"}, "surface");
    inst.surface.genus = need_nonneg_int(surf, "genus", "surface");
    inst.surface.boundary = need_nonneg_int(surf, "boundary", "surface");
    const json& orient = need(surf, "orientable", "surface");
    if (!orient.is_boolean()) throw SchemaError("surface.orientable must be a boolean");
    inst.surface.orientable = orient.get<bool>();
    std::string target = need_string(surf, "target", "surface");
    if (target == "line")
        inst.surface.target = TargetSpace::Line;
    else if (target == "circle")
        inst.surface.target = TargetSpace::Circle;
    else
        throw SchemaError("surface.target must be 'line' or 'circle'");

    const json& pieces = need(doc, "pieces", "document");
    if (!pieces.is_array()) throw SchemaError("pieces must be an array");

    // Surface admissibility comes before any deeper validation.
    if (!inst.surface.orientable)
        throw UnsupportedSurface("non-orientable surfaces are not supported");
    if (inst.surface.genus == 0 && inst.surface.boundary == 0)
        throw UnsupportedSurface("the 2-sphere (genus 0, no boundary) is excluded");
    if (inst.surface.genus == 1 && inst.surface.boundary == 0)
        throw UnsupportedSurface("the 2-torus (genus 1, no boundary) is excluded");

    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        const json& jp = pieces[pi];
        std::string ctx = "pieces[" + std::to_string(pi) + "]";
        if (!jp.is_object()) throw SchemaError(ctx + " must be an object");
        check_keys(jp, {"kind", "root", "vertices", "edges"}, ctx);
        DecoratedReebTree tree;
        std::string kind = need_string(jp, "kind", ctx);
        if (kind == "disk")
            tree.kind = PieceKind::Disk;
        else if (kind == "cylinder")
            tree.kind = PieceKind::Cylinder;
        else
            throw SchemaError(ctx + ".kind must be 'disk' or 'cylinder'");
        tree.root_id = need_string(jp, "root", ctx);

        const json& jvs = need(jp, "vertices", ctx);
        if (!jvs.is_array()) throw SchemaError(ctx + ".vertices must be an array");
        for (std::size_t i = 0; i < jvs.size(); ++i)
            tree.vertices.push_back(
                parse_vertex(jvs[i], ctx + ".vertices[" + std::to_string(i) + "]"));

        const json& jes = need(jp, "edges", ctx);
        if (!jes.is_array()) throw SchemaError(ctx + ".edges must be an array");
        for (std::size_t i = 0; i < jes.size(); ++i) {
            const json& je = jes[i];
            std::string ectx = ctx + ".edges[" + std::to_string(i) + "]";
            if (!je.is_object()) throw SchemaError(ectx + " must be an object");
            check_keys(je, {"id", "from", "to"}, ectx);
            tree.edges.push_back(EdgeRec{need_string(je, "id", ectx),
                                         need_string(je, "from", ectx),
                                         need_string(je, "to", ectx)});
        }
        try {
            tree.finalize();
        } catch (InvariantViolation& e) {
            throw InvariantViolation(ctx + ": " + e.what());
        }
        for (const auto& note : tree.notes())
            inst.warnings.push_back(ctx + ": " + note);
        inst.pieces.push_back(std::move(tree));
    }
    if (inst.pieces.empty()) throw InvariantViolation("pieces must be non-empty");

    // Advisory Euler count: exact when the pieces cover the whole surface,
    // off by design when they were cut out of a larger one.
    long long piece_chi = 0;
    for (const auto& p : inst.pieces)
        piece_chi += p.kind == PieceKind::Disk ? 1 : 0;
    long long surface_chi = 2 - 2 * inst.surface.genus - inst.surface.boundary;
    if (piece_chi != surface_chi)
        inst.warnings.push_back(
            "euler characteristic of the pieces (" + std::to_string(piece_chi) +
            ") differs from the surface (" + std::to_string(surface_chi) +
            "); expected when pieces are cut from a larger surface");
    return inst;
}

std::string serialize_instance(const ProblemInstance& instance) {
    ordered_json doc;
    ordered_json surf;
    surf["genus"] = instance.surface.genus;
    surf["boundary"] = instance.surface.boundary;
    surf["orientable"] = instance.surface.orientable;
    surf["target"] = instance.surface.target == TargetSpace::Line ? "line" : "circle";
    doc["surface"] = std::move(surf);

    ordered_json pieces = ordered_json::array();
    for (const auto& tree : instance.pieces) {
        ordered_json jp;
        jp["kind"] = tree.kind == PieceKind::Disk ? "disk" : "cylinder";
        jp["root"] = tree.root_id;
        ordered_json jvs = ordered_json::array();
        for (const auto& v : tree.vertices) {
            ordered_json jv;
            jv["id"] = v.id;
            jv["type"] = kind_name(v.kind);
            jv["f"] = rat_str(v.f);
            if (v.kind == VertexKind::Extremum)
                jv["extremum"] = v.extremum == ExtremumKind::Max ? "max" : "min";
            if (v.kind == VertexKind::Atom) {
                jv["saddles"] = v.saddles;
                ordered_json sym;
                sym["m"] = v.symmetry.m;
                sym["invariant"] = v.symmetry.invariant;
                sym["orbits"] = v.symmetry.orbits;
                jv["symmetry"] = std::move(sym);
            }
            jvs.push_back(std::move(jv));
        }
        jp["vertices"] = std::move(jvs);
        ordered_json jes = ordered_json::array();
        for (const auto& e : tree.edges) {
            ordered_json je;
            je["id"] = e.id;
            je["from"] = e.from;
            je["to"] = e.to;
            jes.push_back(std::move(je));
        }
        jp["edges"] = std::move(jes);
        pieces.push_back(std::move(jp));
    }
    doc["pieces"] = std::move(pieces);
    return doc.dump(2) + "\n";
}

}  // namespace kreeb
