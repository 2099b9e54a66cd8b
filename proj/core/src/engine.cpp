#include "kreeb/engine.hpp"

#include <cassert>
#include <set>

#include "kreeb/errors.hpp"

namespace kreeb {

namespace {

struct SubResult {
    StructuralHom hom;
    TorusAction action;
    std::size_t p = 0;
    std::optional<EtaLocator> eta;
};

SubResult base_result() {
    return SubResult{StructuralHom::trivial(), act_trivial(0), 0, std::nullopt};
}

// Analyzes the subtree reached through `edge` from `from`, treating the cut
// as the new root circle. One atom is consumed per step; base cases are a
// bare boundary circle (untwisted cylinder) and a bare extremum (disk around
// one critical point).
SubResult analyze_edge(const DecoratedReebTree& tree, std::size_t edge,
                       std::size_t from) {
    const std::size_t w = tree.far_vertex(edge, from);
    const Vertex& vw = tree.vertex_at(w);
    if (vw.kind != VertexKind::Atom) return base_result();

    // Children are processed in canonical order, so isomorphic subtrees
    // (orbit members in particular) analyze to identical expressions.
    const AtomSymmetry& sym = vw.symmetry;
    std::vector<SubResult> xs;
    for (std::size_t e : tree.canonical_invariant_edges(w))
        xs.push_back(analyze_edge(tree, e, w));

    if (sym.m == 1) {
        // All children fixed: the root cylinder contributes one free Z
        // coordinate that the target group does not see.
        std::vector<StructuralHom> homs;
        std::vector<TorusAction> actions;
        std::size_t p = 0;
        for (auto& x : xs) {
            homs.push_back(x.hom);
            actions.push_back(x.action);
            p += x.p;
        }
        homs.push_back(StructuralHom::kill_z());
        SubResult out;
        out.hom = StructuralHom::product(std::move(homs));
        out.action = act_extend_trivial(act_product(std::move(actions)), 1);
        out.p = p + 1;
        EtaLocator eta;
        eta.kind = EtaLocator::Kind::DirectZ;
        eta.factor_index = out.hom.kind() == StructuralHom::Kind::Product
                               ? static_cast<long long>(out.hom.children().size()) - 1
                               : -1;
        out.eta = eta;
        return out;
    }

    // m >= 2: one representative per orbit (the first tuple entry); equal
    // canonical codes make the result valid for every member.
    std::vector<SubResult> ys;
    for (std::size_t oi : tree.canonical_orbit_indices(w))
        ys.push_back(analyze_edge(tree, tree.eindex(sym.orbits[oi][0]), w));

    std::vector<StructuralHom> yhoms;
    std::vector<TorusAction> yactions;
    std::size_t py = 0;
    for (auto& y : ys) {
        yhoms.push_back(y.hom);
        yactions.push_back(y.action);
        py += y.p;
    }
    StructuralHom whom = StructuralHom::wreath(StructuralHom::product(std::move(yhoms)),
                                               sym.m);
    TorusAction waction = act_wreath(act_product(std::move(yactions)), sym.m);

    std::vector<StructuralHom> homs;
    std::vector<TorusAction> actions;
    std::size_t px = 0;
    for (auto& x : xs) {
        homs.push_back(x.hom);
        actions.push_back(x.action);
        px += x.p;
    }
    homs.push_back(std::move(whom));
    actions.push_back(std::move(waction));

    SubResult out;
    out.hom = StructuralHom::product(std::move(homs));
    out.action = act_product(std::move(actions));
    out.p = px + static_cast<std::size_t>(sym.m) * py + 1;
    EtaLocator eta;
    eta.kind = EtaLocator::Kind::WreathK;
    eta.factor_index = out.hom.kind() == StructuralHom::Kind::Product
                           ? static_cast<long long>(out.hom.children().size()) - 1
                           : -1;
    out.eta = eta;
    return out;
}

PieceResult seal(SubResult sub, const Caps& caps) {
    PieceResult out;
    out.source = sub.hom.source();
    out.target = sub.hom.target();
    out.hom = std::move(sub.hom);
    out.p = sub.p;
    out.action = std::move(sub.action);
    out.eta = sub.eta;
    if (!(out.action.group() == out.target))
        throw Error("internal: action group " + show(out.action.group()) +
                    " differs from target " + show(out.target));
    if (out.action.dimension() != out.p)
        throw Error("internal: action dimension " +
                    std::to_string(out.action.dimension()) + " differs from p = " +
                    std::to_string(out.p));
    try {
        out.freeness = is_free(out.action, caps);
        out.freeness_skipped = false;
        if (!out.freeness.free)
            throw Error("internal: constructed action failed freeness certification");
    } catch (const CapExceeded&) {
        out.freeness_skipped = true;
    }
    return out;
}

}  // namespace

PieceResult analyze_piece(const DecoratedReebTree& tree, const Caps& caps) {
    if (!tree.finalized()) throw Error("analyze_piece requires a finalized tree");
    const std::size_t root = tree.root_index();
    const std::size_t e0 = tree.child_edges(root)[0];
    return seal(analyze_edge(tree, e0, root), caps);
}

long long eta_eval(const PieceResult& result, const Element& a) {
    if (!result.eta)
        throw NotAPieceGroup("base-case result has no distinguished Z coordinate");
    if (!conforms(result.source, a))
        throw ShapeMismatch("eta: element does not conform to " + show(result.source));
    const Element* comp = &a;
    if (result.eta->factor_index >= 0)
        comp = &a.comps[static_cast<std::size_t>(result.eta->factor_index)];
    const bool want_int = result.eta->kind == EtaLocator::Kind::DirectZ;
    if (want_int != (comp->kind == Element::Kind::Int))
        throw NotAPieceGroup("eta locator does not match the expression shape");
    return comp->n;
}

Element eta_generator(const PieceResult& result) {
    if (!result.eta)
        throw NotAPieceGroup("base-case result has no distinguished Z coordinate");
    auto distinguished = [&](const SourceExpr& expr) -> Element {
        if (result.eta->kind == EtaLocator::Kind::DirectZ) return Element::integer(1);
        Element e = identity(expr);
        e.n = 1;
        return e;
    };
    if (result.eta->factor_index < 0) return distinguished(result.source);
    Element out = identity(result.source);
    const auto idx = static_cast<std::size_t>(result.eta->factor_index);
    out.comps[idx] = distinguished(result.source.factors()[idx]);
    return out;
}

bool generic_check(const ProblemInstance& instance) {
    for (const auto& piece : instance.pieces) {
        std::set<Rat> critical_values;
        for (std::size_t i = 0; i < piece.vertex_count(); ++i) {
            const Vertex& v = piece.vertex_at(i);
            if (v.kind == VertexKind::Boundary) continue;
            if (v.kind == VertexKind::Atom && v.saddles != 1) return false;
            if (!critical_values.insert(v.f).second) return false;
        }
    }
    return true;
}

AnalysisResult analyze_instance(const ProblemInstance& instance, const Caps& caps) {
    AnalysisResult out;
    out.warnings = instance.warnings;
    out.generic = generic_check(instance);

    std::vector<StructuralHom> homs;
    std::vector<TorusAction> actions;
    for (const auto& piece : instance.pieces) {
        PieceResult r = analyze_piece(piece, caps);
        homs.push_back(r.hom);
        actions.push_back(r.action);
        out.p += r.p;
        out.pieces.push_back(std::move(r));
    }
    out.hom = StructuralHom::product(std::move(homs));
    out.source = out.hom.source();
    out.target = out.hom.target();
    out.action = act_product(std::move(actions));
    if (!(out.action.group() == out.target))
        throw Error("internal: global action group differs from global target");
    if (out.action.dimension() != out.p)
        throw Error("internal: global action dimension differs from sum of piece p");

    try {
        out.freeness = is_free(out.action, caps);
        if (!out.freeness.free)
            throw Error("internal: global action failed freeness certification");
        out.is_torus = out.freeness.all_translations;
        CrystalGroup crystal = pi1_presentation(out.action, caps);
        out.pi1 = CrystalSummary{crystal.lattice_rank(), order(crystal.deck_group())};
        out.h1 = homology_h1(crystal, caps);
        if (out.is_torus && (out.h1->rank != out.p || !out.h1->torsion.empty()))
            throw Error("internal: translation action must have free H1 of rank p");
    } catch (const CapExceeded&) {
        out.certification_skipped = true;
        out.pi1.reset();
        out.h1.reset();
    }

    if (out.target.kind() == FiniteExpr::Kind::Trivial)
        out.verdict = "T^" + std::to_string(out.p);
    else
        out.verdict = "T^" + std::to_string(out.p) + "/" + friendly_name(out.target);
    return out;
}

}  // namespace kreeb
