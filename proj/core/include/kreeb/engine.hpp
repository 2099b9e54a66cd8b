#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kreeb/caps.hpp"
#include "kreeb/groups.hpp"
#include "kreeb/model.hpp"
#include "kreeb/torus.hpp"

namespace kreeb {

// Locates the distinguished Z coordinate of a piece-analysis source group:
// the appended Z factor when the root atom has trivial symmetry, the integer
// coordinate of the appended wreath factor otherwise. factor_index == -1
// means the whole expression is that factor.
struct EtaLocator {
    enum class Kind { DirectZ, WreathK };
    Kind kind = Kind::DirectZ;
    long long factor_index = -1;
};

// Result of analyzing one piece tree.
struct PieceResult {
    SourceExpr source;
    FiniteExpr target;
    StructuralHom hom;
    std::size_t p = 0;
    TorusAction action;
    std::optional<EtaLocator> eta;  // absent for the two base cases
    FreenessReport freeness;
    bool freeness_skipped = false;  // order above cap, certification skipped
};

PieceResult analyze_piece(const DecoratedReebTree& tree, const Caps& caps);

// Projection of the distinguished Z coordinate; surjective onto Z with
// eta(eta_generator()) == 1. Throws NotAPieceGroup for base-case results.
long long eta_eval(const PieceResult& result, const Element& a);

// Source element with eta == 1 and all other coordinates trivial.
Element eta_generator(const PieceResult& result);

struct CrystalSummary {
    std::size_t lattice_rank = 0;
    Int deck_order;
};

struct AnalysisResult {
    std::vector<PieceResult> pieces;
    SourceExpr source;
    FiniteExpr target;
    StructuralHom hom;
    std::size_t p = 0;
    TorusAction action;
    FreenessReport freeness;
    bool certification_skipped = false;  // group above cap; pi1/h1 absent too
    std::optional<CrystalSummary> pi1;
    std::optional<Homology> h1;
    bool is_torus = false;  // meaningful when certification ran
    std::string verdict;    // "T^p" or "T^p/<group>"
    bool generic = false;
    std::vector<std::string> warnings;
};

AnalysisResult analyze_instance(const ProblemInstance& instance, const Caps& caps);

// True iff every piece has pairwise distinct critical values and every atom
// carries exactly one saddle. When true the analysis must report a torus
// with free H1 of rank p.
bool generic_check(const ProblemInstance& instance);

}  // namespace kreeb
