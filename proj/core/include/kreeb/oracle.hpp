#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kreeb/caps.hpp"
#include "kreeb/engine.hpp"
#include "kreeb/model.hpp"
#include "kreeb/torus.hpp"

namespace kreeb {

// Decoration-preserving tree automorphism: fixes the root, preserves
// adjacency, kinds, values and saddle counts, fixes every invariant child of
// a fixed atom, and rotates all orbit tuples of a fixed atom by one shared
// power of the declared rotation.
struct TreeAutomorphism {
    std::vector<std::size_t> vperm;  // by vertex index
    std::vector<std::size_t> eperm;  // by edge index

    bool is_identity() const;
    bool operator==(const TreeAutomorphism&) const = default;
};

// The full group generated by the per-atom rotations, as explicit
// permutations: each generator advances every orbit of one atom by one step,
// transporting the hanging subtrees along their canonical identification.
// Exhaustive, duplicate-free, and verified closed under composition with
// every element revalidated. Throws CapExceeded past caps.max_order.
std::vector<TreeAutomorphism> enumerate_automorphisms(const DecoratedReebTree& tree,
                                                      const Caps& caps);

bool validate_automorphism(const DecoratedReebTree& tree, const TreeAutomorphism& a,
                           std::string* why = nullptr);

struct OracleReport {
    Int automorphism_count;
    std::map<long long, long long> histogram;       // element order -> count
    std::vector<long long> abelianization;          // invariant factors > 1
    bool match = false;
    std::vector<std::string> mismatches;
};

// Invariant-level comparison of a piece analysis against the brute-force
// automorphism group: order, element-order histogram and abelianization.
OracleReport compare(const PieceResult& engine_result, const DecoratedReebTree& tree,
                     const Caps& caps);

// Complete fixed-point search over the rational grid spanned by the
// translation denominators; any fixed point of a permutation-plus-translation
// map lies on that grid. Returns the first hit in scan order.
std::optional<TorusPoint> grid_fixed_point_scan(const AffineTorusMap& map,
                                                const Caps& caps);

}  // namespace kreeb
