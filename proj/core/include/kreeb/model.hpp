#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kreeb/rational.hpp"

namespace kreeb {

enum class TargetSpace { Line, Circle };

// The surface a map lives on. Non-orientable surfaces, the sphere and the
// 2-torus are rejected at parse time.
struct SurfaceDescriptor {
    long long genus = 0;
    long long boundary = 0;
    bool orientable = true;
    TargetSpace target = TargetSpace::Line;

    bool operator==(const SurfaceDescriptor&) const = default;
};

enum class VertexKind { Boundary, Extremum, Atom };
enum class ExtremumKind { Min, Max };
enum class PieceKind { Disk, Cylinder };

// Cyclic symmetry declaration of an atom: the m-fold rotation fixes every
// invariant child edge and advances each orbit tuple by one position.
// m == 1 iff there are no orbits.
struct AtomSymmetry {
    long long m = 1;
    std::vector<std::string> invariant;              // child edge ids
    std::vector<std::vector<std::string>> orbits;    // tuples of m child edge ids

    bool operator==(const AtomSymmetry&) const = default;
};

struct Vertex {
    std::string id;
    VertexKind kind = VertexKind::Boundary;
    Rat f;
    long long saddles = 0;                      // Atom
    ExtremumKind extremum = ExtremumKind::Min;  // Extremum
    // Raw symmetry input (Atom): explicit declaration, or auto-detection from
    // a cyclic order of the child edges. Absent means trivial.
    std::optional<AtomSymmetry> declared;
    bool auto_symmetry = false;
    std::vector<std::string> cyclic_order;
    // Resolved during validation; meaningful for atoms only.
    AtomSymmetry symmetry;
};

bool semantically_equal(const Vertex& a, const Vertex& b);

struct EdgeRec {
    std::string id;
    std::string from;
    std::string to;

    bool operator==(const EdgeRec&) const = default;
};

using CanonicalCode = std::string;

// Rooted tree of level-set classes of one surface piece: the root is the
// distinguished boundary circle, interior vertices are critical level
// components with symmetry data, leaves are extrema or the second boundary
// circle of a cylinder. finalize() validates every structural invariant,
// resolves symmetry declarations and caches canonical codes.
class DecoratedReebTree {
public:
    PieceKind kind = PieceKind::Disk;
    std::string root_id;
    std::vector<Vertex> vertices;
    std::vector<EdgeRec> edges;

    void finalize();  // throws SchemaError / InvariantViolation
    bool finalized() const { return finalized_; }

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t vindex(const std::string& id) const;
    std::size_t eindex(const std::string& id) const;
    std::size_t root_index() const { return root_; }
    const Vertex& vertex_at(std::size_t i) const { return vertices[i]; }
    const EdgeRec& edge_at(std::size_t i) const { return edges[i]; }

    std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
    // -1 for the root.
    long long parent_edge(std::size_t v) const { return parent_edge_[v]; }
    std::size_t far_vertex(std::size_t edge, std::size_t from) const;
    // Incident edges minus the parent edge, in input order.
    std::vector<std::size_t> child_edges(std::size_t v) const;

    const CanonicalCode& code_below(std::size_t v) const { return codes_[v]; }

    // Canonical traversal of the subtree below v. Two subtrees with equal
    // codes visit isomorphic vertices at equal positions, and the positional
    // pairing is a decorated isomorphism.
    std::vector<std::size_t> canonical_order(std::size_t v) const;

    // Canonical processing order of an atom's children: invariant child
    // edges sorted by (subtree code, edge index), orbit declaration indices
    // sorted by (canonical tuple key, index). Shared by the traversal above
    // and by the analysis recursion, so isomorphic subtrees are processed
    // identically.
    std::vector<std::size_t> canonical_invariant_edges(std::size_t atom) const;
    std::vector<std::size_t> canonical_orbit_indices(std::size_t atom) const;

    // Warnings produced during validation (accepted but noteworthy inputs).
    const std::vector<std::string>& notes() const { return notes_; }

    long long extremum_count() const;
    long long saddle_sum() const;

private:
    void build_index();
    void check_structure();
    void orient_from_root();
    void resolve_symmetries_and_codes();

    bool finalized_ = false;
    std::unordered_map<std::string, std::size_t> vid_;
    std::unordered_map<std::string, std::size_t> eid_;
    std::size_t root_ = 0;
    std::vector<std::vector<std::size_t>> adjacency_;  // vertex -> edge indices
    std::vector<long long> parent_edge_;
    std::vector<CanonicalCode> codes_;
    std::vector<std::string> notes_;
};

bool semantically_equal(const DecoratedReebTree& a, const DecoratedReebTree& b);

// One analysis problem: a surface plus the pieces of its decomposition.
struct ProblemInstance {
    SurfaceDescriptor surface;
    std::vector<DecoratedReebTree> pieces;
    std::vector<std::string> warnings;
};

bool semantically_equal(const ProblemInstance& a, const ProblemInstance& b);

// Parses and fully validates an instance document (see the input schema in
// the README). Throws SchemaError, InvariantViolation or UnsupportedSurface.
ProblemInstance parse_instance(const std::string& document);

// Deterministic re-serialization; parse_instance(serialize_instance(x))
// is semantically equal to x.
std::string serialize_instance(const ProblemInstance& instance);

CanonicalCode canonical_code(const DecoratedReebTree& tree, const std::string& vertex_id);

// Maximal cyclic symmetry of a list of child codes in cyclic order: the
// smallest rotation d with code[i] == code[i+d] for all i gives m = L/d.
// m == 1 declares everything invariant; otherwise the orbits are the
// rotation classes and no child is invariant.
AtomSymmetry detect_symmetry(
    const std::vector<std::pair<std::string, CanonicalCode>>& children_cyclic_order);

}  // namespace kreeb
