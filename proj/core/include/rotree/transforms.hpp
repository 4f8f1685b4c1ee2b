#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rotree/encodings.hpp"
#include "rotree/tree_core.hpp"

namespace rotree {

enum class LeafKind : std::uint8_t { internal, left, right, root };

std::string to_string(LeafKind kind);

/*
 * Full binary tree rot T (or corot T) with the identification of its internal
 * vertices with T \ {∅}. origin[v] is the source vertex u with ũ = v, or -1 for leaves.
 */
struct RotatedTree {
    PlaneTree tree;
    std::vector<PlaneTree::Vertex> origin;
    std::vector<LeafKind> leaf_kind;

    std::size_t left_leaf_count() const;
    std::size_t right_leaf_count() const;
    // tilde[u] = ũ for u != ∅ (tilde[0] = -1)
    std::vector<PlaneTree::Vertex> tilde() const;
};

// Lukasiewicz walk of the result is the contour of `tree` followed by a step down
RotatedTree rotate(const PlaneTree& tree);
RotatedTree corotate(const PlaneTree& tree);

// direct recursive constructions, kept as oracles (recursion depth = height)
PlaneTree rotate_recursive(const PlaneTree& tree);
PlaneTree corotate_recursive(const PlaneTree& tree);

// mirror of a rotated tree, carrying origin and leaf kinds (left and right swap)
RotatedTree mirror(const RotatedTree& rotated);

/*
 * Subtree (rot T)° of the internal vertices. right_edge[v] = 1 when v is the second
 * child of its parent in rot T. origin[v] is the source vertex of T.
 */
struct InternalSubtree {
    PlaneTree tree;
    std::vector<std::uint8_t> right_edge;
    std::vector<PlaneTree::Vertex> origin;

    // children of v in (rot T)°, -1 when absent
    PlaneTree::Vertex left_child(PlaneTree::Vertex v) const;
    PlaneTree::Vertex right_child(PlaneTree::Vertex v) const;
};

InternalSubtree internal_subtree(const RotatedTree& rotated);

// H*(k) = |w̃_k| for 1 <= k <= n-1, H*(0) = H*(n) = 0
Walk h_star(const PlaneTree& tree);

Enumeration rightmost_enumeration(const InternalSubtree& internal);

/* ------------------------------------------------------------------ looptrees */

enum class CornerKind : std::uint8_t {
    link,       // two distinct edges of T meeting at a corner
    leaf_loop,  // the corner of a leaf of T
    root_loop,  // the root corner when the root has a single child
};

std::string to_string(CornerKind kind);

/*
 * Corner c_m sits at the contour vertex x_m, between the edge arrived by and the
 * edge left by (cyclically, so c_0 is a root corner). Loop(T) vertex i is the edge
 * of T above vertex i+1.
 */
struct Corner {
    std::int32_t a = 0;
    std::int32_t b = 0;
    CornerKind kind = CornerKind::link;
    PlaneTree::Vertex at = 0;
};

struct Looptree {
    std::size_t vertex_count = 0;
    std::vector<Corner> corners;  // c_0 .. c_{2n-3}; c_0 is the root edge
    std::int32_t root_vertex = 0; // shared endpoint of c_0 and c_1

    std::vector<std::vector<std::int32_t>> adjacency() const;  // self-loops omitted
};

Looptree looptree(const PlaneTree& tree);

struct SpanningTreeExtraction {
    std::vector<std::int32_t> edges;          // corner indices kept in E
    std::vector<std::int32_t> self_loops;     // L
    std::vector<std::int32_t> cycle_closers;  // R
    PlaneTree tree;                           // E rooted and ordered, lex order
    std::vector<std::int32_t> label;          // Loop(T) vertex of each tree vertex
    // 1 when the corner of the edge to the parent sits at the parent's upper vertex
    std::vector<std::uint8_t> right_edge;
};

SpanningTreeExtraction spanning_tree_extract(const Looptree& loop);

/* ------------------------------------------------------------------- oracles */

struct IdentityCheck {
    std::string name;
    bool passed = true;
    std::int64_t first_failure = -1;  // index of the first counterexample
    std::string detail;
    std::uint64_t evaluated = 0;      // number of indexed equalities checked
};

struct OracleReport {
    std::vector<IdentityCheck> checks;
    bool all_passed() const;
    const IdentityCheck* find(const std::string& name) const;
};

// every combinatorial identity linking T, T^÷, rot T, (rot T)°, corot T and Loop(T)
OracleReport lemma_oracles(const PlaneTree& tree);

/* ------------------------------------------------------------------- exports */

std::string to_json(const RotatedTree& rotated);
// "#schema,rotree.looptree.v1" then rows (index, endpoint_a, endpoint_b, kind)
void write_looptree_csv(std::ostream& os, const Looptree& loop);

}  // namespace rotree
