#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rotree/errors.hpp"

namespace rotree {

/*
 * Plane tree stored by lexicographic rank. Vertex k is u_k; vertex 0 is the root.
 * Ulam-Harris words are derived on demand, never stored.
 */
class PlaneTree {
public:
    using Vertex = std::int32_t;
    static constexpr Vertex none = -1;

    PlaneTree();  // the one-vertex tree {∅}

    // degrees in lexicographic order; throws ParseError unless they form a Lukasiewicz code
    static PlaneTree from_degrees(std::span<const int> degrees);
    static PlaneTree from_degrees(std::initializer_list<int> degrees);

    std::size_t size() const { return deg_.size(); }
    int degree(Vertex v) const { return deg_[v]; }
    Vertex parent(Vertex v) const { return parent_[v]; }
    int depth(Vertex v) const { return depth_[v]; }
    // j such that v = parent(v) j in Ulam-Harris notation; 0 for the root
    int child_rank(Vertex v) const { return rank_[v]; }
    std::span<const Vertex> children(Vertex v) const;
    bool is_leaf(Vertex v) const { return deg_[v] == 0; }
    bool is_last_child(Vertex v) const { return v != 0 && rank_[v] == deg_[parent_[v]]; }

    const std::vector<int>& degrees() const { return deg_; }
    const std::vector<Vertex>& parents() const { return parent_; }
    const std::vector<int>& depths() const { return depth_; }

    std::vector<int> ulam_word(Vertex v) const;
    // "∅" for the root; digits concatenated when all ranks are < 10, dot-separated otherwise
    std::string ulam_label(Vertex v) const;
    Vertex find(std::span<const int> word) const;  // none if absent

    int height() const;
    std::size_t leaf_count() const;

    bool operator==(const PlaneTree& other) const { return deg_ == other.deg_; }

private:
    std::vector<int> deg_;
    std::vector<Vertex> parent_;
    std::vector<int> depth_;
    std::vector<int> rank_;
    std::vector<std::int64_t> child_off_;
    std::vector<Vertex> child_;
};

enum class EnumerationKind { lexicographic, mirrored, rightmost };

struct Enumeration {
    std::vector<PlaneTree::Vertex> order;
    EnumerationKind kind = EnumerationKind::lexicographic;

    std::size_t size() const { return order.size(); }
    PlaneTree::Vertex operator[](std::size_t k) const { return order[k]; }
    // position of each vertex in the order
    std::vector<std::int64_t> ranks() const;
};

Enumeration lex_enumeration(const PlaneTree& tree);

// vertex k of the returned tree corresponds to mirrored_enumeration(tree)[k]
PlaneTree mirror(const PlaneTree& tree);

// w_0..w_{n-1}: lex order of the mirror tree pulled back to the vertices of `tree`
Enumeration mirrored_enumeration(const PlaneTree& tree);

// whitespace separated degree sequence
std::string serialize(const PlaneTree& tree);
PlaneTree parse(std::string_view text);

struct TreeMeta {
    std::string law;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> extra;
};

std::string to_json(const PlaneTree& tree, const TreeMeta& meta = {});
PlaneTree tree_from_json(std::string_view text, TreeMeta* meta = nullptr);

std::uint64_t catalan(unsigned k);

// visits every plane tree with n vertices, in decreasing lexicographic order of degree sequences
void for_each_tree(std::size_t n, const std::function<void(const PlaneTree&)>& visit);
std::vector<PlaneTree> all_trees(std::size_t n);

// a path with n vertices
PlaneTree path_tree(std::size_t n);
// root with n-1 leaf children
PlaneTree star_tree(std::size_t n);

}  // namespace rotree
