#include "rotree/transforms.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"

namespace rotree {

using Vertex = PlaneTree::Vertex;

std::string to_string(LeafKind kind) {
    switch (kind) {
        case LeafKind::internal: return "internal";
        case LeafKind::left: return "left";
        case LeafKind::right: return "right";
        case LeafKind::root: return "root";
    }
    return "internal";
}

std::size_t RotatedTree::left_leaf_count() const {
    return static_cast<std::size_t>(std::count(leaf_kind.begin(), leaf_kind.end(), LeafKind::left));
}

std::size_t RotatedTree::right_leaf_count() const {
    return static_cast<std::size_t>(std::count(leaf_kind.begin(), leaf_kind.end(), LeafKind::right));
}

std::vector<Vertex> RotatedTree::tilde() const {
    const std::size_t n = (tree.size() + 1) / 2;
    std::vector<Vertex> t(n, PlaneTree::none);
    for (std::size_t v = 0; v < origin.size(); ++v) {
        if (origin[v] >= 0) t[origin[v]] = static_cast<Vertex>(v);
    }
    return t;
}

static std::vector<LeafKind> classify_leaves(const PlaneTree& binary) {
    std::vector<LeafKind> kind(binary.size(), LeafKind::internal);
    for (std::size_t i = 0; i < binary.size(); ++i) {
        const auto v = static_cast<Vertex>(i);
        if (!binary.is_leaf(v)) continue;
        if (v == 0) {
            kind[i] = LeafKind::root;
        } else {
            kind[i] = binary.child_rank(v) == 1 ? LeafKind::left : LeafKind::right;
        }
    }
    return kind;
}

RotatedTree rotate(const PlaneTree& tree) {
    const auto c = contour_walk(tree);
    const std::size_t m = c.values.size();  // 2n - 1 vertices in rot T
    std::vector<int> deg(m, 0);
    RotatedTree r;
    r.origin.assign(m, PlaneTree::none);
    Vertex next = 0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        if (c.values[j + 1] > c.values[j]) {
            deg[j] = 2;
            r.origin[j] = ++next;  // the i-th up-step enters u_i
        }
    }
    r.tree = PlaneTree::from_degrees(std::span<const int>(deg));
    r.leaf_kind = classify_leaves(r.tree);
    return r;
}

PlaneTree rotate_recursive(const PlaneTree& tree) {
    // rot T: a spine v_1..v_{k+1} of right children, rot T_i grafted left of v_i
    std::vector<int> deg;
    deg.reserve(2 * tree.size() - 1);
    std::function<void(Vertex)> rot = [&](Vertex v) {
        for (Vertex c : tree.children(v)) {
            deg.push_back(2);
            rot(c);
        }
        deg.push_back(0);
    };
    rot(0);
    return PlaneTree::from_degrees(std::span<const int>(deg));
}

PlaneTree corotate_recursive(const PlaneTree& tree) {
    // corot T: a spine v_1..v_{k+1} of left children, corot T_{k+1-i} grafted right of v_i
    std::vector<int> deg;
    deg.reserve(2 * tree.size() - 1);
    std::function<void(Vertex)> corot = [&](Vertex v) {
        const auto kids = tree.children(v);
        for (std::size_t i = 0; i < kids.size(); ++i) deg.push_back(2);
        deg.push_back(0);
        for (Vertex c : kids) corot(c);
    };
    corot(0);
    return PlaneTree::from_degrees(std::span<const int>(deg));
}

RotatedTree mirror(const RotatedTree& rotated) {
    const auto w = mirrored_enumeration(rotated.tree).order;
    RotatedTree out;
    out.tree = mirror(rotated.tree);
    out.origin.resize(w.size());
    out.leaf_kind.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        out.origin[k] = rotated.origin[w[k]];
        LeafKind kind = rotated.leaf_kind[w[k]];
        if (kind == LeafKind::left) {
            kind = LeafKind::right;
        } else if (kind == LeafKind::right) {
            kind = LeafKind::left;
        }
        out.leaf_kind[k] = kind;
    }
    return out;
}

RotatedTree corotate(const PlaneTree& tree) {
    // corot T = (rot T^÷)^÷
    const auto w = mirrored_enumeration(tree).order;
    auto r = rotate(mirror(tree));
    for (auto& o : r.origin) {
        if (o >= 0) o = w[o];
    }
    return mirror(r);
}

Vertex InternalSubtree::left_child(Vertex v) const {
    for (Vertex c : tree.children(v)) {
        if (!right_edge[c]) return c;
    }
    return PlaneTree::none;
}

Vertex InternalSubtree::right_child(Vertex v) const {
    for (Vertex c : tree.children(v)) {
        if (right_edge[c]) return c;
    }
    return PlaneTree::none;
}

InternalSubtree internal_subtree(const RotatedTree& rotated) {
    const auto& bin = rotated.tree;
    if (bin.size() == 1) throw DegenerateTreeError("rot{∅} has no internal vertex");
    std::vector<Vertex> index(bin.size(), PlaneTree::none);
    Vertex count = 0;
    for (std::size_t v = 0; v < bin.size(); ++v) {
        if (!bin.is_leaf(static_cast<Vertex>(v))) index[v] = count++;
    }
    // internal vertices form a rooted subtree, so restricting lex order keeps it lexicographic
    std::vector<int> deg(count, 0);
    InternalSubtree out;
    out.right_edge.assign(count, 0);
    out.origin.assign(count, PlaneTree::none);
    for (std::size_t v = 0; v < bin.size(); ++v) {
        const Vertex i = index[v];
        if (i < 0) continue;
        out.origin[i] = rotated.origin[v];
        if (v == 0) continue;
        ++deg[index[bin.parent(static_cast<Vertex>(v))]];
        out.right_edge[i] = bin.child_rank(static_cast<Vertex>(v)) == 2 ? 1 : 0;
    }
    out.tree = PlaneTree::from_degrees(std::span<const int>(deg));
    return out;
}

Walk h_star(const PlaneTree& tree) {
    const std::size_t n = tree.size();
    if (n < 2) throw DegenerateTreeError("H* needs at least two vertices");
    const auto rotated = rotate(tree);
    const auto internal = internal_subtree(rotated);
    const auto w = mirrored_enumeration(tree).order;
    // internal vertex i is ũ_{i+1}, so |w̃_k| is the depth of internal vertex w_k - 1
    Walk h;
    h.kind = WalkKind::custom;
    h.values.assign(n + 1, 0);
    for (std::size_t k = 1; k < n; ++k) h.values[k] = internal.tree.depth(w[k] - 1);
    return h;
}

Enumeration rightmost_enumeration(const InternalSubtree& internal) {
    const auto& t = internal.tree;
    const std::size_t m = t.size();
    Enumeration e;
    e.kind = EnumerationKind::rightmost;
    e.order.reserve(m);
    std::vector<std::uint8_t> seen(m, 0);
    auto slide_right = [&](Vertex v) {
        for (Vertex r = internal.right_child(v); r != PlaneTree::none; r = internal.right_child(v)) v = r;
        return v;
    };
    Vertex cur = slide_right(0);
    seen[cur] = 1;
    e.order.push_back(cur);
    while (e.order.size() < m) {
        const Vertex l = internal.left_child(cur);
        if (l != PlaneTree::none) {
            cur = slide_right(l);
        } else {
            do {
                if (cur == 0) throw Error("rightmost enumeration climbed past the root");
                cur = t.parent(cur);
            } while (seen[cur]);
        }
        if (seen[cur]) throw Error("rightmost enumeration revisited a vertex");
        seen[cur] = 1;
        e.order.push_back(cur);
    }
    return e;
}

std::string to_json(const RotatedTree& rotated) {
    nlohmann::json j;
    j["n"] = rotated.tree.size();
    j["degrees"] = rotated.tree.degrees();
    j["origin"] = rotated.origin;
    std::vector<std::string> kinds;
    kinds.reserve(rotated.leaf_kind.size());
    for (auto k : rotated.leaf_kind) kinds.push_back(to_string(k));
    j["leaf_kind"] = kinds;
    j["meta"] = nlohmann::json::object();
    return j.dump();
}

}  // namespace rotree
