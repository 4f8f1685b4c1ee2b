#include <algorithm>
#include <numeric>
#include <ostream>

#include "rotree/transforms.hpp"

namespace rotree {

using Vertex = PlaneTree::Vertex;

std::string to_string(CornerKind kind) {
    switch (kind) {
        case CornerKind::link: return "link";
        case CornerKind::leaf_loop: return "leaf_loop";
        case CornerKind::root_loop: return "root_loop";
    }
    return "link";
}

Looptree looptree(const PlaneTree& tree) {
    const std::size_t n = tree.size();
    if (n < 2) throw DegenerateTreeError("Loop({∅}) has no edge");
    const auto x = contour_vertices(tree);
    const std::size_t steps = x.size() - 1;  // 2n - 2
    // e[m] for m = 1..2n-2: loop vertex of the m-th contour edge; e[0] = e[2n-2]
    std::vector<std::int32_t> e(steps + 1);
    for (std::size_t m = 1; m <= steps; ++m) {
        const Vertex child = tree.depth(x[m]) > tree.depth(x[m - 1]) ? x[m] : x[m - 1];
        e[m] = child - 1;
    }
    e[0] = e[steps];

    Looptree loop;
    loop.vertex_count = n - 1;
    loop.corners.resize(steps);
    for (std::size_t m = 0; m < steps; ++m) {
        Corner& c = loop.corners[m];
        c.a = e[m];
        c.b = e[m + 1];
        c.at = x[m];
        if (c.a != c.b) {
            c.kind = CornerKind::link;
        } else {
            c.kind = m == 0 ? CornerKind::root_loop : CornerKind::leaf_loop;
        }
    }
    loop.root_vertex = e[1];
    return loop;
}

std::vector<std::vector<std::int32_t>> Looptree::adjacency() const {
    std::vector<std::vector<std::int32_t>> adj(vertex_count);
    for (const auto& c : corners) {
        if (c.a == c.b) continue;
        adj[c.a].push_back(c.b);
        adj[c.b].push_back(c.a);
    }
    return adj;
}

namespace {

struct UnionFind {
    std::vector<std::int32_t> up;
    explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    std::int32_t find(std::int32_t v) {
        while (up[v] != v) {
            up[v] = up[up[v]];
            v = up[v];
        }
        return v;
    }
    bool unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        up[a] = b;
        return true;
    }
};

}  // namespace

SpanningTreeExtraction spanning_tree_extract(const Looptree& loop) {
    const std::size_t m = loop.corners.size();
    const std::size_t nv = loop.vertex_count;
    SpanningTreeExtraction out;
    UnionFind uf(nv);
    // corners c_1, ..., c_{2n-3}, then c_{2n-2} = c_0
    auto order = [m](std::size_t i) { return i + 1 < m ? static_cast<std::int32_t>(i + 1) : 0; };
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> adj(nv);  // (rank, neighbour)
    for (std::size_t i = 0; i < m; ++i) {
        const std::int32_t k = order(i);
        const Corner& c = loop.corners[k];
        if (c.kind == CornerKind::leaf_loop) {
            out.self_loops.push_back(k);
        } else if (c.kind == CornerKind::root_loop || !uf.unite(c.a, c.b)) {
            out.cycle_closers.push_back(k);
        } else {
            out.edges.push_back(k);
            adj[c.a].emplace_back(static_cast<std::int32_t>(i), c.b);
            adj[c.b].emplace_back(static_cast<std::int32_t>(i), c.a);
        }
    }
    if (out.edges.size() + 1 != nv) throw Error("spanning extraction did not produce a spanning tree");

    // children ordered by the processing rank of their corner; iterative preorder
    std::vector<std::int32_t> up(nv, -1);
    std::vector<int> deg;
    deg.reserve(nv);
    out.label.reserve(nv);
    out.right_edge.reserve(nv);
    struct Frame {
        std::int32_t v;
        std::uint8_t right;
    };
    std::vector<Frame> stack{{loop.root_vertex, 0}};
    up[loop.root_vertex] = loop.root_vertex;
    std::vector<std::pair<std::int32_t, std::int32_t>> kids;
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        out.label.push_back(f.v);
        out.right_edge.push_back(f.right);
        kids.clear();
        for (const auto& [rank, w] : adj[f.v]) {
            if (up[w] == -1) kids.emplace_back(rank, w);
        }
        std::sort(kids.begin(), kids.end());
        deg.push_back(static_cast<int>(kids.size()));
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            const std::int32_t w = it->second;
            up[w] = f.v;
            const Corner& c = loop.corners[order(static_cast<std::size_t>(it->first))];
            // a left edge has its corner at the lower end of the parent's edge
            const std::uint8_t right = c.at != f.v + 1 ? 1 : 0;
            stack.push_back({w, right});
        }
    }
    out.tree = PlaneTree::from_degrees(std::span<const int>(deg));
    return out;
}

void write_looptree_csv(std::ostream& os, const Looptree& loop) {
    os << "#schema,rotree.looptree.v1\n";
    os << "index,endpoint_a,endpoint_b,kind\n";
    for (std::size_t m = 0; m < loop.corners.size(); ++m) {
        const auto& c = loop.corners[m];
        os << m << ',' << c.a << ',' << c.b << ',' << to_string(c.kind) << '\n';
    }
}

}  // namespace rotree
