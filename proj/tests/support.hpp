#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rotree/sampler.hpp"
#include "rotree/tree_core.hpp"

/*
 * Test helpers. The naive structures below rebuild trees from degree sequences
 * with plain recursion and pointer-free child lists, so they share no code with
 * the library and serve as independent oracles on small trees.
 */
namespace testing_support {

inline rotree::PlaneTree seven_tree() { return rotree::PlaneTree::from_degrees({3, 2, 0, 0, 0, 1, 0}); }

// root with children 1 and 2; 1 has 11 (two leaves), 12 and 13 (one leaf); 2 has two leaves
inline rotree::PlaneTree eleven_tree() { return rotree::PlaneTree::from_degrees({2, 3, 2, 0, 0, 0, 1, 0, 2, 0, 0}); }

struct NaiveTree {
    std::vector<std::vector<int>> kids;  // kids[v] in birth order, v = lex rank
    std::vector<int> depth;
    std::vector<std::string> word;
};

inline NaiveTree naive(const std::vector<int>& degrees) {
    NaiveTree t;
    t.kids.resize(degrees.size());
    t.depth.resize(degrees.size());
    t.word.resize(degrees.size());
    std::size_t next = 0;
    std::function<void(int, int, std::string)> grow = [&](int v, int d, std::string w) {
        t.depth[v] = d;
        t.word[v] = w;
        for (int j = 1; j <= degrees[v]; ++j) {
            const int c = static_cast<int>(++next);
            t.kids[v].push_back(c);
            grow(c, d + 1, w + std::to_string(j));
        }
    };
    grow(0, 0, "");
    return t;
}

inline std::vector<int> naive_contour(const NaiveTree& t) {
    std::vector<int> c{0};
    std::function<void(int)> walk = [&](int v) {
        for (int k : t.kids[v]) {
            c.push_back(t.depth[k]);
            walk(k);
            c.push_back(t.depth[v]);
        }
    };
    walk(0);
    return c;
}

// degrees of the tree with every sibling order reversed
inline std::vector<int> naive_mirror_degrees(const NaiveTree& t) {
    std::vector<int> out;
    std::function<void(int)> walk = [&](int v) {
        out.push_back(static_cast<int>(t.kids[v].size()));
        for (auto it = t.kids[v].rbegin(); it != t.kids[v].rend(); ++it) walk(*it);
    };
    walk(0);
    return out;
}

inline int naive_distance(const rotree::PlaneTree& tree, int a, int b) {
    int d = 0;
    while (a != b) {
        if (tree.depth(a) >= tree.depth(b)) {
            a = tree.parent(a);
        } else {
            b = tree.parent(b);
        }
        ++d;
    }
    return d;
}

/*
 * Conditional law of a BGW tree given n vertices by brute force: the weight of
 * a shape is the product of pmf values over its degrees.
 */
inline std::map<std::vector<int>, double> conditional_law(const rotree::OffspringLaw& law, std::size_t n) {
    std::map<std::vector<int>, double> out;
    double total = 0.0;
    rotree::for_each_tree(n, [&](const rotree::PlaneTree& t) {
        double w = 1.0;
        for (int d : t.degrees()) w *= law.pmf(d);
        if (w > 0.0) {
            out[t.degrees()] = w;
            total += w;
        }
    });
    for (auto& [k, v] : out) v /= total;
    return out;
}

inline std::vector<rotree::OffspringLaw> all_laws() {
    return {rotree::OffspringLaw::geometric(), rotree::OffspringLaw::binary(), rotree::OffspringLaw::poisson(),
            rotree::make_stable_law(1.5)};
}

}  // namespace testing_support
