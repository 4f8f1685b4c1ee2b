#include <algorithm>
#include <cstdint>

#include "rotree/transforms.hpp"

namespace rotree {

using Vertex = PlaneTree::Vertex;

bool OracleReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

const IdentityCheck* OracleReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

IdentityCheck named(const char* name) {
    IdentityCheck c;
    c.name = name;
    return c;
}

void expect(IdentityCheck& c, bool ok, std::int64_t index, const char* what) {
    ++c.evaluated;
    if (ok || !c.passed) return;
    c.passed = false;
    c.first_failure = index;
    c.detail = what;
}

std::uint64_t mix(std::int64_t value) {
    // splitmix64 finalizer; zero terms are left out of the fingerprints
    if (value == 0) return 0;
    auto z = static_cast<std::uint64_t>(value) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct StackSums {
    std::vector<std::int64_t> sum;
    std::vector<std::uint64_t> print;  // commutative fingerprint of the non-zero terms
};

/*
 * For each k < count, sums term(j, succ(j)) over the indices j < k with
 * x(j) = min x on [j, k], kept on a monotone stack; succ(j) is the next such index
 * (or k for the last one), so that min x on [j+1, k] = x(succ(j)).
 */
template <class Term>
StackSums stack_sums(const std::vector<int>& x, std::size_t count, Term term) {
    StackSums out;
    out.sum.resize(count);
    out.print.resize(count);
    std::vector<std::size_t> st;
    std::int64_t inner = 0;
    std::uint64_t inner_print = 0;
    for (std::size_t k = 0; k < count; ++k) {
        if (st.empty()) {
            out.sum[k] = 0;
            out.print[k] = 0;
        } else {
            const std::int64_t t = term(st.back(), k);
            out.sum[k] = inner + t;
            out.print[k] = inner_print + mix(t);
        }
        if (k + 1 >= x.size()) break;
        if (!st.empty()) {
            const std::int64_t t = term(st.back(), k);
            inner += t;
            inner_print += mix(t);
        }
        st.push_back(k);
        while (!st.empty() && x[st.back()] > x[k + 1]) {
            const std::size_t top = st.back();
            st.pop_back();
            if (!st.empty()) {
                const std::int64_t t = term(st.back(), top);
                inner -= t;
                inner_print -= mix(t);
            }
        }
    }
    return out;
}

}  // namespace

OracleReport lemma_oracles(const PlaneTree& tree) {
    const std::size_t n = tree.size();
    if (n < 2) throw DegenerateTreeError("identities need at least two vertices");
    const auto ni = static_cast<std::int64_t>(n);

    const auto H = height_walk(tree).values;
    const auto C = contour_walk(tree).values;
    const auto S = lukasiewicz_walk(tree).values;
    const auto L = left_counts(tree);
    const auto R = right_counts(tree);
    const auto tm = mirror(tree);
    const auto Hm = height_walk(tm).values;
    const auto Sm = lukasiewicz_walk(tm).values;
    const auto w = mirrored_enumeration(tree).order;

    const auto rot = rotate(tree);
    const auto& bin = rot.tree;
    const auto tilde = rot.tilde();
    const auto internal = internal_subtree(rot);
    const auto hs = h_star(tree).values;

    OracleReport report;
    auto& checks = report.checks;

    {
        auto c = named("luka_rot_equals_contour_plus_down_step");
        const auto s = lukasiewicz_walk(bin).values;
        expect(c, s.size() == C.size() + 1, -1, "length of S_rot is not #C + 1");
        for (std::size_t m = 0; m < C.size() && m < s.size(); ++m) {
            expect(c, s[m] == C[m], static_cast<std::int64_t>(m), "S_rot differs from C");
        }
        if (s.size() == C.size() + 1) expect(c, s.back() == -1, ni, "S_rot does not end at -1");
        checks.push_back(c);
    }
    {
        // left child of ũ is the first child of u, right child its next sibling
        auto c = named("rot_structure");
        expect(c, tilde[1] == 0, 1, "ũ_1 is not the root of rot T");
        for (Vertex u = 1; u < static_cast<Vertex>(n); ++u) {
            const auto kids = bin.children(tilde[u]);
            if (kids.size() != 2) {
                expect(c, false, u, "ũ is not internal");
                continue;
            }
            if (tree.degree(u) > 0) {
                expect(c, kids[0] == tilde[tree.children(u)[0]], u, "left child is not the first child");
            } else {
                expect(c, rot.leaf_kind[kids[0]] == LeafKind::left, u, "leaf of T without a left leaf");
            }
            if (!tree.is_last_child(u)) {
                const auto next = tree.children(tree.parent(u))[tree.child_rank(u)];
                expect(c, kids[1] == tilde[next], u, "right child is not the next sibling");
            } else {
                expect(c, rot.leaf_kind[kids[1]] == LeafKind::right, u, "last child without a right leaf");
            }
        }
        checks.push_back(c);
    }
    {
        auto c = named("rot_recursive_agreement");
        // recursion depth equals the height; stay well inside the default stack
        if (tree.height() <= 20000) {
            expect(c, rotate_recursive(tree) == bin, 0, "recursive rot differs from the contour construction");
        }
        checks.push_back(c);
    }
    {
        auto c = named("lex_order_preserved");
        for (std::size_t u = 2; u < n; ++u) {
            expect(c, tilde[u - 1] < tilde[u], static_cast<std::int64_t>(u), "ũ not increasing");
        }
        for (std::size_t i = 0; i < internal.tree.size(); ++i) {
            expect(c, internal.origin[i] == static_cast<Vertex>(i + 1), static_cast<std::int64_t>(i),
                   "i-th internal vertex is not ũ_{i+1}");
        }
        checks.push_back(c);
    }
    {
        auto c = named("rot_height_decomposition");
        for (Vertex u = 1; u < static_cast<Vertex>(n); ++u) {
            expect(c, bin.depth(tilde[u]) == tree.depth(u) - 1 + L[u], u, "|ũ| != |u| - 1 + L(u)");
        }
        checks.push_back(c);
    }
    {
        auto c = named("leaf_counts");
        const std::size_t leaves = tree.leaf_count();
        expect(c, rot.left_leaf_count() == leaves, 0, "left leaves != leaves of T");
        expect(c, rot.right_leaf_count() == n - leaves, 0, "right leaves != internal vertices of T");
        checks.push_back(c);
    }
    {
        auto c = named("height_contour_extraction");
        std::vector<std::int64_t> j(n + 1);
        for (std::size_t k = 0; k <= n; ++k) j[k] = height_to_contour_time(tree, static_cast<std::int64_t>(k));
        for (std::size_t k = 0; k <= n; ++k) {
            expect(c, C[j[k]] == H[k], static_cast<std::int64_t>(k), "C(j(k)) != H(k)");
        }
        for (std::size_t k = 0; k + 2 <= n; ++k) {
            const auto a = j[k], b = j[k + 1];
            const auto ki = static_cast<std::int64_t>(k);
            if (H[k + 1] == H[k] + 1) {
                expect(c, b == a + 1, ki, "climbing step does not advance j by one");
                continue;
            }
            expect(c, H[k + 1] <= H[k] && b > a + 1, ki, "non-climbing step with j(k+1) <= j(k) + 1");
            for (auto m = a; m + 1 <= b - 1; ++m) expect(c, C[m + 1] == C[m] - 1, ki, "C not descending");
            expect(c, C[b - 1] == H[k + 1] - 1, ki, "C(j(k+1) - 1) != H(k+1) - 1");
        }
        for (auto m = j[n - 1]; m < j[n]; ++m) expect(c, C[m + 1] == C[m] - 1, ni - 1, "last interval not descending");
        checks.push_back(c);
    }
    {
        auto c = named("mirror_lukasiewicz_is_left");
        for (std::size_t k = 0; k < n; ++k) {
            const auto ki = static_cast<std::int64_t>(k);
            expect(c, Sm[k] == L[w[k]], ki, "S^÷(k) != L(w_k)");
            expect(c, Hm[k] == tree.depth(w[k]), ki, "H^÷(k) != |w_k|");
        }
        checks.push_back(c);
    }
    {
        auto c = named("luka_right_count");
        for (std::size_t k = 0; k < n; ++k) {
            expect(c, S[k] == R[k], static_cast<std::int64_t>(k), "S(k) != R(u_k)");
        }
        checks.push_back(c);
    }
    {
        auto c = named("h_star_formula");
        for (std::size_t k = 1; k < n; ++k) {
            expect(c, hs[k] == Hm[k] + Sm[k] - 1, static_cast<std::int64_t>(k), "H* != H^÷ + S^÷ - 1");
        }
        checks.push_back(c);
    }
    {
        auto c = named("rightmost_equals_rotated_mirror");
        const auto r = rightmost_enumeration(internal).order;
        expect(c, r.size() == n - 1, -1, "rightmost enumeration has the wrong length");
        for (std::size_t k = 1; k < n && k <= r.size(); ++k) {
            expect(c, r[k - 1] == w[k] - 1, static_cast<std::int64_t>(k), "r_k != w̃_k");
        }
        checks.push_back(c);
    }

    // j(k) = sum_{i<=k} |H*(i) - H*(i-1)|
    std::vector<std::int64_t> jstar(n + 1, 0);
    for (std::size_t k = 1; k <= n; ++k) jstar[k] = jstar[k - 1] + std::abs(hs[k] - hs[k - 1]);
    {
        auto c = named("reversed_contour_from_h_star");
        const auto co = contour_walk(internal.tree).values;  // 2n - 3 entries
        const std::int64_t last = 2 * ni - 4;
        expect(c, static_cast<std::int64_t>(co.size()) == last + 1, -1, "contour of (rot T)° has the wrong length");
        expect(c, jstar[n] == last, ni, "j(n) != 2n - 4");
        if (static_cast<std::int64_t>(co.size()) == last + 1 && jstar[n] == last) {
            for (std::size_t k = 0; k < n; ++k) {
                const int delta = hs[k + 1] - hs[k];
                const int sgn = (delta > 0) - (delta < 0);
                for (auto m = jstar[k]; m <= jstar[k + 1]; ++m) {
                    expect(c, co[last - m] == hs[k] + (m - jstar[k]) * sgn, static_cast<std::int64_t>(k),
                           "reversed contour does not interpolate H*");
                }
            }
        }
        checks.push_back(c);
    }
    {
        auto c = named("upward_crossings");
        std::int64_t up = 0;
        for (std::size_t k = 1; k < n; ++k) {
            up += std::max(0, hs[k] - hs[k - 1]);
            expect(c, up == static_cast<std::int64_t>(k) + Sm[k] - 1, static_cast<std::int64_t>(k),
                   "upward crossings != k + S^÷(k) - 1");
        }
        checks.push_back(c);
    }
    {
        auto c = named("simpler_index_expression");
        for (std::size_t k = 1; k < n; ++k) {
            const auto ki = static_cast<std::int64_t>(k);
            expect(c, jstar[k] == 2 * ki - 1 + Sm[k] - Hm[k], ki, "sum |ΔH*| != 2k - 1 + S^÷ - H^÷");
        }
        checks.push_back(c);
    }
    {
        auto c = named("internal_extraction");
        const auto hr = height_walk(bin).values;            // 2n entries
        const auto hi = height_walk(internal.tree).values;  // n entries
        std::vector<std::int64_t> j(n);
        for (std::size_t k = 0; k < n; ++k) j[k] = 2 * static_cast<std::int64_t>(k) - H[k + 1] + 1;
        expect(c, j[0] == 0, 0, "j(0) != 0");
        expect(c, j[n - 1] == 2 * ni - 1, ni - 1, "j(n-1) != 2n - 1");
        for (std::size_t k = 0; k + 2 <= n; ++k) {
            const auto ki = static_cast<std::int64_t>(k);
            const auto a = j[k], b = j[k + 1];
            expect(c, tilde[k + 1] == a, ki, "ũ_{1+k} != v_{j(k)}");
            expect(c, hr[a] == hi[k], ki, "H_rot(j(k)) != H°(k)");
            if (b == a + 1) {
                expect(c, hr[a + 1] == hi[k + 1], ki, "direct step mismatch");
            } else if (b == a + 2) {
                expect(c, hr[a + 1] == hi[k + 1] && hr[a + 2] == hi[k + 1], ki, "one-leaf step mismatch");
            } else {
                expect(c, b > a + 2, ki, "j not increasing");
                if (b <= a + 2) continue;
                expect(c, hr[a + 1] == hi[k] + 1 && hr[a + 2] == hi[k] + 1, ki, "two leaves below ũ_{1+k} expected");
                for (auto m = a + 2; m < b; ++m) expect(c, hr[m + 1] < hr[m], ki, "H_rot not strictly decreasing");
                expect(c, hr[b] == hi[k + 1], ki, "H_rot(j(k+1)) != H°(k+1)");
            }
        }
        checks.push_back(c);
    }
    {
        auto c = named("corot_mirror_identity");
        const auto co = corotate(tree);
        expect(c, corotate_recursive(tree) == co.tree || tree.height() > 20000, 0,
               "recursive corot differs from (rot T^÷)^÷");
        // in corot T the right child of ũ is its last child, the left child its previous sibling
        std::vector<Vertex> ct(n, PlaneTree::none);
        for (std::size_t v = 0; v < co.origin.size(); ++v) {
            if (co.origin[v] >= 0) ct[co.origin[v]] = static_cast<Vertex>(v);
        }
        for (Vertex u = 1; u < static_cast<Vertex>(n); ++u) {
            const auto kids = co.tree.children(ct[u]);
            if (kids.size() != 2) {
                expect(c, false, u, "ũ is not internal in corot T");
                continue;
            }
            const auto d = tree.degree(u);
            if (d > 0) {
                expect(c, kids[1] == ct[tree.children(u)[d - 1]], u, "right child is not the last child");
            } else {
                expect(c, co.leaf_kind[kids[1]] == LeafKind::right, u, "leaf of T without a right leaf");
            }
            if (tree.child_rank(u) > 1) {
                const auto prev = tree.children(tree.parent(u))[tree.child_rank(u) - 2];
                expect(c, kids[0] == ct[prev], u, "left child is not the previous sibling");
            } else {
                expect(c, co.leaf_kind[kids[0]] == LeafKind::left, u, "first child without a left leaf");
            }
        }
        checks.push_back(c);
    }
    {
        auto c = named("corot_luka_link");
        const auto sc = lukasiewicz_walk(corotate(tree).tree).values;  // 2n entries
        std::vector<std::int64_t> j(n + 1);
        for (std::size_t k = 0; k <= n; ++k) j[k] = 2 * static_cast<std::int64_t>(k) + S[k];
        expect(c, j[0] == 0 && j[n] == 2 * ni - 1, 0, "j range is not [0, 2n-1]");
        for (std::size_t k = 0; k < n; ++k) {
            const auto ki = static_cast<std::int64_t>(k);
            const auto a = j[k], b = j[k + 1];
            expect(c, b > a, ki, "j not increasing");
            if (b <= a) continue;
            expect(c, sc[a] == S[k] && sc[b] == S[k + 1], ki, "S_corot does not meet S at j(k)");
            if (b == a + 1) continue;
            for (auto i = a; i < b; ++i) expect(c, sc[i] == S[k] + (i - a), ki, "S_corot not climbing");
            expect(c, sc[b - 1] == S[k + 1] + 1, ki, "S_corot(j(k+1) - 1) != S(k+1) + 1");
        }
        checks.push_back(c);
    }
    {
        auto c = named("spanning_tree_lemma");
        const auto loop = looptree(tree);
        const auto ext = spanning_tree_extract(loop);
        expect(c, loop.corners.size() == 2 * n - 2, -1, "Loop(T) does not have 2n - 2 edges");
        expect(c, ext.tree == internal.tree, 0, "E is not (rot T)° as a plane tree");
        if (ext.tree == internal.tree) {
            for (std::size_t i = 0; i < n - 1; ++i) {
                const auto ii = static_cast<std::int64_t>(i);
                expect(c, ext.label[i] == internal.origin[i] - 1, ii, "E vertex is not the rotated vertex");
                expect(c, ext.right_edge[i] == internal.right_edge[i], ii, "left/right edge mismatch");
            }
        }
        expect(c, ext.self_loops.size() == rot.left_leaf_count(), 0, "|L| != left leaves");
        expect(c, ext.cycle_closers.size() == rot.right_leaf_count(), 0, "|R| != right leaves");
        checks.push_back(c);
    }

    // appendix identities: E(k) = min{m >= k : S(m) < S(k)}, k' = n - E(k) + H(k)
    std::vector<std::int64_t> kp(n);
    {
        std::vector<std::int64_t> e(n);
        std::vector<std::size_t> st;
        for (std::size_t m = n + 1; m-- > 0;) {
            while (!st.empty() && S[st.back()] >= S[m]) st.pop_back();
            if (m < n) e[m] = static_cast<std::int64_t>(st.back());
            st.push_back(m);
        }
        for (std::size_t k = 0; k < n; ++k) kp[k] = ni - e[k] + H[k];
    }
    {
        auto c = named("descendant_index_permutation");
        std::vector<std::uint8_t> hit(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const auto ki = static_cast<std::int64_t>(k);
            const bool in_range = kp[k] >= 0 && kp[k] < ni;
            expect(c, in_range && !hit[kp[k]], ki, "k' is not a permutation");
            if (!in_range) continue;
            hit[kp[k]] = 1;
            expect(c, w[kp[k]] == static_cast<Vertex>(k), ki, "u_k != w_{k'}");
        }
        checks.push_back(c);
    }
    {
        auto c = named("jump_exchange");
        for (std::size_t k = 0; k < n; ++k) {
            if (kp[k] < 0 || kp[k] >= ni) continue;
            expect(c, Sm[kp[k] + 1] - Sm[kp[k]] == S[k + 1] - S[k], static_cast<std::int64_t>(k),
                   "ΔS^÷(k') != ΔS(k)");
        }
        checks.push_back(c);
    }
    {
        const auto left = stack_sums(S, n, [&](std::size_t j, std::size_t s) {
            return static_cast<std::int64_t>(S[j + 1]) - S[s];
        });
        const auto right = stack_sums(Sm, n, [&](std::size_t j, std::size_t s) {
            return static_cast<std::int64_t>(Sm[s]) - Sm[j];
        });
        auto cl = named("left_from_lukasiewicz");
        auto cr = named("right_from_lukasiewicz");
        auto ct = named("left_right_terms_match");
        for (std::size_t k = 0; k < n; ++k) {
            const auto ki = static_cast<std::int64_t>(k);
            if (kp[k] < 0 || kp[k] >= ni) continue;
            const auto k2 = static_cast<std::size_t>(kp[k]);
            expect(cl, left.sum[k] == Sm[k2] && left.sum[k] == L[k], ki, "left sum != S^÷(k') = L(u_k)");
            expect(cr, right.sum[k2] == Sm[k2], ki, "right sum != S^÷(k')");
            expect(ct, left.print[k] == right.print[k2], ki, "non-zero terms differ");
        }
        checks.push_back(cl);
        checks.push_back(cr);
        checks.push_back(ct);
    }
    return report;
}

}  // namespace rotree
