#include "rotree/tree_core.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "json.hpp"

namespace rotree {

PlaneTree::PlaneTree() : deg_{0}, parent_{none}, depth_{0}, rank_{0}, child_off_{0, 0} {}

PlaneTree PlaneTree::from_degrees(std::initializer_list<int> degrees) {
    std::vector<int> d(degrees);
    return from_degrees(std::span<const int>(d));
}

PlaneTree PlaneTree::from_degrees(std::span<const int> degrees) {
    const std::size_t n = degrees.size();
    if (n == 0) throw ParseError("empty degree sequence");
    if (n > static_cast<std::size_t>(INT32_MAX)) throw ParseError("tree too large");

    // the Lukasiewicz walk must stay >= 0 until its final step to -1
    std::int64_t s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (degrees[k] < 0) throw ParseError("negative degree at position " + std::to_string(k));
        s += degrees[k] - 1;
        if (s < 0 && k + 1 < n) {
            throw ParseError("Lukasiewicz walk hits -1 at step " + std::to_string(k + 1) + " with " +
                             std::to_string(n - k - 1) + " vertices unplaced");
        }
    }
    if (s != -1) {
        throw ParseError("degree sequence leaves " + std::to_string(s + 1) + " open child slots");
    }

    PlaneTree t;
    t.deg_.assign(degrees.begin(), degrees.end());
    t.parent_.assign(n, none);
    t.depth_.assign(n, 0);
    t.rank_.assign(n, 0);
    t.child_off_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) t.child_off_[v + 1] = t.child_off_[v] + t.deg_[v];
    t.child_.assign(n - 1, none);

    std::vector<Vertex> open;  // vertices with unassigned child slots
    std::vector<int> filled(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<Vertex>(i);
        if (v > 0) {
            const Vertex p = open.back();
            t.parent_[v] = p;
            t.depth_[v] = t.depth_[p] + 1;
            t.child_[t.child_off_[p] + filled[p]] = v;
            t.rank_[v] = ++filled[p];
            if (filled[p] == t.deg_[p]) open.pop_back();
        }
        if (t.deg_[v] > 0) open.push_back(v);
    }
    return t;
}

std::span<const PlaneTree::Vertex> PlaneTree::children(Vertex v) const {
    return {child_.data() + child_off_[v], static_cast<std::size_t>(deg_[v])};
}

std::vector<int> PlaneTree::ulam_word(Vertex v) const {
    std::vector<int> w;
    for (Vertex x = v; x != 0; x = parent_[x]) w.push_back(rank_[x]);
    std::reverse(w.begin(), w.end());
    return w;
}

std::string PlaneTree::ulam_label(Vertex v) const {
    const auto w = ulam_word(v);
    if (w.empty()) return "∅";
    const bool short_ranks = std::all_of(w.begin(), w.end(), [](int j) { return j < 10; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!short_ranks && i > 0) out += '.';
        out += std::to_string(w[i]);
    }
    return out;
}

PlaneTree::Vertex PlaneTree::find(std::span<const int> word) const {
    Vertex v = 0;
    for (int j : word) {
        if (j < 1 || j > deg_[v]) return none;
        v = children(v)[j - 1];
    }
    return v;
}

int PlaneTree::height() const { return *std::max_element(depth_.begin(), depth_.end()); }

std::size_t PlaneTree::leaf_count() const {
    return static_cast<std::size_t>(std::count(deg_.begin(), deg_.end(), 0));
}

std::vector<std::int64_t> Enumeration::ranks() const {
    std::vector<std::int64_t> r(order.size(), -1);
    for (std::size_t k = 0; k < order.size(); ++k) r[order[k]] = static_cast<std::int64_t>(k);
    return r;
}

Enumeration lex_enumeration(const PlaneTree& tree) {
    Enumeration e;
    e.kind = EnumerationKind::lexicographic;
    e.order.resize(tree.size());
    for (std::size_t k = 0; k < tree.size(); ++k) e.order[k] = static_cast<PlaneTree::Vertex>(k);
    return e;
}

Enumeration mirrored_enumeration(const PlaneTree& tree) {
    // preorder visiting children right to left
    Enumeration e;
    e.kind = EnumerationKind::mirrored;
    e.order.reserve(tree.size());
    std::vector<PlaneTree::Vertex> stack{0};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        e.order.push_back(v);
        for (auto c : tree.children(v)) stack.push_back(c);
    }
    return e;
}

PlaneTree mirror(const PlaneTree& tree) {
    const auto w = mirrored_enumeration(tree);
    std::vector<int> d(tree.size());
    for (std::size_t k = 0; k < tree.size(); ++k) d[k] = tree.degree(w.order[k]);
    return PlaneTree::from_degrees(std::span<const int>(d));
}

std::string serialize(const PlaneTree& tree) {
    std::string out;
    out.reserve(tree.size() * 2);
    for (std::size_t k = 0; k < tree.size(); ++k) {
        if (k) out += ' ';
        out += std::to_string(tree.degree(static_cast<PlaneTree::Vertex>(k)));
    }
    return out;
}

PlaneTree parse(std::string_view text) {
    std::vector<int> d;
    const char* p = text.data();
    const char* end = p + text.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\n' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
        if (p == end) break;
        int value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc()) {
            throw ParseError("bad token at offset " + std::to_string(p - text.data()));
        }
        d.push_back(value);
        p = next;
    }
    return PlaneTree::from_degrees(std::span<const int>(d));
}

std::string to_json(const PlaneTree& tree, const TreeMeta& meta) {
    nlohmann::json j;
    j["n"] = tree.size();
    j["degrees"] = tree.degrees();
    nlohmann::json m = nlohmann::json::object();
    if (!meta.law.empty()) m["law"] = meta.law;
    if (meta.seed) m["seed"] = *meta.seed;
    for (const auto& [k, v] : meta.extra) m[k] = v;
    j["meta"] = m;
    return j.dump();
}

PlaneTree tree_from_json(std::string_view text, TreeMeta* meta) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("degrees") || !j["degrees"].is_array()) {
        throw ParseError("tree JSON needs a \"degrees\" array");
    }
    std::vector<int> d;
    d.reserve(j["degrees"].size());
    for (const auto& x : j["degrees"]) {
        if (!x.is_number_integer()) throw ParseError("non-integer degree");
        d.push_back(x.get<int>());
    }
    auto tree = PlaneTree::from_degrees(std::span<const int>(d));
    if (j.contains("n") && j["n"].get<std::size_t>() != tree.size()) {
        throw ParseError("\"n\" disagrees with the degree sequence length");
    }
    if (meta) {
        *meta = TreeMeta{};
        if (j.contains("meta") && j["meta"].is_object()) {
            for (const auto& [k, v] : j["meta"].items()) {
                if (k == "law" && v.is_string()) {
                    meta->law = v.get<std::string>();
                } else if (k == "seed" && v.is_number_unsigned()) {
                    meta->seed = v.get<std::uint64_t>();
                } else {
                    meta->extra[k] = v.is_string() ? v.get<std::string>() : v.dump();
                }
            }
        }
    }
    return tree;
}

std::uint64_t catalan(unsigned k) {
    std::uint64_t c = 1;
    for (unsigned i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

void for_each_tree(std::size_t n, const std::function<void(const PlaneTree&)>& visit) {
    if (n == 0) return;
    std::vector<int> d(n, 0);
    // walk value before position k is s; position k may take degrees keeping the walk feasible
    std::vector<int> walk(n + 1, 0);
    std::size_t k = 0;
    d[0] = static_cast<int>(n);  // incremented down on first visit
    auto max_degree = [&](std::size_t pos) {
        // after this step the walk must be able to return to -1 in the remaining steps
        const auto remaining = static_cast<int>(n - pos - 1);
        return remaining - walk[pos];
    };
    auto min_degree = [&](std::size_t pos) {
        // the walk must stay >= 0 before the end and hit -1 exactly at the end
        return pos + 1 < n ? std::max(0, 1 - walk[pos]) : 0;
    };
    d[0] = max_degree(0) + 1;
    while (true) {
        --d[k];
        if (d[k] < min_degree(k)) {
            if (k == 0) return;
            --k;
            continue;
        }
        walk[k + 1] = walk[k] + d[k] - 1;
        if (k + 1 == n) {
            if (walk[n] == -1) visit(PlaneTree::from_degrees(std::span<const int>(d)));
            continue;
        }
        ++k;
        d[k] = max_degree(k) + 1;
    }
}

std::vector<PlaneTree> all_trees(std::size_t n) {
    std::vector<PlaneTree> out;
    for_each_tree(n, [&](const PlaneTree& t) { out.push_back(t); });
    return out;
}

PlaneTree path_tree(std::size_t n) {
    std::vector<int> d(n, 1);
    d[n - 1] = 0;
    return PlaneTree::from_degrees(std::span<const int>(d));
}

PlaneTree star_tree(std::size_t n) {
    std::vector<int> d(n, 0);
    d[0] = static_cast<int>(n - 1);
    return PlaneTree::from_degrees(std::span<const int>(d));
}

}  // namespace rotree
