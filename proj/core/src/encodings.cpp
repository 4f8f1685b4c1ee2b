#include "rotree/encodings.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace rotree {

using Vertex = PlaneTree::Vertex;

std::string to_string(WalkKind kind) {
    switch (kind) {
        case WalkKind::height: return "height";
        case WalkKind::contour: return "contour";
        case WalkKind::lukasiewicz: return "lukasiewicz";
        case WalkKind::custom: return "custom";
    }
    return "custom";
}

WalkKind walk_kind_from_string(const std::string& name) {
    if (name == "height") return WalkKind::height;
    if (name == "contour") return WalkKind::contour;
    if (name == "lukasiewicz" || name == "luka") return WalkKind::lukasiewicz;
    if (name == "custom") return WalkKind::custom;
    throw ParseError("unknown walk kind '" + name + "'");
}

int Walk::max() const { return *std::max_element(values.begin(), values.end()); }
int Walk::min() const { return *std::min_element(values.begin(), values.end()); }

Walk height_walk(const PlaneTree& tree) {
    Walk w{tree.depths(), WalkKind::height};
    w.values.push_back(0);
    return w;
}

std::vector<Vertex> contour_vertices(const PlaneTree& tree) {
    const auto n = static_cast<Vertex>(tree.size());
    std::vector<Vertex> x;
    x.reserve(2 * tree.size() - 1);
    x.push_back(0);
    Vertex cur = 0;
    for (Vertex k = 1; k < n; ++k) {
        const Vertex p = tree.parent(k);
        while (cur != p) {
            cur = tree.parent(cur);
            x.push_back(cur);
        }
        cur = k;
        x.push_back(cur);
    }
    while (cur != 0) {
        cur = tree.parent(cur);
        x.push_back(cur);
    }
    return x;
}

Walk contour_walk(const PlaneTree& tree) {
    const auto x = contour_vertices(tree);
    Walk w;
    w.kind = WalkKind::contour;
    w.values.resize(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) w.values[m] = tree.depth(x[m]);
    return w;
}

Walk lukasiewicz_walk(const PlaneTree& tree) {
    Walk w;
    w.kind = WalkKind::lukasiewicz;
    w.values.resize(tree.size() + 1);
    w.values[0] = 0;
    for (std::size_t k = 0; k < tree.size(); ++k) {
        w.values[k + 1] = w.values[k] + tree.degree(static_cast<Vertex>(k)) - 1;
    }
    return w;
}

int left_count(const PlaneTree& tree, Vertex u) {
    int l = 0;
    for (Vertex v = u; v != 0; v = tree.parent(v)) l += tree.child_rank(v) - 1;
    return l;
}

int right_count(const PlaneTree& tree, Vertex u) {
    int r = 0;
    for (Vertex v = u; v != 0; v = tree.parent(v)) r += tree.degree(tree.parent(v)) - tree.child_rank(v);
    return r;
}

std::vector<int> left_counts(const PlaneTree& tree) {
    std::vector<int> l(tree.size(), 0);
    for (Vertex v = 1; v < static_cast<Vertex>(tree.size()); ++v) {
        l[v] = l[tree.parent(v)] + tree.child_rank(v) - 1;
    }
    return l;
}

std::vector<int> right_counts(const PlaneTree& tree) {
    std::vector<int> r(tree.size(), 0);
    for (Vertex v = 1; v < static_cast<Vertex>(tree.size()); ++v) {
        const Vertex p = tree.parent(v);
        r[v] = r[p] + tree.degree(p) - tree.child_rank(v);
    }
    return r;
}

std::int64_t height_to_contour_time(const PlaneTree& tree, std::int64_t k) {
    const auto n = static_cast<std::int64_t>(tree.size());
    if (k < 0 || k > n) {
        throw InvalidArgument("height_to_contour_time: k=" + std::to_string(k) + " outside [0," +
                              std::to_string(n) + "]");
    }
    if (k == n) return 2 * n - 2;
    return 2 * k - tree.depth(static_cast<Vertex>(k));
}

void validate(const Walk& walk) {
    const auto& v = walk.values;
    if (v.empty()) throw ParseError("empty walk");
    const std::size_t m = v.size() - 1;
    switch (walk.kind) {
        case WalkKind::height:
            if (m < 1) throw ParseError("height walk needs at least two entries");
            if (v[0] != 0 || v[m] != 0) throw ParseError("height walk must start and end at 0");
            for (std::size_t k = 1; k < m; ++k) {
                if (v[k] < 1) throw ParseError("height walk vanishes at index " + std::to_string(k));
                if (v[k] > v[k - 1] + 1) {
                    throw ParseError("height walk climbs by more than 1 at index " + std::to_string(k));
                }
            }
            break;
        case WalkKind::contour:
            if (m % 2 != 0) throw ParseError("contour walk has an odd number of steps");
            if (v[0] != 0 || v[m] != 0) throw ParseError("contour walk must start and end at 0");
            for (std::size_t k = 1; k <= m; ++k) {
                if (std::abs(v[k] - v[k - 1]) != 1) {
                    throw ParseError("contour step at index " + std::to_string(k) + " is not +-1");
                }
                if (v[k] < 0) throw ParseError("contour walk negative at index " + std::to_string(k));
            }
            break;
        case WalkKind::lukasiewicz:
            if (m < 1) throw ParseError("Lukasiewicz walk needs at least two entries");
            if (v[0] != 0) throw ParseError("Lukasiewicz walk must start at 0");
            for (std::size_t k = 1; k <= m; ++k) {
                if (v[k] - v[k - 1] < -1) {
                    throw ParseError("Lukasiewicz step below -1 at index " + std::to_string(k));
                }
                if (k < m && v[k] < 0) {
                    throw ParseError("Lukasiewicz walk hits -1 early at index " + std::to_string(k));
                }
            }
            if (v[m] != -1) throw ParseError("Lukasiewicz walk must end at -1");
            break;
        case WalkKind::custom:
            break;
    }
}

PlaneTree tree_from_height(const Walk& walk) {
    Walk w = walk;
    w.kind = WalkKind::height;
    validate(w);
    const std::size_t n = w.values.size() - 1;
    std::vector<int> deg(n, 0);
    std::vector<Vertex> stack;  // stack[h] = last vertex seen at depth h
    stack.reserve(n);
    stack.push_back(0);
    for (std::size_t k = 1; k < n; ++k) {
        const auto h = static_cast<std::size_t>(w.values[k]);
        stack.resize(h);
        ++deg[stack.back()];
        stack.push_back(static_cast<Vertex>(k));
    }
    return PlaneTree::from_degrees(std::span<const int>(deg));
}

PlaneTree tree_from_contour(const Walk& walk) {
    Walk w = walk;
    w.kind = WalkKind::contour;
    validate(w);
    Walk h;
    h.kind = WalkKind::height;
    h.values.push_back(0);
    for (std::size_t m = 1; m < w.values.size(); ++m) {
        if (w.values[m] > w.values[m - 1]) h.values.push_back(w.values[m]);
    }
    h.values.push_back(0);
    return tree_from_height(h);
}

PlaneTree tree_from_lukasiewicz(const Walk& walk) {
    Walk w = walk;
    w.kind = WalkKind::lukasiewicz;
    validate(w);
    std::vector<int> deg(w.values.size() - 1);
    for (std::size_t k = 0; k + 1 < w.values.size(); ++k) deg[k] = w.values[k + 1] - w.values[k] + 1;
    return PlaneTree::from_degrees(std::span<const int>(deg));
}

Walk concat(const Walk& a, const Walk& b) {
    Walk out = a;
    out.kind = WalkKind::custom;
    if (b.values.empty()) return out;
    const int shift = a.values.back() - b.values.front();
    for (std::size_t k = 1; k < b.values.size(); ++k) out.values.push_back(b.values[k] + shift);
    return out;
}

Walk reversed(const Walk& walk) {
    Walk out = walk;
    out.kind = WalkKind::custom;
    std::reverse(out.values.begin(), out.values.end());
    return out;
}

TimeScaledFn::TimeScaledFn(Walk walk, Interpolation interpolation, double scale)
    : walk_(std::move(walk)), interp_(interpolation), scale_(scale) {
    if (walk_.values.empty()) throw InvalidArgument("time-scaled function of an empty walk");
}

GridPoint TimeScaledFn::locate(double t) const {
    const std::int64_t p = steps();
    if (p == 0 || t <= 0.0) return {0, 0.0};
    if (t >= 1.0) return {p, 0.0};
    const double x = t * static_cast<double>(p);
    auto idx = static_cast<std::int64_t>(std::floor(x));
    double frac = x - static_cast<double>(idx);
    if (idx >= p) return {p, 0.0};
    return {idx, frac};
}

double TimeScaledFn::at(GridPoint g) const {
    const auto& v = walk_.values;
    if (g.frac == 0.0 || interp_ == Interpolation::constant || g.index >= steps()) {
        return scale_ * v[g.index];
    }
    const double a = v[g.index];
    const double b = v[g.index + 1];
    return scale_ * (a + g.frac * (b - a));
}

double TimeScaledFn::at_rational(std::int64_t num, std::int64_t den) const {
    if (den <= 0) throw InvalidArgument("non-positive denominator");
    const std::int64_t p = steps();
    if (num <= 0) return at({0, 0.0});
    if (num >= den) return at({p, 0.0});
    const std::int64_t scaled = num * p;
    return at({scaled / den, static_cast<double>(scaled % den) / static_cast<double>(den)});
}

TimeScaledFn time_scaled(const Walk& walk, Interpolation interpolation, double scale) {
    return TimeScaledFn(walk, interpolation, scale);
}

void write_walk_csv(std::ostream& os, const Walk& walk) {
    os << "#schema,rotree.walk.v1\n";
    os << "k," << to_string(walk.kind) << '\n';
    for (std::size_t k = 0; k < walk.values.size(); ++k) os << k << ',' << walk.values[k] << '\n';
}

Walk read_walk_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("#schema,rotree.walk.v1", 0) != 0) {
        throw ParseError("missing walk schema row");
    }
    if (!std::getline(is, line) || line.rfind("k,", 0) != 0) throw ParseError("missing walk header");
    Walk w;
    w.kind = walk_kind_from_string(line.substr(2));
    std::size_t expected = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("malformed walk row '" + line + "'");
        try {
            const auto k = std::stoull(line.substr(0, comma));
            if (k != expected) throw ParseError("walk rows out of order at k=" + std::to_string(k));
            w.values.push_back(std::stoi(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw ParseError("malformed walk row '" + line + "'");
        }
        ++expected;
    }
    if (w.values.empty()) throw ParseError("walk CSV has no rows");
    return w;
}

}  // namespace rotree
