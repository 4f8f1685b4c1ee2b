#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <unordered_map>

#include "rotree/experiments.hpp"

namespace rotree {

namespace {

/* leaves get equal angles in lex order; a vertex sits at depth |v| in the middle of its leaf range */
std::vector<Point2> radial_layout(const PlaneTree& tree) {
    const std::size_t n = tree.size();
    std::vector<double> first(n, 0.0), last(n, 0.0);
    std::size_t leaves = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (tree.is_leaf(static_cast<PlaneTree::Vertex>(v))) {
            first[v] = last[v] = static_cast<double>(leaves++);
        }
    }
    // children have larger lex ranks than their parent
    for (std::size_t k = n; k-- > 0;) {
        const auto v = static_cast<PlaneTree::Vertex>(k);
        const auto ch = tree.children(v);
        if (!ch.empty()) {
            first[k] = first[ch.front()];
            last[k] = last[ch.back()];
        }
    }
    std::vector<Point2> pos(n);
    const double L = static_cast<double>(std::max<std::size_t>(leaves, 1));
    for (std::size_t v = 0; v < n; ++v) {
        const double angle = 2.0 * std::numbers::pi * (0.5 * (first[v] + last[v]) + 0.5) / L;
        const double r = tree.depth(static_cast<PlaneTree::Vertex>(v));
        pos[v] = {r * std::cos(angle), r * std::sin(angle)};
    }
    return pos;
}

std::uint64_t cell_key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
}

}  // namespace

std::vector<Point2> force_layout(const PlaneTree& tree, std::uint64_t seed, int iterations) {
    const std::size_t n = tree.size();
    std::vector<Point2> pos = radial_layout(tree);
    if (n < 2) return pos;
    Rng rng(seed, 0x1a7e);
    for (auto& p : pos) {
        p.x += 0.01 * (rng.uniform() - 0.5);
        p.y += 0.01 * (rng.uniform() - 0.5);
    }
    constexpr double rest = 1.0;    // spring length
    constexpr double reach = 1.0;   // repulsion radius, also the hash cell size
    std::vector<Point2> force(n);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
    for (int it = 0; it < iterations; ++it) {
        std::fill(force.begin(), force.end(), Point2{});
        for (std::size_t v = 1; v < n; ++v) {
            const auto p = static_cast<std::size_t>(tree.parent(static_cast<PlaneTree::Vertex>(v)));
            const double dx = pos[v].x - pos[p].x, dy = pos[v].y - pos[p].y;
            const double d = std::max(std::hypot(dx, dy), 1e-9);
            const double f = 0.5 * (d - rest) / d;
            force[v].x -= f * dx;
            force[v].y -= f * dy;
            force[p].x += f * dx;
            force[p].y += f * dy;
        }
        grid.clear();
        std::vector<std::int64_t> cx(n), cy(n);
        for (std::size_t v = 0; v < n; ++v) {
            cx[v] = static_cast<std::int64_t>(std::floor(pos[v].x / reach));
            cy[v] = static_cast<std::int64_t>(std::floor(pos[v].y / reach));
            grid[cell_key(cx[v], cy[v])].push_back(static_cast<std::uint32_t>(v));
        }
        for (std::size_t v = 0; v < n; ++v) {
            for (std::int64_t ox = -1; ox <= 1; ++ox) {
                for (std::int64_t oy = -1; oy <= 1; ++oy) {
                    const auto found = grid.find(cell_key(cx[v] + ox, cy[v] + oy));
                    if (found == grid.end()) continue;
                    for (std::uint32_t w : found->second) {
                        if (w <= v) continue;
                        const double dx = pos[v].x - pos[w].x, dy = pos[v].y - pos[w].y;
                        const double d = std::hypot(dx, dy);
                        if (d >= reach) continue;
                        const double s = std::max(d, 1e-3);
                        const double f = 0.25 * (reach - d) / s;
                        force[v].x += f * dx;
                        force[v].y += f * dy;
                        force[w].x -= f * dx;
                        force[w].y -= f * dy;
                    }
                }
            }
        }
        // cooling: the largest allowed move shrinks linearly
        const double cap = 0.5 * (1.0 - static_cast<double>(it) / iterations) + 0.01;
        for (std::size_t v = 0; v < n; ++v) {
            const double m = std::hypot(force[v].x, force[v].y);
            const double scale = m > cap ? cap / m : 1.0;
            pos[v].x += scale * force[v].x;
            pos[v].y += scale * force[v].y;
        }
    }
    return pos;
}

namespace {

struct Frame {
    double x0, y0, scale;
};

Frame fit(const std::vector<Point2>& layout, double size, double margin) {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    if (!layout.empty()) {
        xmin = xmax = layout[0].x;
        ymin = ymax = layout[0].y;
    }
    for (const auto& p : layout) {
        xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double scale = (size - 2.0 * margin) / span;
    return {xmin * scale - margin - 0.5 * (size - 2 * margin - (xmax - xmin) * scale),
            ymin * scale - margin - 0.5 * (size - 2 * margin - (ymax - ymin) * scale), scale};
}

void append_drawing(std::string& out, const Drawing& d, double size, double offset_x) {
    const double margin = 20.0;
    const Frame f = fit(d.layout, size, margin);
    char buf[160];
    const double stroke = std::clamp(200.0 / std::sqrt(static_cast<double>(d.tree.size()) + 1.0), 0.2, 2.0);
    std::snprintf(buf, sizeof buf, "<g transform=\"translate(%.2f,0)\" stroke=\"#222\" stroke-width=\"%.3f\">\n",
                  offset_x, stroke);
    out += buf;
    for (std::size_t v = 1; v < d.tree.size(); ++v) {
        const auto p = static_cast<std::size_t>(d.tree.parent(static_cast<PlaneTree::Vertex>(v)));
        std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n",
                      d.layout[p].x * f.scale - f.x0, d.layout[p].y * f.scale - f.y0,
                      d.layout[v].x * f.scale - f.x0, d.layout[v].y * f.scale - f.y0);
        out += buf;
    }
    out += "</g>\n";
    if (!d.title.empty()) {
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"16\" font-family=\"sans-serif\" font-size=\"14\">",
                      offset_x + margin);
        out += buf;
        for (char c : d.title) {
            switch (c) {
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '&': out += "&amp;"; break;
                default: out += c;
            }
        }
        out += "</text>\n";
    }
}

std::string header(double width, double height) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                  width, height, width, height);
    return std::string(buf) + "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string tree_svg(const Drawing& drawing, double size) {
    std::string out = header(size, size);
    append_drawing(out, drawing, size, 0.0);
    out += "</svg>\n";
    return out;
}

std::string panel_svg(const std::vector<Drawing>& drawings, double size) {
    std::string out = header(size * static_cast<double>(std::max<std::size_t>(drawings.size(), 1)), size);
    for (std::size_t k = 0; k < drawings.size(); ++k) append_drawing(out, drawings[k], size, size * static_cast<double>(k));
    out += "</svg>\n";
    return out;
}

}  // namespace rotree
