#include "rotree/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "json.hpp"
#include "rotree/errors.hpp"
#include "rotree/stats.hpp"

namespace rotree {

namespace {

std::vector<double> knot_minima(const CadlagFn& x) {
    std::vector<double> v(x.knot_count());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::min(x.left_values()[k], x.right_values()[k]);
    return v;
}

struct Dsu {
    std::vector<std::size_t> up;
    explicit Dsu(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    std::size_t find(std::size_t v) {
        while (up[v] != v) v = up[v] = up[up[v]];
        return v;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        up[a] = b;
        return true;
    }
};

MetricCloud empty_cloud(std::size_t m) {
    MetricCloud c;
    c.m = m;
    c.dist.assign(m * m, 0.0);
    return c;
}

}  // namespace

PseudoDistance::PseudoDistance(CadlagFn x) : x_(std::move(x)), knot_min_(knot_minima(x_)) {}

double PseudoDistance::inf_between(double s, double t) const {
    const double a = std::min(s, t), b = std::max(s, t);
    double m = std::min(x_(a), x_(b));
    if (a == b) return m;
    m = std::min(m, x_.left_limit(b));
    const auto& k = x_.times();
    const auto first = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), a) - k.begin());
    const auto end = static_cast<std::size_t>(std::lower_bound(k.begin(), k.end(), b) - k.begin());
    if (first < end) m = std::min(m, knot_min_.query(first, end - 1));
    return m;
}

double PseudoDistance::operator()(double s, double t) const {
    if (s == t) return 0.0;
    return x_(s) + x_(t) - 2.0 * inf_between(s, t);
}

/* ---------------------------------------------------------------------- clouds */

double MetricCloud::diameter() const { return dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end()); }

MetricCloud MetricCloud::scaled(double factor) const {
    MetricCloud c = *this;
    for (auto& d : c.dist) d *= factor;
    return c;
}

std::optional<std::string> check_metric(const MetricCloud& c, bool check_triangle, double tol) {
    const std::size_t m = c.size();
    if (c.dist.size() != m * m) return "distance matrix has the wrong size";
    if (m > 0 && c.root >= m) return "root index out of range";
    for (std::size_t i = 0; i < m; ++i) {
        if (c(i, i) != 0.0) return "nonzero diagonal at " + std::to_string(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (c(i, j) < 0.0) return "negative distance";
            if (c(i, j) != c(j, i)) return "asymmetric distance";
        }
    }
    if (!c.mass.empty()) {
        if (c.mass.size() != m) return "mass vector has the wrong size";
        const double total = std::accumulate(c.mass.begin(), c.mass.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-9) return "masses do not sum to 1";
    }
    if (check_triangle) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t k = 0; k < m; ++k) {
                    if (c(i, k) > c(i, j) + c(j, k) + tol) {
                        return "triangle inequality fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                               std::to_string(k) + ")";
                    }
                }
    }
    return std::nullopt;
}

MetricCloud tree_cloud(const CadlagFn& x, const std::vector<double>& times, std::vector<double> masses,
                       JumpPolicy policy) {
    if (x(0.0) != 0.0 || x(1.0) != 0.0) throw InvalidArgument("tree cloud needs x(0) = x(1) = 0");
    if (x.inf() < 0.0) throw InvalidArgument("tree cloud needs a nonnegative function");
    if (policy == JumpPolicy::reject_negative && x.has_negative_jump()) throw InvalidArgument("tree cloud needs a function without negative jumps");
    const std::size_t m = times.size();
    if (!masses.empty() && masses.size() != m) throw InvalidArgument("one mass per time expected");
    MetricCloud c = empty_cloud(m);
    c.times = times;
    c.mass = std::move(masses);
    const auto zero = std::find(times.begin(), times.end(), 0.0);
    if (zero == times.end()) throw InvalidArgument("tree cloud needs the root time 0");
    c.root = static_cast<std::size_t>(zero - times.begin());

    const auto& k = x.times();
    std::vector<double> value(m), before(m);
    std::vector<std::size_t> after_idx(m), at_idx(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (times[i] < 0.0 || times[i] > 1.0) throw InvalidArgument("sample time outside [0,1]");
        value[i] = x(times[i]);
        before[i] = x.left_limit(times[i]);
        after_idx[i] = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), times[i]) - k.begin());
        at_idx[i] = static_cast<std::size_t>(std::lower_bound(k.begin(), k.end(), times[i]) - k.begin());
    }
    const RangeMin<double> table(knot_minima(x));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            std::size_t a = i, b = j;
            if (times[a] > times[b]) std::swap(a, b);
            double dist = 0.0;
            if (times[a] != times[b]) {
                double low = std::min({value[a], value[b], before[b]});
                if (after_idx[a] < at_idx[b]) low = std::min(low, table.query(after_idx[a], at_idx[b] - 1));
                dist = value[a] + value[b] - 2.0 * low;
            }
            c.dist[i * m + j] = c.dist[j * m + i] = dist;
        }
    }
    return c;
}

MetricCloud tree_cloud(const TimeScaledFn& f, const std::vector<double>& times, std::vector<double> masses,
                       JumpPolicy policy) {
    return tree_cloud(CadlagFn::from(f), times, std::move(masses), policy);
}

MetricCloud vertex_cloud(const PlaneTree& tree, const std::vector<PlaneTree::Vertex>& vertices) {
    std::vector<PlaneTree::Vertex> vs = vertices;
    if (vs.empty()) {
        vs.resize(tree.size());
        std::iota(vs.begin(), vs.end(), 0);
    }
    const auto walk = contour_walk(tree);
    const auto xs = contour_vertices(tree);
    std::vector<std::size_t> first(tree.size(), 0);
    for (std::size_t m = xs.size(); m-- > 0;) first[xs[m]] = m;
    const RangeMin<int> table(walk.values);
    const std::size_t m = vs.size();
    MetricCloud c = empty_cloud(m);
    c.root = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (vs[i] == 0 && c.root == m) c.root = i;
        for (std::size_t j = i + 1; j < m; ++j) {
            const std::size_t a = std::min(first[vs[i]], first[vs[j]]), b = std::max(first[vs[i]], first[vs[j]]);
            const double d = tree.depth(vs[i]) + tree.depth(vs[j]) - 2 * table.query(a, b);
            c.dist[i * m + j] = c.dist[j * m + i] = d;
        }
    }
    if (c.root == m) c.root = 0;
    return c;
}

std::pair<MetricCloud, MetricCloud> certificate_clouds(const ParamRep& p, const ParamRep& q, const M1Certificate& cert,
                                                        std::size_t max_points) {
    const std::size_t len = cert.path.size();
    if (len == 0) throw InvalidArgument("empty certificate");
    std::vector<std::size_t> pick;
    const std::size_t want = std::min(len, std::max<std::size_t>(max_points, 2));
    for (std::size_t k = 0; k < want; ++k) {
        pick.push_back(want == 1 ? 0 : k * (len - 1) / (want - 1));
    }
    pick.erase(std::unique(pick.begin(), pick.end()), pick.end());
    auto chi_fn = [](const ParamRep& r) {
        return CadlagFn(r.u, r.chi, r.chi, std::vector<SegmentKind>(r.u.size() - 1, SegmentKind::affine));
    };
    const CadlagFn chi1 = chi_fn(p), chi2 = chi_fn(q);
    const PseudoDistance d1(chi1), d2(chi2);
    const std::size_t m = pick.size();
    MetricCloud a = empty_cloud(m), b = empty_cloud(m);
    for (std::size_t k = 0; k < m; ++k) {
        // shared coupling time
        const double t = m == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(m - 1);
        a.times.push_back(t);
        b.times.push_back(t);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& [ui, vi] = cert.path[pick[i]];
            const auto& [uj, vj] = cert.path[pick[j]];
            a.dist[i * m + j] = a.dist[j * m + i] = d1(ui, uj);
            b.dist[i * m + j] = b.dist[j * m + i] = d2(vi, vj);
        }
    }
    return {std::move(a), std::move(b)};
}

std::vector<std::vector<std::int32_t>> tree_adjacency(const PlaneTree& tree) {
    std::vector<std::vector<std::int32_t>> adj(tree.size());
    for (PlaneTree::Vertex v = 1; v < static_cast<PlaneTree::Vertex>(tree.size()); ++v) {
        const auto p = tree.parent(v);
        adj[p].push_back(v);
        adj[v].push_back(p);
    }
    return adj;
}

std::vector<std::int32_t> bfs_distances(const std::vector<std::vector<std::int32_t>>& adj, std::int32_t source) {
    std::vector<std::int32_t> d(adj.size(), -1);
    std::vector<std::int32_t> queue{source};
    d[source] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const std::int32_t v = queue[h];
        for (std::int32_t w : adj[v]) {
            if (d[w] < 0) {
                d[w] = d[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return d;
}

MetricCloud graph_cloud(const std::vector<std::vector<std::int32_t>>& adj, std::int32_t root,
                        const std::vector<std::int32_t>& vertices) {
    std::vector<std::int32_t> vs = vertices;
    if (vs.empty()) {
        vs.resize(adj.size());
        std::iota(vs.begin(), vs.end(), 0);
    }
    const std::size_t m = vs.size();
    MetricCloud c = empty_cloud(m);
    const auto it = std::find(vs.begin(), vs.end(), root);
    c.root = it == vs.end() ? 0 : static_cast<std::size_t>(it - vs.begin());
    for (std::size_t i = 0; i < m; ++i) {
        const auto d = bfs_distances(adj, vs[i]);
        for (std::size_t j = 0; j < m; ++j) {
            if (d[vs[j]] < 0) throw InvalidArgument("graph is not connected");
            c.dist[i * m + j] = d[vs[j]];
        }
    }
    return c;
}

MetricCloud looptree_cloud(const Looptree& loop, const std::vector<std::int32_t>& vertices) {
    return graph_cloud(loop.adjacency(), loop.root_vertex, vertices);
}

std::vector<std::size_t> quotient_classes(const MetricCloud& c, double tol) {
    const std::size_t m = c.size();
    Dsu dsu(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (c(i, j) <= tol) dsu.unite(i, j);
    std::vector<std::size_t> label(m), id(m, m);
    std::size_t next = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = dsu.find(i);
        if (id[r] == m) id[r] = next++;
        label[i] = id[r];
    }
    return label;
}

/* -------------------------------------------------------- GH and GHP bounds */

std::optional<std::string> check_correspondence(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr) {
    std::vector<char> seen_a(a.size(), 0), seen_b(b.size(), 0);
    bool has_root = false;
    for (auto [i, j] : corr.pairs) {
        if (i >= a.size() || j >= b.size()) return "pair index out of range";
        seen_a[i] = seen_b[j] = 1;
        if (i == a.root && j == b.root) has_root = true;
    }
    if (!has_root) return "correspondence misses the root pair";
    if (std::find(seen_a.begin(), seen_a.end(), 0) != seen_a.end()) return "correspondence not onto the first cloud";
    if (std::find(seen_b.begin(), seen_b.end(), 0) != seen_b.end()) return "correspondence not onto the second cloud";
    return std::nullopt;
}

double distortion(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr) {
    double worst = 0.0;
    const auto& p = corr.pairs;
    for (std::size_t s = 0; s < p.size(); ++s) {
        for (std::size_t t = s + 1; t < p.size(); ++t) {
            worst = std::max(worst, std::abs(a(p[s].first, p[t].first) - b(p[s].second, p[t].second)));
        }
    }
    return worst;
}

double gh_upper(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr) {
    if (auto bad = check_correspondence(a, b, corr)) throw InvalidArgument("invalid correspondence: " + *bad);
    return distortion(a, b, corr) / 2.0;
}

double gh_upper_diag(const MetricCloud& a, const MetricCloud& b) {
    if (a.size() != b.size() || a.times != b.times) throw InvalidArgument("diagonal bound needs shared sample times");
    Correspondence corr;
    for (std::size_t i = 0; i < a.size(); ++i) corr.pairs.emplace_back(i, i);
    return gh_upper(a, b, corr);
}

double ghp_upper(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr,
                 const std::vector<CouplingEntry>& coupling) {
    if (auto bad = check_correspondence(a, b, corr)) throw InvalidArgument("invalid correspondence: " + *bad);
    auto masses = [](const MetricCloud& c) {
        return c.mass.empty() ? std::vector<double>(c.size(), 1.0 / static_cast<double>(c.size())) : c.mass;
    };
    const auto ma = masses(a), mb = masses(b);
    std::vector<double> got_a(a.size(), 0.0), got_b(b.size(), 0.0);
    std::unordered_set<std::uint64_t> inside;
    for (auto [i, j] : corr.pairs) inside.insert(static_cast<std::uint64_t>(i) * b.size() + j);
    double on_corr = 0.0;
    for (const auto& e : coupling) {
        if (e.a >= a.size() || e.b >= b.size() || e.mass < 0.0) throw InvalidArgument("invalid coupling entry");
        got_a[e.a] += e.mass;
        got_b[e.b] += e.mass;
        if (inside.count(static_cast<std::uint64_t>(e.a) * b.size() + e.b)) on_corr += e.mass;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(got_a[i] - ma[i]) > 1e-9) throw InvalidArgument("coupling marginal mismatch on the first cloud");
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (std::abs(got_b[j] - mb[j]) > 1e-9) throw InvalidArgument("coupling marginal mismatch on the second cloud");
    }
    return std::max(distortion(a, b, corr) / 2.0, std::max(0.0, 1.0 - on_corr));
}

/* ------------------------------------------------------------------- statistics */

DimensionEstimate correlation_dimension(const MetricCloud& c, const DimensionOptions& opt) {
    const std::size_t m = c.size();
    const double diam = c.diameter();
    if (m < 2 || !(diam > 0.0)) throw DegenerateCloudError("all points of the cloud coincide");
    if (!(opt.r_min > 0.0 && opt.r_max > opt.r_min) || opt.radii < 3) throw InvalidArgument("bad dimension fit window");
    std::vector<double> pairs;
    pairs.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) pairs.push_back(c(i, j) / diam);
    std::sort(pairs.begin(), pairs.end());
    std::vector<double> lx, ly;
    const double total = static_cast<double>(pairs.size());
    for (std::size_t k = 0; k < opt.radii; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(opt.radii - 1);
        const double r = opt.r_min * std::pow(opt.r_max / opt.r_min, f);
        const auto count = static_cast<double>(std::upper_bound(pairs.begin(), pairs.end(), r) - pairs.begin());
        if (count == 0.0) continue;
        lx.push_back(std::log(r));
        ly.push_back(std::log(count / total));
    }
    if (lx.size() < 3) throw DegenerateCloudError("too few occupied radii in the fit window");
    const LinearFit fit = ols(lx, ly);
    DimensionEstimate e;
    e.dimension = fit.slope;
    e.slope_stderr = fit.slope_stderr;
    e.r2 = fit.r2;
    e.r_min = opt.r_min;
    e.r_max = opt.r_max;
    e.points = m;
    e.radii = lx.size();
    return e;
}

double default_degree_radius(const MetricCloud& c) {
    const std::size_t m = c.size();
    std::vector<double> nn;
    for (std::size_t i = 0; i < m; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i && c(i, j) > 0.0) best = std::min(best, c(i, j));
        }
        if (std::isfinite(best)) nn.push_back(best);
    }
    if (nn.empty()) throw DegenerateCloudError("all points of the cloud coincide");
    return 3.0 * median(nn);
}

std::vector<int> degree_stat(const MetricCloud& c, double r) {
    if (r <= 0.0) r = default_degree_radius(c);
    const std::size_t m = c.size();
    std::vector<int> out(m, 0);
    std::vector<std::size_t> shell;
    for (std::size_t x = 0; x < m; ++x) {
        shell.clear();
        for (std::size_t y = 0; y < m; ++y) {
            if (c(x, y) > r && c(x, y) <= 2.0 * r) shell.push_back(y);
        }
        Dsu dsu(shell.size());
        int parts = static_cast<int>(shell.size());
        for (std::size_t i = 0; i < shell.size(); ++i)
            for (std::size_t j = i + 1; j < shell.size(); ++j)
                if (c(shell[i], shell[j]) <= r && dsu.unite(i, j)) --parts;
        out[x] = parts;
    }
    return out;
}

/* ---------------------------------------------------------------------- export */

void write_cloud_csv(std::ostream& os, const MetricCloud& c) {
    os << "#schema,rotree.cloud.v1\n";
    const std::size_t m = c.size();
    char buf[32];
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", c(i, j));
            os << (j ? "," : "") << buf;
        }
        os << '\n';
    }
}

std::string cloud_sidecar_json(const MetricCloud& c) {
    nlohmann::json j;
    j["schema"] = "rotree.cloud.v1";
    j["points"] = c.size();
    j["root"] = c.root;
    j["times"] = c.times;
    j["masses"] = c.mass;
    return j.dump(2);
}

}  // namespace rotree
