#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "rotree/experiments.hpp"
#include "rotree/metric.hpp"
#include "support.hpp"

using namespace rotree;
using testing_support::seven_tree;
using testing_support::eleven_tree;

namespace {

std::vector<PlaneTree> random_trees(std::size_t count, std::size_t max_n, std::uint64_t seed) {
    std::vector<PlaneTree> out;
    Rng rng(seed, 17);
    const auto laws = testing_support::all_laws();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& law = laws[i % laws.size()];
        std::size_t n = 2 + rng.below(max_n - 1);
        if (law.kind() == LawKind::binary && n % 2 == 0) ++n;
        out.push_back(sample_conditioned(law, n, rng));
    }
    return out;
}

std::vector<double> grid_times(std::size_t steps) {
    std::vector<double> t;
    for (std::size_t k = 0; k <= steps; ++k) t.push_back(static_cast<double>(k) / static_cast<double>(steps));
    return t;
}

MetricCloud explicit_cloud(std::size_t m, const std::function<double(std::size_t, std::size_t)>& d) {
    MetricCloud c;
    c.m = m;
    c.dist.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) c.dist[i * m + j] = d(i, j);
    return c;
}

Correspondence diagonal(std::size_t m) {
    Correspondence c;
    for (std::size_t i = 0; i < m; ++i) c.pairs.emplace_back(i, i);
    return c;
}

// χ of a representation as a function of the parameter u
CadlagFn spatial(const ParamRep& rep) {
    return CadlagFn(rep.u, rep.chi, rep.chi, std::vector<SegmentKind>(rep.u.size() - 1, SegmentKind::affine));
}

// sup over u of |f(u) - g(u)| for two piecewise affine components on their knot union
double sup_gap(const ParamRep& p, const ParamRep& q, bool spatial_part) {
    std::vector<double> knots = p.u;
    knots.insert(knots.end(), q.u.begin(), q.u.end());
    double gap = 0.0;
    for (double u : knots) {
        gap = std::max(gap, spatial_part ? std::abs(p.chi_at(u) - q.chi_at(u)) : std::abs(p.tau_at(u) - q.tau_at(u)));
    }
    return gap;
}

}  // namespace

TEST_CASE("pseudo-distance examples") {
    const PseudoDistance d(CadlagFn::step({0.0, 1.0 / 3, 2.0 / 3}, {0.0, 1.0, 0.0}));
    CHECK(d(0.0, 0.5) == 1.0);
    CHECK(d(0.5, 0.5) == 0.0);
    CHECK(d(0.4, 0.6) == 0.0);
    CHECK(d(0.0, 0.9) == 0.0);
    // the quotient has two points
    const std::vector<double> times{0.0, 0.2, 0.4, 0.5, 0.6, 0.7, 0.9};
    const auto cloud = explicit_cloud(times.size(), [&](std::size_t i, std::size_t j) { return d(times[i], times[j]); });
    const auto classes = quotient_classes(cloud);
    CHECK(std::set<std::size_t>(classes.begin(), classes.end()).size() == 2);
    CHECK(classes == std::vector<std::size_t>{0, 0, 1, 1, 1, 0, 0});

    const PseudoDistance c(time_scaled(contour_walk(seven_tree()), Interpolation::linear));
    CHECK(c(2.0 / 12, 4.0 / 12) == 2.0);
    CHECK(c(0.3, 0.3) == 0.0);
    CHECK(c.inf_between(2.0 / 12, 4.0 / 12) == 1.0);
}

TEST_CASE("pseudo-distance is a pseudo-metric on grids") {
    Rng rng(31);
    for (const auto& t : random_trees(6, 150, 1)) {
        const auto x = CadlagFn::from(time_scaled(contour_walk(t), Interpolation::linear, 0.3));
        const PseudoDistance d(x);
        std::vector<double> times{0.0, 1.0};
        while (times.size() < 120) times.push_back(rng.uniform());
        const auto m = times.size();
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double dij = d(times[i], times[j]);
                CHECK(dij == d(times[j], times[i]));
                CHECK(dij >= 0.0);
                for (std::size_t k = 0; k < m; k += 7) CHECK(dij <= d(times[i], times[k]) + d(times[k], times[j]) + 1e-12);
            }
        }
    }
}

TEST_CASE("tree clouds of the constant contour are the tree metric") {
    const auto t = seven_tree();
    const auto c = tree_cloud(time_scaled(contour_walk(t), Interpolation::constant), grid_times(12), {},
                              JumpPolicy::allow_negative);
    const auto xs = contour_vertices(t);
    for (std::size_t i = 0; i < 13; ++i)
        for (std::size_t j = 0; j < 13; ++j) CHECK(c(i, j) == testing_support::naive_distance(t, xs[i], xs[j]));
    CHECK(c.root == 0);

    for (const auto& tree : random_trees(40, 200, 2)) {
        const auto steps = 2 * tree.size() - 2;
        const auto C = contour_walk(tree);
        CHECK_THROWS_AS(tree_cloud(time_scaled(C, Interpolation::constant), grid_times(steps)), InvalidArgument);
        const auto con =
            tree_cloud(time_scaled(C, Interpolation::constant), grid_times(steps), {}, JumpPolicy::allow_negative);
        const auto lin = tree_cloud(time_scaled(C, Interpolation::linear), grid_times(steps));
        const auto vs = contour_vertices(tree);
        CHECK(con.dist == lin.dist);
        const auto bfs = graph_cloud(tree_adjacency(tree), 0, std::vector<std::int32_t>(vs.begin(), vs.end()));
        CHECK(con.dist == bfs.dist);
        CHECK_FALSE(check_metric(con, true).has_value());
        for (std::size_t i = 0; i < con.size(); ++i) CHECK(con(con.root, i) == C[i]);
    }
}

TEST_CASE("tree cloud preconditions") {
    const auto one = tree_cloud(CadlagFn::constant(0.0), {0.0});
    CHECK(one.size() == 1);
    CHECK(one(0, 0) == 0.0);
    const auto up = CadlagFn::step({0.0, 0.5}, {0.0, 1.0});
    CHECK_THROWS_AS(tree_cloud(up, {0.0, 0.5}), InvalidArgument);
    const auto bump = CadlagFn::step({0.0, 0.25, 0.75}, {0.0, 1.0, 0.0});
    CHECK_THROWS_AS(tree_cloud(bump, {0.0, 0.5}), InvalidArgument);  // negative jump
    const auto tent = CadlagFn({0.0, 0.5, 1.0}, {0, 1, 0}, {0, 1, 0}, {SegmentKind::affine, SegmentKind::affine});
    CHECK_THROWS_AS(tree_cloud(tent, {0.5, 0.7}), InvalidArgument);
    CHECK_THROWS_AS(tree_cloud(tent.scaled(-1.0), {0.0}), InvalidArgument);
    CHECK_THROWS_AS(tree_cloud(tent, {0.0, 0.5}, {1.0}), InvalidArgument);
    const auto c = tree_cloud(tent, {0.0, 0.25, 0.5, 0.75});
    CHECK(c(1, 3) == 0.0);  // same height on both sides of the peak
    CHECK(c(1, 2) == doctest::Approx(0.5));
    CHECK(c(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("vertex clouds use tree distances") {
    for (const auto& t : random_trees(30, 200, 3)) {
        const auto c = vertex_cloud(t);
        for (std::size_t i = 0; i < t.size(); i += 3)
            for (std::size_t j = 0; j < t.size(); j += 5)
                CHECK(c(i, j) == testing_support::naive_distance(t, static_cast<int>(i), static_cast<int>(j)));
        const std::vector<PlaneTree::Vertex> some{5 % static_cast<int>(t.size()), 0};
        CHECK(vertex_cloud(t, some).root == 1);
    }
}

TEST_CASE("GH and GHP upper bounds") {
    const auto t = seven_tree();
    const auto a = vertex_cloud(t);
    CHECK(gh_upper_diag(a, a) == 0.0);
    CHECK(distortion(a, a, diagonal(a.size())) == 0.0);
    std::vector<CouplingEntry> same;
    for (std::size_t i = 0; i < a.size(); ++i) same.push_back({i, i, 1.0 / 7});
    CHECK(ghp_upper(a, a, diagonal(a.size()), same) == doctest::Approx(0.0));

    // a segment against a point: the only correspondence has distortion = diameter
    const auto seg = segment_cloud(101);
    const auto point = explicit_cloud(1, [](std::size_t, std::size_t) { return 0.0; });
    Correspondence all;
    for (std::size_t i = 0; i < seg.size(); ++i) all.pairs.emplace_back(i, 0);
    CHECK(gh_upper(seg, point, all) == doctest::Approx(0.5));

    Correspondence missing{{{0, 0}}};
    CHECK(check_correspondence(seg, point, missing).has_value());
    CHECK_THROWS_AS(gh_upper(seg, point, missing), InvalidArgument);
    auto bad = same;
    bad[0].mass = 0.5;
    CHECK_THROWS_AS(ghp_upper(a, a, diagonal(a.size()), bad), InvalidArgument);
    // mass outside the correspondence
    std::vector<CouplingEntry> shifted;
    for (std::size_t i = 0; i < a.size(); ++i) shifted.push_back({i, (i + 1) % a.size(), 1.0 / 7});
    CHECK(ghp_upper(a, a, diagonal(a.size()), shifted) == doctest::Approx(1.0));
}

TEST_CASE("shared-time trees are within twice the uniform distance") {
    Rng rng(32);
    const auto trees = random_trees(40, 120, 4);
    for (std::size_t i = 0; i + 1 < trees.size(); i += 2) {
        // same vertex count, so both contours live on one grid
        const auto n = trees[i].size();
        const auto other = sample_conditioned(OffspringLaw::geometric(), n, rng);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        const auto fx = time_scaled(contour_walk(trees[i]), Interpolation::linear, scale);
        const auto fy = time_scaled(contour_walk(other), Interpolation::linear, scale);
        std::vector<double> times{0.0};
        for (int k = 0; k < 150; ++k) times.push_back(rng.uniform());
        double uniform = 0.0;
        for (std::size_t k = 0; k <= 2 * n - 2; ++k)
            uniform = std::max(uniform, std::abs(fx.grid_value(static_cast<std::int64_t>(k)) - fy.grid_value(static_cast<std::int64_t>(k))));
        CHECK(gh_upper_diag(tree_cloud(fx, times), tree_cloud(fy, times)) <= 2.0 * uniform + 1e-12);
    }
}

TEST_CASE("certificate clouds follow the coupling") {
    Rng rng(33);
    for (const auto& t : random_trees(12, 150, 5)) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(t.size()));
        const auto x = CadlagFn::from(time_scaled(contour_walk(t), Interpolation::linear, scale));
        const auto y = CadlagFn::from(time_scaled(height_walk(t), Interpolation::linear, scale));
        const auto p = parametric_representation(x), q = parametric_representation(y);
        const auto bound = m1_upper(p, q, 1024, true);
        const auto [a, b] = certificate_clouds(p, q, *bound.certificate, 400);
        CHECK(a.size() == b.size());
        CHECK(a.size() <= 400);
        CHECK_FALSE(check_metric(a, true).has_value());
        CHECK(distortion(a, b, diagonal(a.size())) <= 4.0 * bound.value + 1e-12);
        CHECK(gh_upper_diag(a, b) <= 2.0 * bound.value + 1e-12);
    }
}

TEST_CASE("delta-window correspondence and simple coupling") {
    // finite version: parameters on a grid plus the coupled pairs (τ1⁻¹(U_k), τ2⁻¹(U_k)), U_k midpoints
    const std::size_t grid = 64, draws = 150;
    auto check_pair = [&](const CadlagFn& x, const CadlagFn& y, double delta) {
        const ParamRep p = parametric_representation(x), q = parametric_representation(y);
        std::vector<double> a(draws), b(draws);
        std::set<double> params;
        for (std::size_t j = 0; j <= grid; ++j) params.insert(static_cast<double>(j) / grid);
        for (std::size_t k = 0; k < draws; ++k) {
            const double u = (k + 0.5) / draws;
            a[k] = p.tau_inverse(u);
            b[k] = q.tau_inverse(u);
            params.insert(a[k]);
            params.insert(b[k]);
        }
        const std::vector<double> s(params.begin(), params.end());
        auto index = [&](double v) { return static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), v) - s.begin()); };
        std::vector<double> ma(s.size(), 0.0), mb(s.size(), 0.0);
        std::vector<CouplingEntry> coupling;
        double mean_shift = 0.0;
        for (std::size_t k = 0; k < draws; ++k) {
            ma[index(a[k])] += 1.0 / draws;
            mb[index(b[k])] += 1.0 / draws;
            coupling.push_back({index(a[k]), index(b[k]), 1.0 / draws});
            mean_shift += std::abs(a[k] - b[k]) / draws;
        }
        const MetricCloud ca = tree_cloud(spatial(p), s, ma), cb = tree_cloud(spatial(q), s, mb);
        Correspondence window;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j)
                if (std::abs(s[i] - s[j]) <= delta) window.pairs.emplace_back(i, j);
        const double chi_gap = sup_gap(p, q, true), tau_gap = sup_gap(p, q, false);
        const double omega = modulus_of_continuity(p, delta);
        CHECK(distortion(ca, cb, window) <= 4.0 * (chi_gap + omega) + 1e-12);
        // Markov on the bad points, exact for the discrete coupling
        const double bound = ghp_upper(ca, cb, window, coupling);
        CHECK(bound <= std::max(2.0 * (chi_gap + omega), mean_shift / delta) + 1e-12);
        // the midpoint sum of |τ1⁻¹ - τ2⁻¹| (total variation <= 2) against its integral, which is <= ‖τ1 - τ2‖
        CHECK(mean_shift <= tau_gap + 2.0 / draws);
    };
    for (const auto& t : random_trees(6, 80, 21)) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(t.size()));
        const auto c = CadlagFn::from(time_scaled(contour_walk(t), Interpolation::linear, scale));
        const auto cc = CadlagFn::from(time_scaled(contour_walk(t), Interpolation::constant, scale));
        const auto h = CadlagFn::from(time_scaled(height_walk(t), Interpolation::linear, scale));
        for (double delta : {0.01, 0.04}) {
            check_pair(c, h, delta);
            check_pair(c, cc, delta);
            check_pair(cc, c, delta);
        }
    }
    const auto f2 = CadlagFn::from(time_scaled(contour_walk(seven_tree()), Interpolation::linear));
    const auto f8 = CadlagFn::from(time_scaled(contour_walk(eleven_tree()), Interpolation::linear));
    check_pair(f2, f8, 0.02);
}

TEST_CASE("looptree clouds") {
    const auto one = looptree_cloud(looptree(path_tree(2)));
    CHECK(one.size() == 1);
    const auto lp = looptree(eleven_tree());
    const auto c = looptree_cloud(lp);
    CHECK(c.size() == 10);
    CHECK(c(0, 7) == 1.0);  // the edges above u_1 and u_8 share the root corner
    CHECK(c.root == static_cast<std::size_t>(lp.root_vertex));
    CHECK_FALSE(check_metric(c, true).has_value());

    for (const auto& t : random_trees(30, 200, 6)) {
        const auto loop = looptree(t);
        const auto lc = looptree_cloud(loop);
        const auto ex = spanning_tree_extract(loop);
        std::vector<std::vector<std::int32_t>> adj(loop.vertex_count);
        for (auto e : ex.edges) {
            const auto& corner = loop.corners[static_cast<std::size_t>(e)];
            adj[static_cast<std::size_t>(corner.a)].push_back(corner.b);
            adj[static_cast<std::size_t>(corner.b)].push_back(corner.a);
        }
        const auto sc = graph_cloud(adj, loop.root_vertex);
        for (std::size_t i = 0; i < lc.size(); ++i)
            for (std::size_t j = 0; j < lc.size(); ++j) CHECK(sc(i, j) >= lc(i, j));
        // the spanning tree is (rot T)° with its own tree metric
        const auto in = internal_subtree(rotate(t));
        const auto ic = vertex_cloud(in.tree);
        for (std::size_t i = 0; i < lc.size(); ++i)
            for (std::size_t j = 0; j < lc.size(); j += 3)
                CHECK(ic(i, j) == sc(static_cast<std::size_t>(ex.label[i]), static_cast<std::size_t>(ex.label[j])));
    }
}

TEST_CASE("correlation dimension") {
    const auto seg = segment_cloud(1500);
    CHECK(std::abs(correlation_dimension(seg).dimension - 1.0) < 0.05);
    const auto dup = explicit_cloud(1000, [](std::size_t, std::size_t) { return 0.0; });
    CHECK_THROWS_AS(correlation_dimension(dup), DegenerateCloudError);
    // planar grid as a second analytic case
    const std::size_t side = 40;
    const auto plane = explicit_cloud(side * side, [&](std::size_t i, std::size_t j) {
        return std::hypot(double(i % side) - double(j % side), double(i / side) - double(j / side));
    });
    const auto est = correlation_dimension(plane);
    CHECK(std::abs(est.dimension - 2.0) < 0.15);
    CHECK(est.r_min == 0.01);
    CHECK(est.r_max == 0.1);
    CHECK(est.points == side * side);
    CHECK(est.r2 > 0.95);
    DimensionOptions wrong;
    wrong.r_min = 0.2;
    wrong.r_max = 0.1;
    CHECK_THROWS_AS(correlation_dimension(seg, wrong), InvalidArgument);
}

TEST_CASE("Brownian tree cloud has dimension near two") {
    // statistical: the contour tree of a large geometric tree, uniform vertex sample
    const auto t = sample_conditioned(OffspringLaw::geometric(), 100'000, 41);
    Rng rng(41, 1);
    const auto cloud = sample_cloud(t, CloudKind::tree, 2000, rng);
    CHECK(std::abs(correlation_dimension(cloud).dimension - 2.0) < 0.3);
}

TEST_CASE("degree statistic") {
    const auto seg = segment_cloud(201);
    const auto deg = degree_stat(seg, 0.02);
    CHECK(deg[100] == 2);
    CHECK(deg[0] == 1);
    // three arms of 60 points meeting at point 0
    const std::size_t arm = 60;
    const auto star = explicit_cloud(1 + 3 * arm, [&](std::size_t i, std::size_t j) {
        if (i == j) return 0.0;
        auto pos = [&](std::size_t k) { return k == 0 ? std::pair<std::size_t, double>{0, 0.0}
                                                       : std::pair<std::size_t, double>{(k - 1) / arm, double((k - 1) % arm + 1)}; };
        const auto [ai, ri] = pos(i);
        const auto [aj, rj] = pos(j);
        return (ai == aj || ri == 0.0 || rj == 0.0) ? std::abs(ri - rj) : ri + rj;
    });
    const auto sd = degree_stat(star, 3.0);
    CHECK(sd[0] == 3);
    CHECK(sd[30] == 2);
    CHECK(default_degree_radius(seg) == doctest::Approx(3.0 * 0.005));
}

TEST_CASE("cloud export") {
    const auto c = tree_cloud(time_scaled(contour_walk(seven_tree()), Interpolation::linear), grid_times(12));
    std::stringstream ss;
    write_cloud_csv(ss, c);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "#schema,rotree.cloud.v1");
    const auto side = cloud_sidecar_json(c);
    CHECK(side.find("\"times\"") != std::string::npos);
    CHECK(side.find("\"root\"") != std::string::npos);
    CHECK(c.scaled(0.5)(1, 2) == 0.5 * c(1, 2));
    CHECK(c.diameter() == 4.0);
}
