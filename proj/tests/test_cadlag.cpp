#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rotree/cadlag.hpp"
#include "rotree/sampler.hpp"
#include "support.hpp"

using namespace rotree;

namespace {

CadlagFn unit_step() { return CadlagFn::step({0.0, 0.5}, {0.0, 1.0}); }

CadlagFn ramp(double eps) {
    return CadlagFn({0.0, 0.5 - eps, 0.5, 1.0}, {0, 0, 1, 1}, {0, 0, 1, 1},
                    {SegmentKind::constant, SegmentKind::affine, SegmentKind::constant});
}

CadlagFn identity() { return CadlagFn({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {SegmentKind::affine}); }

Walk random_walk(std::size_t steps, Rng& rng) {
    Walk w;
    w.values = {0};
    for (std::size_t i = 0; i < steps; ++i) {
        const int jump = static_cast<int>(rng.below(5)) - 2;
        w.values.push_back(w.values.back() + jump);
    }
    return w;
}

CadlagFn random_fn(Rng& rng) {
    const auto w = random_walk(5 + rng.below(30), rng);
    const auto view = rng.below(2) ? Interpolation::linear : Interpolation::constant;
    return CadlagFn::from(time_scaled(w, view, 0.2));
}

}  // namespace

TEST_CASE("evaluation of a step function") {
    const auto x = unit_step();
    CHECK(x(0.0) == 0.0);
    CHECK(x(0.4999) == 0.0);
    CHECK(x(0.5) == 1.0);
    CHECK(x(1.0) == 1.0);
    CHECK(x.left_limit(0.5) == 0.0);
    CHECK(x.left_limit(0.0) == 0.0);
    CHECK(x.jumps().size() == 1);
    CHECK(x.sup() == 1.0);
    CHECK(x.inf() == 0.0);
    CHECK_FALSE(x.has_negative_jump());
    CHECK(x.scaled(-2.0).has_negative_jump());
    CHECK(x.scaled(3.0)(0.7) == 3.0);
    CHECK(CadlagFn::constant(2.5)(0.3) == 2.5);
    CHECK(identity()(0.25) == 0.25);
    CHECK_THROWS_AS(CadlagFn({0.0, 0.5, 0.5, 1.0}, {0, 0, 0, 0}, {0, 0, 0, 0},
                             {SegmentKind::constant, SegmentKind::constant, SegmentKind::constant}),
                    InvalidArgument);
    CHECK_THROWS_AS(CadlagFn({0.2, 1.0}, {0, 0}, {0, 0}, {SegmentKind::constant}), InvalidArgument);
}

TEST_CASE("walk views as cadlag functions") {
    Walk w{{0, 2, 1, 3}, WalkKind::custom};
    const auto lin = CadlagFn::from(time_scaled(w, Interpolation::linear));
    const auto con = CadlagFn::from(time_scaled(w, Interpolation::constant));
    CHECK(lin.jumps().empty());
    CHECK(con.jumps().size() == 3);
    CHECK(lin(0.5) == doctest::Approx(1.5));
    CHECK(con(0.5) == 2.0);
    CHECK(con(1.0) == 3.0);
    CHECK(con.left_limit(1.0) == 1.0);
    for (int k = 0; k <= 3; ++k) CHECK(lin(k / 3.0) == doctest::Approx(con(k / 3.0)));
}

TEST_CASE("completed graphs") {
    const auto g = completed_graph(unit_step());
    REQUIRE(g.vertical.size() == 1);
    CHECK(g.vertical[0].t == 0.5);
    CHECK(g.vertical[0].from == 0.0);
    CHECK(g.vertical[0].to == 1.0);
    CHECK(completed_graph(identity()).vertical.empty());
    const auto two = CadlagFn::step({0.0, 0.25, 0.75}, {0.0, 2.0, -1.0});
    CHECK(completed_graph(two).vertical.size() == 2);
    // graph order: a jump point follows its left limit
    const auto& poly = g.polyline;
    for (std::size_t i = 1; i < poly.size(); ++i) CHECK(poly[i - 1].t <= poly[i].t);
}

TEST_CASE("parametric representation of the unit step") {
    const auto rep = parametric_representation(unit_step());
    CHECK(rep.u == std::vector<double>{0.0, 0.25, 0.75, 1.0});
    CHECK(rep.chi == std::vector<double>{0.0, 0.0, 1.0, 1.0});
    CHECK(rep.tau == std::vector<double>{0.0, 0.5, 0.5, 1.0});
    CHECK_FALSE(check_representation(rep, unit_step()).has_value());
    CHECK(rep.tau_inverse(0.5) == 0.75);
    CHECK(rep.tau_inverse(1.0) == 1.0);
    CHECK(rep.chi_at(0.5) == 0.5);
}

TEST_CASE("constant functions have the identity representation") {
    const auto rep = parametric_representation(CadlagFn::constant(1.5));
    for (double s : {0.0, 0.3, 0.9, 1.0}) {
        CHECK(rep.chi_at(s) == 1.5);
        CHECK(rep.tau_at(s) == doctest::Approx(s));
    }
}

TEST_CASE("representations reconstruct their function") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_fn(rng);
        const auto rep = parametric_representation(x);
        REQUIRE_FALSE(check_representation(rep, x).has_value());
        for (int i = 0; i <= 10'000; ++i) {
            const double t = i / 10'000.0;
            CHECK(rep.chi_at(rep.tau_inverse(t)) == doctest::Approx(x(t)).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("representation checks catch broken traces") {
    const auto x = unit_step();
    auto rep = parametric_representation(x);
    auto bad_tau = rep;
    bad_tau.tau = {0.0, 0.6, 0.5, 1.0};
    CHECK(check_representation(bad_tau, x).has_value());
    auto off_graph = rep;
    off_graph.chi = {0.0, 0.2, 1.0, 1.0};
    CHECK(check_representation(off_graph, x).has_value());
    auto bad_end = rep;
    bad_end.tau.back() = 0.9;
    CHECK(check_representation(bad_end, x).has_value());
}

TEST_CASE("time reversal") {
    const auto r = time_reverse(unit_step());
    CHECK(r(0.0) == 1.0);
    CHECK(r(0.49) == 1.0);
    CHECK(r(0.5) == 0.0);
    CHECK(r(1.0) == 0.0);
    CHECK(r.has_negative_jump());
    CHECK(time_reverse(CadlagFn::constant(4.0))(0.3) == 4.0);

    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const auto w = random_walk(3 + rng.below(20), rng);
        const auto p = static_cast<std::int64_t>(w.steps());
        const auto x = CadlagFn::from(time_scaled(w, Interpolation::constant));
        const auto xr = time_reverse(x);
        for (std::int64_t k = 0; k < p; ++k) {
            const double t = (k + 0.5) / static_cast<double>(p);
            CHECK(xr(t) == w[static_cast<std::size_t>(p - 1 - k)]);
        }
        const auto back = time_reverse(xr);
        // off the knots: 1 - (1 - t) need not round back to t
        for (int i = 0; i < 200; ++i) {
            const double t = (i + 0.37) / 200.0;
            CHECK(back(t) == x(t));
            CHECK(back.left_limit(t) == x.left_limit(t));
        }
        // positive jumps inside (0,1) become negative jumps; a jump at 1 has no image
        CHECK(xr.has_negative_jump() == [&] {
            for (auto j : x.jumps())
                if (x.times()[j] < 1.0 && x.right_values()[j] > x.left_values()[j]) return true;
            return false;
        }());
    }
}

TEST_CASE("modulus of continuity") {
    CHECK(modulus_of_continuity(unit_step(), 0.1) == 1.0);
    CHECK(modulus_of_continuity(unit_step(), 1e-9) == 1.0);
    CHECK(modulus_of_continuity(identity(), 0.1) == doctest::Approx(0.1));
    // height walk of the seven-vertex tree ends with a step of -2
    const auto h = CadlagFn::from(time_scaled(height_walk(testing_support::seven_tree()), Interpolation::linear));
    CHECK(modulus_of_continuity(h, 1.0 / 7.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(modulus_of_continuity(h, 0.0), InvalidArgument);
    CHECK_THROWS_AS(modulus_of_continuity(h, -1.0), InvalidArgument);

    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const auto x = random_fn(rng);
        const double delta = 0.02 + 0.2 * rng.uniform();
        const double omega = modulus_of_continuity(x, delta);
        double sampled = 0.0;
        const int M = 400;
        for (int i = 0; i <= M; ++i)
            for (int j = i; j <= M && (j - i) < delta * M; ++j)
                sampled = std::max(sampled, std::abs(x(i / double(M)) - x(j / double(M))));
        CHECK(sampled <= omega + 1e-12);
        CHECK(omega <= x.sup() - x.inf() + 1e-12);
    }
    const auto rep = parametric_representation(unit_step());
    CHECK(modulus_of_continuity(rep, 0.5) == doctest::Approx(1.0));
    CHECK(modulus_of_continuity(rep, 0.25) == doctest::Approx(0.5));
}

TEST_CASE("M1 bound frozen values") {
    const auto step = unit_step();
    CHECK(m1_upper(step, step, 256).value == 0.0);
    const double ten[] = {0.0925, 0.0910156, 0.0910156, 0.0909229};
    const double hundred[] = {0.009925, 0.009925, 0.00990557, 0.00990557};
    const std::size_t grids[] = {64, 256, 1024, 4096};
    for (int i = 0; i < 4; ++i) {
        CHECK(m1_upper(step, ramp(0.1), grids[i]).value == doctest::Approx(ten[i]).epsilon(1e-5));
        CHECK(m1_upper(step, ramp(0.01), grids[i]).value == doctest::Approx(hundred[i]).epsilon(1e-5));
        CHECK(m1_upper(step, ramp(0.1), grids[i]).value <= 0.1 + 1.0 / grids[i]);
    }
}

TEST_CASE("M1 bound for linear against constant views") {
    Walk w;
    w.values = {0};
    for (int i = 0; i < 20; ++i) w.values.push_back(w.values.back() + ((i * 7) % 3 == 0 ? -1 : 1));
    const auto a = CadlagFn::from(time_scaled(w, Interpolation::linear));
    const auto b = CadlagFn::from(time_scaled(w, Interpolation::constant));
    for (std::size_t N : {64, 256, 1024, 4096}) CHECK(m1_upper(a, b, N).value == doctest::Approx(1.0 / 21).epsilon(1e-5));

    // grid cells have equal L∞ arc length, so the slack is two cells of the longer trace
    Rng rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        const auto walk = random_walk(5 + rng.below(100), rng);
        const double p = static_cast<double>(walk.steps());
        const double lambda = 1.0 / std::sqrt(p);
        const auto lin = CadlagFn::from(time_scaled(walk, Interpolation::linear, lambda));
        const auto con = CadlagFn::from(time_scaled(walk, Interpolation::constant, lambda));
        double length = 0.0;
        for (std::size_t k = 0; k + 1 < walk.values.size(); ++k)
            length += 1.0 / p + lambda * std::abs(walk[k + 1] - walk[k]);
        const std::size_t N = 4096;
        CHECK(m1_upper(lin, con, N).value <= 1.0 / p + 2.0 * length / N);
    }
}

TEST_CASE("M1 bound on a long walk with certificate") {
    Walk big;
    big.values = {0};
    unsigned s = 1;
    for (int i = 0; i < 200'000; ++i) {
        s = s * 1103515245u + 12345u;
        big.values.push_back(big.values.back() + (((s >> 16) & 1) ? 1 : -1));
    }
    const auto A = CadlagFn::from(time_scaled(big, Interpolation::linear, 0.002));
    const auto B = CadlagFn::from(time_scaled(big, Interpolation::constant, 0.002));
    const auto r = m1_upper(A, B, 4096, true);
    CHECK(r.value == doctest::Approx(4.99e-6).epsilon(1e-2));
    CHECK(r.value <= 1.0 / 200'000 + 1e-12);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->path.size() == 4097);
    CHECK(r.certificate->grid == 4096);
}

TEST_CASE("M1 bound is attained by its certificate") {
    Rng rng(25);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = random_fn(rng), y = random_fn(rng);
        const auto p = parametric_representation(x), q = parametric_representation(y);
        const auto r = m1_upper(p, q, 512, true);
        REQUIRE(r.certificate.has_value());
        const auto& path = r.certificate->path;
        CHECK(path.front() == std::pair<double, double>{0.0, 0.0});
        CHECK(path.back() == std::pair<double, double>{1.0, 1.0});
        double cost = 0.0;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i > 0) {
                CHECK(path[i - 1].first <= path[i].first);
                CHECK(path[i - 1].second <= path[i].second);
            }
            const auto [u, v] = path[i];
            cost = std::max({cost, std::abs(p.chi_at(u) - q.chi_at(v)), std::abs(p.tau_at(u) - q.tau_at(v))});
        }
        CHECK(cost <= r.value + 1e-12);
        CHECK(m1_upper(x, y, 512).value == r.value);
    }
}

TEST_CASE("M1 bound properties on random functions") {
    Rng rng(26);
    for (int trial = 0; trial < 25; ++trial) {
        const auto x = random_fn(rng), y = random_fn(rng), z = random_fn(rng);
        const std::size_t N = 256;
        const double xy = m1_upper(x, y, N).value, yz = m1_upper(y, z, N).value, xz = m1_upper(x, z, N).value;
        CHECK(xz <= xy + yz + 2.0 / N);
        CHECK(m1_upper(y, x, N).value == doctest::Approx(xy).epsilon(1e-12));
        // the endpoints are coupled to each other
        CHECK(xy >= std::max(std::abs(x(0) - y(0)), std::abs(x(1) - y(1))) - 1e-12);
        // nested grids never increase the bound
        double previous = m1_upper(x, y, 64).value;
        for (std::size_t M : {128, 256, 512, 1024, 2048}) {
            const double v = m1_upper(x, y, M).value;
            CHECK(v <= previous + 1e-12);
            previous = v;
        }
    }
}

TEST_CASE("M1 bound against constructed lower bounds") {
    // any representation of a constant stays at that level, so d = max gap to the trace
    CHECK(m1_upper(unit_step(), CadlagFn::constant(0.5), 256).value == doctest::Approx(0.5));
    CHECK(m1_upper(unit_step(), CadlagFn::constant(0.3), 256).value == doctest::Approx(0.7));
    // two opposite unit jumps cannot be matched closer than half the jump
    const auto down = CadlagFn::step({0.0, 0.5}, {1.0, 0.0});
    CHECK(m1_upper(unit_step(), down, 1024).value >= 1.0 - 1e-12);
    CHECK_THROWS_AS(m1_upper(unit_step(), unit_step(), 1), InvalidArgument);
}

TEST_CASE("cadlag CSV round trip") {
    const auto x = CadlagFn::step({0.0, 0.25, 0.75}, {0.0, 2.0, -1.0});
    std::stringstream ss;
    write_cadlag_csv(ss, x);
    CHECK(ss.str().rfind("#schema,rotree.cadlag.v1\n", 0) == 0);
    const auto y = read_cadlag_csv(ss);
    CHECK(y.times() == x.times());
    CHECK(y.left_values() == x.left_values());
    CHECK(y.right_values() == x.right_values());
    CHECK(y.kinds() == x.kinds());
    std::stringstream bad("#schema,rotree.cadlag.v1\nt,left_value,right_value,segment_kind\n0,0,0,wavy\n1,0,0,constant\n");
    CHECK_THROWS_AS(read_cadlag_csv(bad), ParseError);
}
