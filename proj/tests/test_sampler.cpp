#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rotree/sampler.hpp"
#include "rotree/stats.hpp"
#include "support.hpp"

using namespace rotree;

namespace {

// chi-square p-value of draws against the brute-force conditional law
double shape_p_value(const OffspringLaw& law, std::size_t n, std::size_t draws, SamplerMethod method,
                     std::uint64_t seed) {
    const auto exact = testing_support::conditional_law(law, n);
    std::map<std::vector<int>, double> seen;
    Rng rng(seed, n);
    SamplerOptions opt;
    opt.method = method;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto t = sample_conditioned(law, n, rng, opt);
        REQUIRE(t.size() == n);
        REQUIRE(exact.count(t.degrees()) == 1);
        seen[t.degrees()] += 1.0;
    }
    std::vector<double> obs, prob;
    for (const auto& [shape, p] : exact) {
        obs.push_back(seen[shape]);
        prob.push_back(p);
    }
    return chi_square(obs, prob).p_value;
}

}  // namespace

TEST_CASE("laws are critical probability distributions") {
    for (const auto& law : testing_support::all_laws()) {
        CAPTURE(law.name());
        double total = 0.0, mean = 0.0;
        // the stable law is summed separately below
        const bool stable = law.kind() == LawKind::stable_zipf;
        const std::int64_t top = stable ? 0 : (law.max_support() >= 0 ? law.max_support() : 200);
        for (std::int64_t k = 0; k <= top; ++k) {
            total += law.pmf(k);
            mean += static_cast<double>(k) * law.pmf(k);
        }
        CHECK(law.mean() == doctest::Approx(1.0).epsilon(1e-12));
        if (!stable) {
            CHECK(std::abs(total - 1.0) < 1e-9);
            CHECK(std::abs(mean - 1.0) < 1e-9);
        }
        CHECK(law.pmf(-1) == 0.0);
    }
    CHECK(OffspringLaw::geometric().variance() == doctest::Approx(2.0));
    CHECK(OffspringLaw::binary().variance() == doctest::Approx(1.0));
    CHECK(OffspringLaw::poisson().variance() == doctest::Approx(1.0));
    CHECK(std::isinf(make_stable_law(1.5).variance()));
    CHECK(OffspringLaw::binary().max_support() == 2);
    CHECK(OffspringLaw::binary().support_gcd() == 2);
    CHECK(OffspringLaw::geometric().support_gcd() == 1);
}

TEST_CASE("stable law mean by an independent sum") {
    for (double alpha : {1.2, 1.5, 1.8}) {
        CAPTURE(alpha);
        const auto law = make_stable_law(alpha);
        REQUIRE(law.tail_exponent().has_value());
        CHECK(*law.tail_exponent() == alpha);
        const std::int64_t K = 1'000'000;
        double total = law.pmf(0), mean = 0.0;
        for (std::int64_t k = 1; k <= K; ++k) {
            total += law.pmf(k);
            mean += static_cast<double>(k) * law.pmf(k);
        }
        // the rest up to k_max = 1e8 by the midpoint integral of c x^{-1-α} and c x^{-α}
        const double c = law.pmf(1);
        const double a = K + 0.5, b = 1e8 + 0.5;
        total += c * (std::pow(a, -alpha) - std::pow(b, -alpha)) / alpha;
        mean += c * (std::pow(a, 1 - alpha) - std::pow(b, 1 - alpha)) / (alpha - 1);
        CHECK(std::abs(total - 1.0) < 1e-9);
        CHECK(std::abs(mean - 1.0) < 1e-9);
        CHECK(law.pmf(100'000'001) == 0.0);
        CHECK(law.pmf(2) / law.pmf(1) == doctest::Approx(std::pow(2.0, -1 - alpha)));
    }
    CHECK_THROWS_AS(make_stable_law(1.0), InvalidArgument);
    CHECK_THROWS_AS(make_stable_law(2.0), InvalidArgument);
    CHECK_THROWS_AS(make_stable_law(std::nan("")), InvalidArgument);
}

TEST_CASE("stable survival slope") {
    const auto law = make_stable_law(1.5);
    std::vector<double> x, y;
    for (double k = 10; k <= 1e4; k *= 1.25) {
        const auto kk = static_cast<std::int64_t>(k);
        x.push_back(std::log(static_cast<double>(kk)));
        y.push_back(std::log(law.tail_mass(kk)));
    }
    const auto fit = ols(x, y);
    CHECK(std::abs(fit.slope + 1.5) < 0.1);
}

TEST_CASE("partial zeta sums") {
    double direct = 0.0;
    for (std::int64_t k = 1; k <= 200'000; ++k) direct += std::pow(static_cast<double>(k), -2.5);
    CHECK(zeta_partial(2.5, 200'000) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(zeta_partial(2.0, 100'000'000) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1e-8).epsilon(1e-12));
    CHECK(zeta_partial(2.0, 3) == doctest::Approx(1.0 + 0.25 + 1.0 / 9));
}

TEST_CASE("law parsing") {
    CHECK(parse_law("geom").kind() == LawKind::geometric);
    CHECK(parse_law("binary").kind() == LawKind::binary);
    CHECK(parse_law("poisson").kind() == LawKind::poisson);
    const auto s = parse_law("stable:1.7");
    CHECK(s.kind() == LawKind::stable_zipf);
    CHECK(s.alpha() == 1.7);
    CHECK_THROWS_AS(parse_law("stable:2.5"), InvalidArgument);
    CHECK_THROWS_AS(parse_law("stable:"), InvalidArgument);
    CHECK_THROWS_AS(parse_law("uniform"), InvalidArgument);
    CHECK_THROWS_AS(OffspringLaw::custom({0.2, 0.2, 0.6}), InvalidArgument);
    CHECK(OffspringLaw::custom({0.25, 0.5, 0.25}).mean() == doctest::Approx(1.0));
}

TEST_CASE("admissible sizes") {
    CHECK(admissible(OffspringLaw::binary(), 3));
    CHECK_FALSE(admissible(OffspringLaw::binary(), 4));
    CHECK(admissible(OffspringLaw::binary(), 1));
    CHECK(admissible(OffspringLaw::geometric(), 4));
    CHECK(admissible(make_stable_law(1.5), 2));
    const auto three = OffspringLaw::custom({2.0 / 3, 0.0, 0.0, 1.0 / 3});
    CHECK(admissible(three, 4));
    CHECK_FALSE(admissible(three, 5));
    Rng rng(1);
    CHECK_THROWS_AS(sample_conditioned(OffspringLaw::binary(), 4, rng), InadmissibleSizeError);
    CHECK_THROWS_AS(sample_conditioned(OffspringLaw::geometric(), 0, rng), InadmissibleSizeError);
}

TEST_CASE("binary law at three vertices is always the cherry") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_conditioned(OffspringLaw::binary(), 3, rng).degrees() == std::vector<int>{2, 0, 0});
}

TEST_CASE("geometric law at three and four vertices") {
    const auto law = OffspringLaw::geometric();
    const auto three = testing_support::conditional_law(law, 3);
    REQUIRE(three.size() == 2);
    for (const auto& [shape, p] : three) CHECK(p == doctest::Approx(0.5));
    CHECK(shape_p_value(law, 3, 10'000, SamplerMethod::automatic, 1) > 1e-3);
    const auto four = testing_support::conditional_law(law, 4);
    CHECK(four.size() == 5);
    CHECK(shape_p_value(law, 4, 20'000, SamplerMethod::automatic, 2) > 1e-3);
}

TEST_CASE("conditional shape frequencies for every law") {
    for (const auto& law : testing_support::all_laws()) {
        for (std::size_t n = 2; n <= 6; ++n) {
            if (!admissible(law, n)) continue;
            CAPTURE(law.name());
            CAPTURE(n);
            CHECK(shape_p_value(law, n, 20'000, SamplerMethod::automatic, 10 + n) > 1e-3);
            CHECK(shape_p_value(law, n, 5'000, SamplerMethod::rejection, 20 + n) > 1e-3);
        }
    }
}

TEST_CASE("sizes and reproducibility") {
    for (const auto& law : testing_support::all_laws()) {
        for (std::size_t n : {1, 7, 101, 5001}) {
            const auto a = sample_conditioned(law, n, 77);
            const auto b = sample_conditioned(law, n, 77);
            CHECK(a.size() == n);
            CHECK(a == b);
        }
    }
    CHECK_FALSE(sample_conditioned(OffspringLaw::geometric(), 1000, 1) ==
                sample_conditioned(OffspringLaw::geometric(), 1000, 2));
    Rng a(3, 0), b(3, 1);
    CHECK(a.next() != b.next());
}

TEST_CASE("rng primitives") {
    Rng rng(9);
    double sum = 0.0;
    std::vector<double> counts(6, 0.0);
    for (int i = 0; i < 60'000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        counts[rng.below(6)] += 1.0;
    }
    CHECK(sum / 60'000 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(chi_square(counts, std::vector<double>(6, 1.0 / 6)).p_value > 1e-3);
    double bsum = 0.0;
    for (int i = 0; i < 2000; ++i) bsum += static_cast<double>(rng.binomial(1000, 0.3));
    CHECK(bsum / 2000 == doctest::Approx(300.0).epsilon(0.01));
    CHECK(rng.binomial(10, 0.0) == 0);
    CHECK(rng.binomial(10, 1.0) == 10);
}

TEST_CASE("cycle lemma and weights") {
    const std::vector<int> bridge{0, 0, 3, 0, 1, 0, 2};
    const auto degrees = cycle_lemma(bridge);
    const auto t = PlaneTree::from_degrees(degrees);
    CHECK(t.size() == 7);
    bool is_rotation = false;
    for (std::size_t s = 0; s < bridge.size(); ++s) {
        std::vector<int> r(bridge.begin() + static_cast<std::ptrdiff_t>(s), bridge.end());
        r.insert(r.end(), bridge.begin(), bridge.begin() + static_cast<std::ptrdiff_t>(s));
        is_rotation = is_rotation || r == degrees;
    }
    CHECK(is_rotation);
    CHECK_THROWS_AS(cycle_lemma({1, 1}), InvalidArgument);
    CHECK(bgw_weight(OffspringLaw::geometric(), testing_support::seven_tree()) == doctest::Approx(std::pow(0.5, 13)));
    CHECK(bgw_weight(OffspringLaw::binary(), testing_support::seven_tree()) == 0.0);
}

TEST_CASE("sample_above draws from the conditioned tail") {
    for (const auto& law : testing_support::all_laws()) {
        if (law.max_support() >= 0 && law.max_support() <= 3) continue;
        Rng rng(4);
        for (int i = 0; i < 200; ++i) CHECK(law.sample_above(3, rng) > 3);
    }
    const auto law = make_stable_law(1.5);
    CHECK(law.tail_mass(0) == doctest::Approx(1.0));
    CHECK(law.tail_mass(1) == doctest::Approx(1.0 - law.pmf(0)));
}
