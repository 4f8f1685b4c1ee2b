#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rotree/tree_core.hpp"

namespace rotree {

/*
 * Deterministic generator: mt19937_64 seeded through splitmix64 from (seed, stream).
 * Uniforms and bounded integers are computed here rather than by <random>
 * distributions so that draws are identical across standard libraries.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }
    double uniform();                       // [0,1), 53 bits
    double uniform_open();                  // (0,1)
    std::uint64_t below(std::uint64_t bound);  // uniform on [0, bound), unbiased
    std::int64_t binomial(std::int64_t trials, double p);
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class LawKind { geometric, binary, poisson, stable_zipf, custom };

/*
 * Critical offspring distribution. geometric is (1/2)^{k+1}, binary is (δ0+δ2)/2,
 * poisson has mean 1, stable_zipf(α) is μ(k) = c k^{-1-α} for 1 <= k <= k_max with
 * μ(0) fixed by criticality.
 */
class OffspringLaw {
public:
    static OffspringLaw geometric();
    static OffspringLaw binary();
    static OffspringLaw poisson();
    static OffspringLaw stable_zipf(double alpha, std::int64_t k_max = 100'000'000);
    // finite support pmf; must be critical
    static OffspringLaw custom(std::vector<double> pmf);

    LawKind kind() const { return kind_; }
    std::string name() const;
    double pmf(std::int64_t k) const;
    double mean() const;
    double variance() const;  // +inf for stable_zipf
    std::optional<double> tail_exponent() const;
    double alpha() const { return alpha_; }
    std::int64_t max_support() const;  // largest k with μ(k) > 0, -1 when unbounded
    std::int64_t support_gcd() const;  // gcd of the positive support points
    double max_pmf() const { return max_pmf_; }

    std::int64_t sample(Rng& rng) const;
    // P(X >= k) and a draw from μ( . | X > k)
    double tail_mass(std::int64_t k) const;
    std::int64_t sample_above(std::int64_t k, Rng& rng) const;
    // stable: P(X = k | X >= k) for k <= 32, empty for other kinds
    const std::vector<double>& split_table() const { return split_; }

private:
    struct Alias;
    std::int64_t pareto_floor(Rng& rng, std::int64_t from) const;
    LawKind kind_ = LawKind::geometric;
    double alpha_ = 0.0;
    double c_ = 0.0;  // stable normalisation
    double z_ = 0.0;  // stable: Σ_{k<=k_max} k^{-1-α}
    std::int64_t k_max_ = -1;
    std::int64_t k0_ = 0;  // stable: alias table covers [0, k0)
    double max_pmf_ = 0.0;
    std::vector<double> pmf_;  // custom pmf, or stable pmf on [0, k0)
    std::vector<double> split_;
    std::shared_ptr<const Alias> alias_;
};

OffspringLaw make_stable_law(double alpha);

// "geom", "binary", "poisson", "stable:1.5"
OffspringLaw parse_law(const std::string& spec);

// some n values of the law can sum to n - 1
bool admissible(const OffspringLaw& law, std::size_t n);

// Σ_{k=1}^{K} k^{-s}, with an Euler-Maclaurin tail beyond 10^4 terms
double zeta_partial(double s, std::int64_t K);

enum class SamplerMethod {
    automatic,  // closed-form conditional draws when the law has one, else rejection
    rejection,
};

struct SamplerOptions {
    SamplerMethod method = SamplerMethod::automatic;
    std::uint64_t max_attempts = 10'000'000;
};

// exact draw from BGW_μ( . | #T = n)
PlaneTree sample_conditioned(const OffspringLaw& law, std::size_t n, Rng& rng, const SamplerOptions& options = {});
PlaneTree sample_conditioned(const OffspringLaw& law, std::size_t n, std::uint64_t seed,
                             const SamplerOptions& options = {});

// values x_1..x_n summing to n - 1, rotated into the unique Lukasiewicz excursion
std::vector<int> cycle_lemma(const std::vector<int>& bridge);

// Π μ(d_u), the unconditioned BGW probability of a tree
double bgw_weight(const OffspringLaw& law, const PlaneTree& tree);

}  // namespace rotree
