#include "rotree/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rotree {

__extension__ typedef unsigned __int128 u128;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream * 0xd1b54a32d192ed03ULL + 1))) {}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
    // (k + 1/2) / 2^53 never hits 0 or 1
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("Rng::below(0)");
    // Lemire's multiply-and-reject
    u128 m = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<u128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t Rng::binomial(std::int64_t trials, double p) {
    if (trials <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    return std::binomial_distribution<std::int64_t>(trials, p)(engine_);
}

/* ------------------------------------------------------------------ alias table */

struct OffspringLaw::Alias {
    std::vector<double> prob;
    std::vector<std::int64_t> other;

    explicit Alias(const std::vector<double>& weights) {
        const std::size_t m = weights.size();
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        prob.assign(m, 0.0);
        other.assign(m, 0);
        std::vector<double> scaled(m);
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < m; ++i) {
            scaled[i] = weights[i] * static_cast<double>(m) / total;
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            prob[s] = scaled[s];
            other[s] = static_cast<std::int64_t>(l);
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::size_t i : large) prob[i] = 1.0;
        for (std::size_t i : small) prob[i] = 1.0;  // rounding leftovers
    }

    std::int64_t draw(Rng& rng) const {
        const auto i = static_cast<std::size_t>(rng.below(prob.size()));
        return rng.uniform() < prob[i] ? static_cast<std::int64_t>(i) : other[i];
    }
};

/* ------------------------------------------------------------------------ laws */

double zeta_partial(double s, std::int64_t K) {
    constexpr std::int64_t direct = 10000;
    long double sum = 0.0L;
    const std::int64_t head = std::min(K, direct);
    for (std::int64_t k = head; k >= 1; --k) sum += std::pow(static_cast<long double>(k), -s);
    if (K <= direct) return static_cast<double>(sum);
    // Euler-Maclaurin for Σ_{k=a}^{K} f(k), f(x) = x^{-s}, then drop f(a)
    const long double a = direct, b = static_cast<long double>(K);
    auto f = [s](long double x) { return std::pow(x, -s); };
    auto f1 = [s](long double x) { return -s * std::pow(x, -s - 1); };
    auto f3 = [s](long double x) { return -s * (s + 1) * (s + 2) * std::pow(x, -s - 3); };
    const long double integral = (std::pow(a, 1 - s) - std::pow(b, 1 - s)) / (s - 1);
    long double tail = integral + (f(a) + f(b)) / 2 + (f1(b) - f1(a)) / 12 - (f3(b) - f3(a)) / 720;
    tail -= f(a);
    return static_cast<double>(sum + tail);
}

OffspringLaw OffspringLaw::geometric() {
    OffspringLaw law;
    law.kind_ = LawKind::geometric;
    law.max_pmf_ = 0.5;
    return law;
}

OffspringLaw OffspringLaw::binary() {
    OffspringLaw law;
    law.kind_ = LawKind::binary;
    law.k_max_ = 2;
    law.max_pmf_ = 0.5;
    return law;
}

OffspringLaw OffspringLaw::poisson() {
    OffspringLaw law;
    law.kind_ = LawKind::poisson;
    law.max_pmf_ = std::exp(-1.0);
    return law;
}

OffspringLaw OffspringLaw::stable_zipf(double alpha, std::int64_t k_max) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw InvalidArgument("stable law needs 1 < alpha < 2, got " + std::to_string(alpha));
    }
    if (k_max < 2) throw InvalidArgument("stable law needs k_max >= 2");
    OffspringLaw law;
    law.kind_ = LawKind::stable_zipf;
    law.alpha_ = alpha;
    law.k_max_ = k_max;
    // Σ k μ(k) = c Σ k^{-α} = 1 fixes c; μ(0) takes the remaining mass
    law.c_ = 1.0 / zeta_partial(alpha, k_max);
    law.z_ = zeta_partial(1.0 + alpha, k_max);
    const double p0 = 1.0 - law.c_ * law.z_;
    law.k0_ = std::min<std::int64_t>(k_max + 1, 1 << 16);
    law.pmf_.resize(law.k0_);
    law.pmf_[0] = p0;
    for (std::int64_t k = 1; k < law.k0_; ++k) law.pmf_[k] = law.c_ * std::pow(static_cast<double>(k), -1.0 - alpha);
    std::vector<double> weights = law.pmf_;
    if (law.k0_ <= k_max) {
        const double tail = law.c_ * (law.z_ - zeta_partial(1.0 + alpha, law.k0_ - 1));
        weights.push_back(tail);
    }
    law.alias_ = std::make_shared<const Alias>(weights);
    law.max_pmf_ = std::max(p0, law.c_);
    const std::int64_t k1 = std::min<std::int64_t>(32, law.max_support());
    law.split_.resize(static_cast<std::size_t>(k1) + 1);
    for (std::int64_t k = 0; k <= k1; ++k) law.split_[k] = std::min(1.0, law.pmf(k) / law.tail_mass(k));
    return law;
}

OffspringLaw OffspringLaw::custom(std::vector<double> pmf) {
    if (pmf.size() < 2) throw InvalidArgument("custom law needs at least two support points");
    double total = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        if (!(pmf[k] >= 0.0)) throw InvalidArgument("negative probability in custom law");
        total += pmf[k];
        mean += static_cast<double>(k) * pmf[k];
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("custom pmf does not sum to 1");
    if (std::abs(mean - 1.0) > 1e-9) throw InvalidArgument("custom law is not critical");
    if (pmf[1] > 1.0 - 1e-12) throw InvalidArgument("custom law is the Dirac mass at 1");
    while (pmf.back() == 0.0) pmf.pop_back();
    OffspringLaw law;
    law.kind_ = LawKind::custom;
    law.k_max_ = static_cast<std::int64_t>(pmf.size()) - 1;
    law.max_pmf_ = *std::max_element(pmf.begin(), pmf.end());
    law.alias_ = std::make_shared<const Alias>(pmf);
    law.pmf_ = std::move(pmf);
    return law;
}

OffspringLaw make_stable_law(double alpha) { return OffspringLaw::stable_zipf(alpha); }

std::string OffspringLaw::name() const {
    switch (kind_) {
        case LawKind::geometric: return "geom";
        case LawKind::binary: return "binary";
        case LawKind::poisson: return "poisson";
        case LawKind::stable_zipf: {
            std::string a = std::to_string(alpha_);
            a.erase(a.find_last_not_of('0') + 1);
            if (a.back() == '.') a.pop_back();
            return "stable:" + a;
        }
        case LawKind::custom: return "custom";
    }
    return "custom";
}

double OffspringLaw::pmf(std::int64_t k) const {
    if (k < 0) return 0.0;
    switch (kind_) {
        case LawKind::geometric: return std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(k + 1, 2000)));
        case LawKind::binary: return (k == 0 || k == 2) ? 0.5 : 0.0;
        case LawKind::poisson: return std::exp(-1.0 - std::lgamma(static_cast<double>(k) + 1.0));
        case LawKind::stable_zipf:
            if (k < k0_) return pmf_[k];
            if (k > k_max_) return 0.0;
            return c_ * std::pow(static_cast<double>(k), -1.0 - alpha_);
        case LawKind::custom: return k <= k_max_ ? pmf_[k] : 0.0;
    }
    return 0.0;
}

double OffspringLaw::mean() const {
    switch (kind_) {
        case LawKind::geometric:
        case LawKind::binary:
        case LawKind::poisson: return 1.0;
        case LawKind::stable_zipf: return c_ * zeta_partial(alpha_, k_max_);
        case LawKind::custom: {
            double m = 0.0;
            for (std::size_t k = 0; k < pmf_.size(); ++k) m += static_cast<double>(k) * pmf_[k];
            return m;
        }
    }
    return 1.0;
}

double OffspringLaw::variance() const {
    switch (kind_) {
        case LawKind::geometric: return 2.0;
        case LawKind::binary:
        case LawKind::poisson: return 1.0;
        case LawKind::stable_zipf: return std::numeric_limits<double>::infinity();
        case LawKind::custom: {
            double m2 = 0.0;
            for (std::size_t k = 0; k < pmf_.size(); ++k) m2 += static_cast<double>(k * k) * pmf_[k];
            const double m = mean();
            return m2 - m * m;
        }
    }
    return 0.0;
}

std::optional<double> OffspringLaw::tail_exponent() const {
    if (kind_ == LawKind::stable_zipf) return alpha_;
    return std::nullopt;
}

std::int64_t OffspringLaw::max_support() const {
    switch (kind_) {
        case LawKind::geometric:
        case LawKind::poisson: return -1;
        default: return k_max_;
    }
}

std::int64_t OffspringLaw::support_gcd() const {
    switch (kind_) {
        case LawKind::binary: return 2;
        case LawKind::custom: {
            std::int64_t g = 0;
            for (std::size_t k = 1; k < pmf_.size(); ++k) {
                if (pmf_[k] > 0.0) g = std::gcd(g, static_cast<std::int64_t>(k));
            }
            return g;
        }
        default: return 1;
    }
}

std::int64_t OffspringLaw::sample(Rng& rng) const {
    switch (kind_) {
        case LawKind::geometric: {
            // failures before the first success of a fair coin = trailing zero bits
            std::int64_t k = 0;
            while (true) {
                const std::uint64_t x = rng.next();
                if (x != 0) return k + __builtin_ctzll(x);
                k += 64;
            }
        }
        case LawKind::binary: return (rng.next() >> 63) ? 2 : 0;
        case LawKind::poisson: {
            const double u = rng.uniform();
            double p = std::exp(-1.0), cdf = p;
            std::int64_t k = 0;
            while (u >= cdf && k < 40) {
                ++k;
                p /= static_cast<double>(k);
                cdf += p;
            }
            return k;
        }
        case LawKind::stable_zipf: {
            const std::int64_t k = alias_->draw(rng);
            return k < k0_ ? k : pareto_floor(rng, k0_);
        }
        case LawKind::custom: return alias_->draw(rng);
    }
    return 0;
}

std::int64_t OffspringLaw::pareto_floor(Rng& rng, std::int64_t from) const {
    // floor of a Pareto variable on [from, k_max + 1), thinned to k^{-1-α}
    const double a = alpha_;
    const double lo = std::pow(static_cast<double>(from), -a);
    const double hi = std::pow(static_cast<double>(k_max_) + 1.0, -a);
    const double bound = std::pow(1.0 + 1.0 / static_cast<double>(from), 1.0 + a);
    while (true) {
        const double x = std::pow(lo - rng.uniform() * (lo - hi), -1.0 / a);
        const auto j = static_cast<std::int64_t>(std::floor(x));
        if (j < from || j > k_max_) continue;
        const double dj = static_cast<double>(j);
        // ∫_j^{j+1} x^{-1-α} dx = j^{-α} (1 - (1 + 1/j)^{-α}) / α
        const double cell = -std::pow(dj, -a) * std::expm1(-a * std::log1p(1.0 / dj)) / a;
        if (rng.uniform() * bound * cell < std::pow(dj, -1.0 - a)) return j;
    }
}

double OffspringLaw::tail_mass(std::int64_t k) const {
    if (k <= 0) return 1.0;
    switch (kind_) {
        case LawKind::geometric: return std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(k, 2000)));
        case LawKind::stable_zipf:
            if (k > k_max_) return 0.0;
            return c_ * (z_ - zeta_partial(1.0 + alpha_, k - 1));
        default: {
            double below = 0.0;
            for (std::int64_t j = 0; j < k; ++j) below += pmf(j);
            return std::max(0.0, 1.0 - below);
        }
    }
}

std::int64_t OffspringLaw::sample_above(std::int64_t k, Rng& rng) const {
    if (kind_ == LawKind::stable_zipf && k >= 0) {
        if (k >= k_max_) throw InvalidArgument("no mass above k_max");
        return pareto_floor(rng, k + 1);
    }
    if (max_support() >= 0 && k >= max_support()) throw InvalidArgument("no mass above the support");
    while (true) {
        const std::int64_t v = sample(rng);
        if (v > k) return v;
    }
}

OffspringLaw parse_law(const std::string& spec) {
    if (spec == "geom" || spec == "geometric") return OffspringLaw::geometric();
    if (spec == "binary") return OffspringLaw::binary();
    if (spec == "poisson") return OffspringLaw::poisson();
    if (spec.rfind("stable:", 0) == 0) {
        double a = 0.0;
        try {
            std::size_t used = 0;
            a = std::stod(spec.substr(7), &used);
            if (used != spec.size() - 7) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad stable index in law '" + spec + "'");
        }
        return make_stable_law(a);
    }
    throw InvalidArgument("unknown law '" + spec + "' (geom, binary, poisson, stable:<alpha>)");
}

bool admissible(const OffspringLaw& law, std::size_t n) {
    if (n == 0) return false;
    return (static_cast<std::int64_t>(n) - 1) % law.support_gcd() == 0;
}

/* --------------------------------------------------------------------- sampling */

std::vector<int> cycle_lemma(const std::vector<int>& bridge) {
    const std::size_t n = bridge.size();
    std::int64_t s = 0, best = std::numeric_limits<std::int64_t>::max();
    std::size_t arg = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        s += bridge[k - 1] - 1;
        if (s < best) {
            best = s;
            arg = k;
        }
    }
    if (s != -1) throw InvalidArgument("cycle lemma needs values summing to n - 1");
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = bridge[(arg + i) % n];
    return out;
}

namespace {

// uniform m-subset of [0, N) in increasing order (selection sampling)
template <class Visit>
void select_subset(Rng& rng, std::uint64_t N, std::uint64_t m, Visit visit) {
    std::uint64_t chosen = 0;
    for (std::uint64_t t = 0; t < N && chosen < m; ++t) {
        if (rng.below(N - t) < m - chosen) {
            visit(t);
            ++chosen;
        }
    }
}

bool rejection_bridge(const OffspringLaw& law, std::size_t n, Rng& rng, std::vector<int>& x) {
    // n - 1 free draws; the last value is forced to close the sum and kept with
    // probability μ(r) / max μ, which leaves the product weight exact
    const auto target = static_cast<std::int64_t>(n) - 1;
    std::int64_t sum = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::int64_t v = law.sample(rng);
        sum += v;
        if (sum > target) return false;
        x[i] = static_cast<int>(v);
    }
    const std::int64_t r = target - sum;
    x[n - 1] = static_cast<int>(r);
    return rng.uniform() * law.max_pmf() < law.pmf(r);
}

/*
 * Same target as rejection_bridge, but the n - 1 free values are drawn as counts:
 * sequential binomials for the values 0..k1 and individual draws above k1.
 * The accepted multiset is shuffled, which keeps the sequence exchangeable.
 */
bool stable_bridge(const OffspringLaw& law, std::size_t n, Rng& rng, const std::vector<double>& split,
                   std::vector<int>& x) {
    const auto target = static_cast<std::int64_t>(n) - 1;
    const auto k1 = static_cast<std::int64_t>(split.size()) - 1;
    std::int64_t remaining = target, sum = 0;
    std::vector<std::int64_t> counts(split.size(), 0);
    for (std::int64_t k = 0; k <= k1 && remaining > 0; ++k) {
        counts[k] = rng.binomial(remaining, split[k]);
        remaining -= counts[k];
        sum += k * counts[k];
        if (sum > target) return false;
    }
    std::vector<std::int64_t> big;
    big.reserve(static_cast<std::size_t>(remaining));
    for (std::int64_t i = 0; i < remaining; ++i) {
        big.push_back(law.sample_above(k1, rng));
        sum += big.back();
        if (sum > target) return false;
    }
    const std::int64_t r = target - sum;
    if (!(rng.uniform() * law.max_pmf() < law.pmf(r))) return false;
    std::size_t pos = 0;
    for (std::int64_t k = 0; k <= k1; ++k) {
        for (std::int64_t i = 0; i < counts[k]; ++i) x[pos++] = static_cast<int>(k);
    }
    for (auto v : big) x[pos++] = static_cast<int>(v);
    x[pos++] = static_cast<int>(r);
    for (std::size_t i = n; i-- > 1;) std::swap(x[i], x[rng.below(i + 1)]);
    return true;
}

}  // namespace

PlaneTree sample_conditioned(const OffspringLaw& law, std::size_t n, Rng& rng, const SamplerOptions& options) {
    if (!admissible(law, n)) {
        throw InadmissibleSizeError("no tree with " + std::to_string(n) + " vertices under law " + law.name());
    }
    std::vector<int> x(n, 0);
    const bool closed_form = options.method == SamplerMethod::automatic &&
                             (law.kind() == LawKind::geometric || law.kind() == LawKind::poisson ||
                              law.kind() == LawKind::binary);
    if (closed_form && n > 1) {
        switch (law.kind()) {
            case LawKind::geometric: {
                // uniform weak composition of n-1 into n parts: n-1 bars among 2n-2 slots
                std::size_t box = 0;
                std::uint64_t last = 0;
                bool any = false;
                select_subset(rng, 2 * n - 2, n - 1, [&](std::uint64_t slot) {
                    const std::uint64_t start = any ? last + 1 : 0;
                    x[box++] = static_cast<int>(slot - start);
                    last = slot;
                    any = true;
                });
                x[n - 1] = static_cast<int>(2 * n - 3 - last);
                break;
            }
            case LawKind::poisson:
                for (std::size_t b = 0; b + 1 < n; ++b) ++x[rng.below(n)];
                break;
            case LawKind::binary:
                select_subset(rng, n, (n - 1) / 2, [&](std::uint64_t i) { x[i] = 2; });
                break;
            default: break;
        }
    } else if (options.method == SamplerMethod::automatic && law.kind() == LawKind::stable_zipf) {
        std::uint64_t attempt = 0;
        while (!stable_bridge(law, n, rng, law.split_table(), x)) {
            if (++attempt >= options.max_attempts) {
                throw SamplerBudgetError("no conditioned draw after " + std::to_string(attempt) + " attempts");
            }
        }
    } else {
        std::uint64_t attempt = 0;
        while (!rejection_bridge(law, n, rng, x)) {
            if (++attempt >= options.max_attempts) {
                throw SamplerBudgetError("no conditioned draw after " + std::to_string(attempt) + " attempts");
            }
        }
    }
    const auto degrees = cycle_lemma(x);
    return PlaneTree::from_degrees(std::span<const int>(degrees));
}

PlaneTree sample_conditioned(const OffspringLaw& law, std::size_t n, std::uint64_t seed,
                             const SamplerOptions& options) {
    Rng rng(seed);
    return sample_conditioned(law, n, rng, options);
}

double bgw_weight(const OffspringLaw& law, const PlaneTree& tree) {
    double w = 1.0;
    for (int d : tree.degrees()) w *= law.pmf(d);
    return w;
}

}  // namespace rotree
