#include "rotree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "rotree/errors.hpp"

namespace rotree {

ChiSquareResult chi_square(const std::vector<double>& observed, const std::vector<double>& probabilities,
                           double min_expected) {
    if (observed.size() != probabilities.size() || observed.empty()) {
        throw InvalidArgument("chi_square: observed and probabilities differ in length");
    }
    const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    const double mass = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    ChiSquareResult r;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = total * probabilities[i] / mass;
        if (e < min_expected) {
            pooled_obs += observed[i];
            pooled_exp += e;
            ++r.pooled_bins;
            continue;
        }
        r.statistic += (observed[i] - e) * (observed[i] - e) / e;
        ++bins;
    }
    if (pooled_exp > 0.0) {
        r.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++bins;
    } else if (pooled_obs > 0.0) {
        // mass observed where none is expected
        r.statistic = INFINITY;
    }
    r.dof = bins - 1;
    if (r.dof < 1) {
        r.p_value = r.statistic == 0.0 ? 1.0 : 0.0;
        return r;
    }
    if (!std::isfinite(r.statistic)) {
        r.p_value = 0.0;
        return r;
    }
    boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw InvalidArgument("ols needs two equal-length samples of size >= 2");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("ols: constant regressor");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.intercept - f.slope * x[i];
        rss += e * e;
    }
    f.slope_stderr = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
    f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
    return f;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw InvalidArgument("mean of an empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) throw InvalidArgument("median of an empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lo + hi) / 2.0;
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace rotree
