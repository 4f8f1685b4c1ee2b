#pragma once

#include <cstddef>
#include <vector>

namespace rotree {

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    std::size_t pooled_bins = 0;  // bins merged because their expectation was below the floor
};

/*
 * Pearson goodness of fit of observed counts against probabilities. Bins whose
 * expected count is below min_expected are pooled into one bin.
 */
ChiSquareResult chi_square(const std::vector<double>& observed, const std::vector<double>& probabilities,
                           double min_expected = 5.0);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
};

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);
double stddev(const std::vector<double>& v);  // sample standard deviation

}  // namespace rotree
