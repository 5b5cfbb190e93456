#pragma once

#include <cstdint>
#include <vector>

namespace relsys {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
/// a > 0, x >= 0. Series for x < a + 1, continued fraction otherwise.
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution: P(X > statistic) with df
/// degrees of freedom.
double chi_square_p_value(double statistic, int df);

struct ChiSquareFit {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    int bins = 0;
};

/// Goodness of fit of observed nonnegative-integer counts against
/// Poisson(mean). counts[k] is the number of observations equal to k.
/// Adjacent bins are pooled until every expected count is >= 5.
ChiSquareFit poisson_chi_square(const std::vector<std::int64_t>& counts, double mean);

}  // namespace relsys
