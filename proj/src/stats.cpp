#include "relsys/stats.hpp"

#include <cmath>
#include <limits>

#include "relsys/errors.hpp"

namespace relsys {

namespace {

// Lower regularized incomplete gamma by power series.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by modified Lentz continued fraction.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        throw DomainError("gamma_q: requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_p_value(double statistic, int df) {
    if (df < 1 || !(statistic >= 0.0)) {
        throw DomainError("chi_square_p_value: requires df >= 1 and statistic >= 0");
    }
    return gamma_q(0.5 * df, 0.5 * statistic);
}

ChiSquareFit poisson_chi_square(const std::vector<std::int64_t>& counts, double mean) {
    if (!(mean >= 0.0)) throw DomainError("poisson_chi_square: mean must be >= 0");
    std::int64_t n = 0;
    for (auto c : counts) {
        if (c < 0) throw DomainError("poisson_chi_square: counts must be >= 0");
        n += c;
    }
    if (n <= 0) throw DomainError("poisson_chi_square: no observations");

    ChiSquareFit fit;
    if (mean == 0.0) {
        // All mass at zero; consistent iff every observation is zero.
        const bool all_zero = counts.empty() || counts[0] == n;
        fit.statistic = all_zero ? 0.0 : std::numeric_limits<double>::infinity();
        fit.df = 1;
        fit.p_value = all_zero ? 1.0 : 0.0;
        fit.bins = 1;
        return fit;
    }

    // Expected Poisson mass per value of k, tail folded into the last cell.
    const std::size_t kmax = counts.size();
    std::vector<double> expected(kmax + 1);
    double pk = std::exp(-mean);  // P(K = 0)
    double tail = 1.0;
    for (std::size_t k = 0; k < kmax; ++k) {
        expected[k] = pk * static_cast<double>(n);
        tail -= pk;
        pk *= mean / static_cast<double>(k + 1);
    }
    expected[kmax] = std::max(tail, 0.0) * static_cast<double>(n);

    std::vector<double> obs(kmax + 1, 0.0);
    for (std::size_t k = 0; k < kmax; ++k) obs[k] = static_cast<double>(counts[k]);

    // Pool adjacent cells until every expected count reaches 5.
    std::vector<double> pooled_obs, pooled_exp;
    double accum_o = 0.0, accum_e = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) {
        accum_o += obs[k];
        accum_e += expected[k];
        if (accum_e >= 5.0) {
            pooled_obs.push_back(accum_o);
            pooled_exp.push_back(accum_e);
            accum_o = accum_e = 0.0;
        }
    }
    if (accum_e > 0.0 || accum_o > 0.0) {
        if (pooled_obs.empty()) {
            pooled_obs.push_back(accum_o);
            pooled_exp.push_back(accum_e);
        } else {
            pooled_obs.back() += accum_o;
            pooled_exp.back() += accum_e;
        }
    }

    double stat = 0.0;
    for (std::size_t i = 0; i < pooled_obs.size(); ++i) {
        const double d = pooled_obs[i] - pooled_exp[i];
        stat += d * d / pooled_exp[i];
    }
    fit.statistic = stat;
    fit.bins = static_cast<int>(pooled_obs.size());
    fit.df = std::max(fit.bins - 1, 1);
    fit.p_value = chi_square_p_value(stat, fit.df);
    return fit;
}

}  // namespace relsys
