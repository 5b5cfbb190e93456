#pragma once

// Independent reference implementations the tests compare the library
// against. Deliberately naive: fixed-grid integration, direct polynomial
// arithmetic, textbook statistics. No code shared with the library paths
// under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "relsys/intensity.hpp"
#include "relsys/structure.hpp"
#include "relsys/workload.hpp"

namespace oracle {

/// Composite Simpson with a fixed panel count per smooth segment.
inline double integrate_fixed(const std::function<double(double)>& f, double a, double b,
                              std::vector<double> splits = {}, int panels_per_segment = 2000) {
    if (b <= a) return 0.0;
    splits.push_back(a);
    splits.push_back(b);
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < splits.size(); ++s) {
        const double lo = splits[s];
        const double hi = splits[s + 1];
        if (hi <= a || lo >= b || hi <= lo) continue;
        const int n = panels_per_segment;
        const double h = (hi - lo) / (2.0 * n);
        // Segment ends sit on potential jump points; sample just inside so
        // the one-sided value of this segment is used.
        const double nudge = (hi - lo) * 1e-12;
        double acc = f(lo + nudge) + f(hi - nudge);
        for (int i = 1; i < 2 * n; ++i) {
            acc += f(lo + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
        }
        total += acc * h / 3.0;
    }
    return total;
}

/// Direct integral of the raw rate, split at its kinks; checks
/// IntensityFunction::mean against pointwise rate values.
inline double mean_oracle(const relsys::IntensityFunction& f, double t) {
    if (t <= 0.0) return 0.0;
    std::vector<double> splits;
    for (double k : f.kink_times()) {
        if (k < t) splits.push_back(k);
    }
    return integrate_fixed([&](double s) { return f.rate(s); }, 0.0, t, splits);
}

/// Fixed-grid version of the expected stress-damped workload kernel
/// E_H[qH int_0^t exp(-qHw) m(t-w) Gbar(w) dw].
inline double f_kernel_oracle(const relsys::IntensityFunction& stream, int q,
                              const relsys::StressDistribution& stress,
                              const relsys::ServiceDistribution& service, double t) {
    if (t <= 0.0) return 0.0;
    std::vector<double> splits;
    for (double w : service.kink_times()) {
        if (w > 0.0 && w < t) splits.push_back(w);
    }
    for (double s : stream.kink_times()) {
        const double w = t - s;
        if (w > 0.0 && w < t) splits.push_back(w);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < stress.support().size(); ++i) {
        const double eta = stress.support()[i];
        const double qh = q * eta;
        auto integrand = [&](double w) {
            return qh * std::exp(-qh * w) * stream.mean(t - w) * service.survival(w);
        };
        total += stress.probs()[i] * integrate_fixed(integrand, 0.0, t, splits);
    }
    return total;
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test with the asymptotic p-value series.
inline KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        sign = -sign;
        if (std::fabs(term) < 1e-12) break;
    }
    p = std::clamp(2.0 * p, 0.0, 1.0);
    return {d, p};
}

using Monomial = std::map<std::string, int>;
using Polynomial = std::map<Monomial, long long>;

/// Reference structure-function expansion: multiplies out
/// 1 - prod_i (1 - m_i) term by term instead of enumerating subsets.
/// Idempotent mode multiplies in the quotient ring x^2 = x.
inline relsys::MonomialExpansion expand_reference(
    const std::vector<std::vector<std::string>>& sets, relsys::ExpansionMode mode) {
    Polynomial q;
    q[Monomial{}] = 1;  // running product of (1 - m_i)
    for (const auto& set : sets) {
        Monomial m;
        for (const auto& id : set) m[id] = 1;
        Polynomial next;
        for (const auto& [mono, coeff] : q) {
            next[mono] += coeff;
            Monomial prod = mono;
            for (const auto& [id, e] : m) {
                int& slot = prod[id];
                slot = mode == relsys::ExpansionMode::Idempotent ? 1 : slot + e;
            }
            next[prod] -= coeff;
        }
        q = std::move(next);
    }
    relsys::MonomialExpansion out;
    out.mode = mode;
    for (const auto& [mono, coeff] : q) {
        const long long flipped = mono.empty() ? 1 - coeff : -coeff;
        if (flipped == 0) continue;
        if (mono.empty()) {
            // phi(0) = 0 must hold for any union of nonempty path sets.
            out.terms.push_back({flipped, mono});
            continue;
        }
        out.terms.push_back({flipped, mono});
    }
    std::sort(out.terms.begin(), out.terms.end(),
              [](const relsys::MonomialTerm& a, const relsys::MonomialTerm& b) {
                  return a.exponents < b.exponents;
              });
    return out;
}

}  // namespace oracle
