#pragma once

#include <vector>

namespace relsys {

enum class IntensityKind { Constant, Linear, PiecewiseConstant, Sum };

/// Nonnegative rate function lambda(t) on [0, inf) with an exact closed-form
/// cumulative m(t) = integral of lambda over [0, t].
///
/// Variants:
///   constant            lambda(t) = rate
///   linear              lambda(t) = max(base + slope * t, 0)
///   piecewise_constant  one rate per interval between breakpoints, last rate
///                       extends to infinity
///   sum                 superposition whose mean is the sum of part means
class IntensityFunction {
public:
    static IntensityFunction constant(double rate);
    static IntensityFunction linear(double base, double slope);
    static IntensityFunction piecewise_constant(std::vector<double> breakpoints,
                                                std::vector<double> rates);

    IntensityKind kind() const { return kind_; }

    /// lambda(t); t must be >= 0.
    double rate(double t) const;

    /// m(t) = integral_0^t lambda(s) ds; t must be >= 0.
    double mean(double t) const;

    /// Times > 0 at which m is not twice differentiable (breakpoints, the
    /// clip point of a decreasing linear rate). Sorted, deduplicated.
    std::vector<double> kink_times() const;

    /// Supremum of lambda on [a, b]; valid thinning majorant on the interval.
    double sup_rate(double a, double b) const;

    bool is_zero() const;

    // Parameter accessors (serialization, sampling internals).
    double constant_rate() const { return a_; }
    double linear_base() const { return a_; }
    double linear_slope() const { return b_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& rates() const { return rates_; }
    const std::vector<IntensityFunction>& parts() const { return parts_; }

    friend IntensityFunction superpose(const std::vector<IntensityFunction>& parts);

private:
    IntensityFunction() = default;

    IntensityKind kind_ = IntensityKind::Constant;
    double a_ = 0.0;  // constant: rate; linear: base
    double b_ = 0.0;  // linear: slope
    std::vector<double> breaks_;
    std::vector<double> rates_;
    std::vector<IntensityFunction> parts_;
};

/// Superposition of processes: lambda = sum of part rates, m = sum of part
/// means. Constant/piecewise mixtures merge exactly; anything involving a
/// linear part stays an explicit sum. Empty input is a domain error.
IntensityFunction superpose(const std::vector<IntensityFunction>& parts);

}  // namespace relsys
