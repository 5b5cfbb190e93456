#pragma once

#include <vector>

#include "relsys/arrivals.hpp"
#include "relsys/intensity.hpp"
#include "relsys/rng.hpp"

namespace relsys {

/// Finite discrete law of the per-job stress: P(H = support[i]) = probs[i].
/// Support values positive and distinct, probabilities positive and summing
/// to one (renormalized exactly if within 1e-12 of one).
class StressDistribution {
public:
    StressDistribution(std::vector<double> support, std::vector<double> probs);

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }

    /// E_H[f(H)] = sum_i p_i f(eta_i).
    template <typename F>
    double expectation(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) s += probs_[i] * f(support_[i]);
        return s;
    }

    double mean() const;
    double sample(Rng& rng) const;

private:
    std::vector<double> support_;
    std::vector<double> probs_;
    std::vector<double> cum_;  // cumulative probabilities for sampling
};

enum class ServiceKind { Exponential, Uniform, Weibull };

/// Parametric law of the per-job service time W.
class ServiceDistribution {
public:
    static ServiceDistribution exponential(double rate);
    static ServiceDistribution uniform(double lo, double hi);
    static ServiceDistribution weibull(double shape, double scale);

    ServiceKind kind() const { return kind_; }

    /// Survival G_bar(w) = P(W > w); w must be >= 0.
    double survival(double w) const;

    double sample(Rng& rng) const;

    /// Points > 0 where G_bar has a kink (uniform endpoints); quadrature
    /// split hints.
    std::vector<double> kink_times() const;

    double param_a() const { return a_; }  // rate / lo / shape
    double param_b() const { return b_; }  // -  / hi / scale

private:
    ServiceDistribution(ServiceKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    ServiceKind kind_;
    double a_;
    double b_;
};

/// Arrivals with their i.i.d. service times and stresses.
struct WorkloadRealization {
    ArrivalRealization arrivals;
    std::vector<double> services;
    std::vector<double> stresses;
};

/// Realized shock exposure at time t: sum over jobs with T_j <= t of
/// H_j * min(W_j, t - T_j). Nondecreasing and piecewise linear in t.
double shock_exposure(const WorkloadRealization& real, double t);

WorkloadRealization sample_workload(const IntensityFunction& intensity,
                                    const StressDistribution& stress,
                                    const ServiceDistribution& service, double horizon, Rng& rng);

}  // namespace relsys
