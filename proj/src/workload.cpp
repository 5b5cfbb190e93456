#include "relsys/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "relsys/errors.hpp"

namespace relsys {

namespace {

constexpr double kProbTol = 1e-12;

}  // namespace

StressDistribution::StressDistribution(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.empty() || support_.size() != probs_.size()) {
        throw ValidationError("stress: support and probs must be nonempty and equal length");
    }
    for (double eta : support_) {
        if (!std::isfinite(eta) || eta <= 0.0) {
            throw ValidationError("stress.support: values must be finite and > 0");
        }
    }
    if (std::set<double>(support_.begin(), support_.end()).size() != support_.size()) {
        throw ValidationError("stress.support: values must be distinct");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p <= 0.0) {
            throw ValidationError("stress.probs: values must be finite and > 0");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kProbTol) {
        throw ValidationError("stress.probs: must sum to 1 within 1e-12");
    }
    for (double& p : probs_) p /= total;
    cum_.resize(probs_.size());
    double c = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) cum_[i] = (c += probs_[i]);
    cum_.back() = 1.0;
}

double StressDistribution::mean() const {
    return expectation([](double eta) { return eta; });
}

double StressDistribution::sample(Rng& rng) const {
    const double u = rng.next_unit();
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    return support_[static_cast<std::size_t>(it - cum_.begin())];
}

ServiceDistribution ServiceDistribution::exponential(double rate) {
    if (!std::isfinite(rate) || rate <= 0.0) {
        throw ValidationError("service.rate: must be finite and > 0");
    }
    return {ServiceKind::Exponential, rate, 0.0};
}

ServiceDistribution ServiceDistribution::uniform(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || hi <= lo) {
        throw ValidationError("service.uniform: requires 0 <= lo < hi");
    }
    return {ServiceKind::Uniform, lo, hi};
}

ServiceDistribution ServiceDistribution::weibull(double shape, double scale) {
    if (!std::isfinite(shape) || shape <= 0.0 || !std::isfinite(scale) || scale <= 0.0) {
        throw ValidationError("service.weibull: shape and scale must be finite and > 0");
    }
    return {ServiceKind::Weibull, shape, scale};
}

double ServiceDistribution::survival(double w) const {
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw DomainError("service_survival: w must be finite and >= 0");
    }
    switch (kind_) {
        case ServiceKind::Exponential:
            return std::exp(-a_ * w);
        case ServiceKind::Uniform:
            if (w <= a_) return 1.0;
            if (w >= b_) return 0.0;
            return (b_ - w) / (b_ - a_);
        case ServiceKind::Weibull:
            return std::exp(-std::pow(w / b_, a_));
    }
    return 0.0;
}

double ServiceDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case ServiceKind::Exponential:
            return rng.next_exponential() / a_;
        case ServiceKind::Uniform:
            return a_ + (b_ - a_) * rng.next_unit();
        case ServiceKind::Weibull:
            return b_ * std::pow(rng.next_exponential(), 1.0 / a_);
    }
    return 0.0;
}

std::vector<double> ServiceDistribution::kink_times() const {
    if (kind_ == ServiceKind::Uniform) {
        if (a_ > 0.0) return {a_, b_};
        return {b_};
    }
    return {};
}

double shock_exposure(const WorkloadRealization& real, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("shock_exposure: t must be finite and >= 0");
    }
    double s = 0.0;
    const auto& times = real.arrivals.times;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] > t) break;
        s += real.stresses[j] * std::min(real.services[j], t - times[j]);
    }
    return s;
}

WorkloadRealization sample_workload(const IntensityFunction& intensity,
                                    const StressDistribution& stress,
                                    const ServiceDistribution& service, double horizon, Rng& rng) {
    WorkloadRealization real;
    real.arrivals = sample_arrivals(intensity, horizon, rng);
    const std::size_t n = real.arrivals.times.size();
    real.services.reserve(n);
    real.stresses.reserve(n);
    for (std::size_t j = 0; j < n; ++j) real.services.push_back(service.sample(rng));
    for (std::size_t j = 0; j < n; ++j) real.stresses.push_back(stress.sample(rng));
    return real;
}

}  // namespace relsys
