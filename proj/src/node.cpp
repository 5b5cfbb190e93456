#include "relsys/node.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "relsys/errors.hpp"

namespace relsys {

namespace {

void check_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw DomainError("t: must be finite and nonnegative");
    }
}

}  // namespace

double baseline_reliability(const NodeSpec& node, double t) {
    check_time(t);
    return std::exp(-node.baseline.mean(t));
}

double f_kernel(const IntensityFunction& stream, int q, const StressDistribution& stress,
                const ServiceDistribution& service, double t, const QuadratureSettings& quad) {
    check_time(t);
    if (q < 1) {
        throw ValidationError("q: must be a positive integer");
    }
    if (t == 0.0 || stream.is_zero()) {
        return 0.0;
    }

    // Split at service kinks and at images of the stream's mean-function
    // kinks under w = t - s, so every subinterval is smooth.
    std::vector<double> splits;
    for (double w : service.kink_times()) {
        if (w > 0.0 && w < t) splits.push_back(w);
    }
    for (double s : stream.kink_times()) {
        double w = t - s;
        if (w > 0.0 && w < t) splits.push_back(w);
    }
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

    double total = 0.0;
    for (std::size_t i = 0; i < stress.support().size(); ++i) {
        const double eta = stress.support()[i];
        const double p = stress.probs()[i];
        if (eta == 0.0 || p == 0.0) continue;
        const double qh = static_cast<double>(q) * eta;
        auto integrand = [&](double w) {
            return qh * std::exp(-qh * w) * stream.mean(t - w) * service.survival(w);
        };
        total += p * integrate(integrand, 0.0, t, quad, splits);
    }
    return std::max(total, 0.0);
}

double conditional_node_survival(const NodeSpec& node, const WorkloadRealization& correlator_real,
                                 const StressDistribution& stress,
                                 const ServiceDistribution& service, double t,
                                 const QuadratureSettings& quad) {
    check_time(t);
    const double private_term = f_kernel(node.private_intensity, 1, stress, service, t, quad);
    return baseline_reliability(node, t) * std::exp(-shock_exposure(correlator_real, t)) *
           std::exp(-private_term);
}

double node_survival_unconditional(const NodeSpec& node,
                                   const IntensityFunction& correlator_intensity,
                                   const StressDistribution& stress,
                                   const ServiceDistribution& service, double t,
                                   const QuadratureSettings& quad) {
    check_time(t);
    const double private_term = f_kernel(node.private_intensity, 1, stress, service, t, quad);
    const double shared_term = f_kernel(correlator_intensity, 1, stress, service, t, quad);
    return baseline_reliability(node, t) * std::exp(-private_term) * std::exp(-shared_term);
}

}  // namespace relsys
