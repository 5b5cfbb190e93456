#pragma once

#include <string>

#include "relsys/intensity.hpp"
#include "relsys/quadrature.hpp"
#include "relsys/workload.hpp"

namespace relsys {

/// One component: its baseline breakdown rate r0(t) and the intensity of its
/// private job stream.
struct NodeSpec {
    std::string id;
    IntensityFunction baseline;
    IntensityFunction private_intensity;
};

/// exp(-integral_0^t r0) — survival with no workload at all.
double baseline_reliability(const NodeSpec& node, double t);

/// E_H[ q H integral_0^t exp(-q H w) m(t - w) G_bar(w) dw ] where m is the
/// mean function of `stream`. The stress expectation is a finite weighted sum
/// of smooth integrals, one per support point; kinks of m and of G_bar are
/// forced quadrature split points.
double f_kernel(const IntensityFunction& stream, int q, const StressDistribution& stress,
                const ServiceDistribution& service, double t, const QuadratureSettings& quad);

/// Node survival conditioned on a realized shared-stream workload:
/// baseline * exp(-shock_exposure(correlator, t)) * exp(-f_kernel(private, 1)).
double conditional_node_survival(const NodeSpec& node, const WorkloadRealization& correlator_real,
                                 const StressDistribution& stress,
                                 const ServiceDistribution& service, double t,
                                 const QuadratureSettings& quad);

/// Unconditional single-node survival:
/// baseline * exp(-f_kernel(private, 1)) * exp(-f_kernel(correlator, 1)).
double node_survival_unconditional(const NodeSpec& node,
                                   const IntensityFunction& correlator_intensity,
                                   const StressDistribution& stress,
                                   const ServiceDistribution& service, double t,
                                   const QuadratureSettings& quad);

}  // namespace relsys
