#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relsys/system.hpp"

namespace relsys {

/// One simulated draw of every workload stream over [0, horizon].
struct SystemRealization {
    std::map<std::string, WorkloadRealization> privates;
    WorkloadRealization correlator;
    double horizon = 0.0;
};

/// Draw order is fixed: shared stream first, then nodes in declaration order.
SystemRealization sample_system_realization(const SystemModel& model, double horizon, Rng& rng);

/// Cumulative hazard of one node given the realization:
/// baseline mean + private shock exposure + shared shock exposure.
double integrated_hazard(const NodeSpec& node, const SystemRealization& sysreal, double t);

struct Lifetime {
    double time = 0.0;      // failure time, or the horizon when censored
    bool censored = false;  // cumulative hazard never reached the target
};

/// Smallest t with integrated_hazard(node, sysreal, t) >= target, solved
/// exactly segment by segment; censored when the horizon hazard falls short.
Lifetime invert_cumulative_hazard(const NodeSpec& node, const SystemRealization& sysreal,
                                  double target);

/// Inverse-hazard lifetime draw: target ~ standard exponential.
Lifetime sample_node_lifetime(const NodeSpec& node, const SystemRealization& sysreal, Rng& rng);

enum class EstimatorKind { Crude, RaoBlackwell };

struct EstimatorConfig {
    std::uint64_t reps = 1;
    std::uint64_t seed = 0;
    EstimatorKind estimator = EstimatorKind::Crude;
    int threads = 1;
    QuadratureSettings quad;  // rao_blackwell closed-form node factors
};

/// Monte Carlo estimate of the system survival curve with standard errors.
/// Replication r uses Rng::stream(seed, r) and partial results reduce in a
/// fixed chunk order, so output is identical for any thread count.
SurvivalCurve estimate_system_survival(const SystemModel& model, const std::vector<double>& grid,
                                       const EstimatorConfig& cfg);

struct CovarianceEstimate {
    double covariance = 0.0;
    double covariance_se = 0.0;
    double correlation = 0.0;
    double correlation_se = 0.0;
};

/// Samples paired composite counts N_i(t)+N_c(t), N_j(t)+N_c(t) sharing the
/// correlator draw; standard errors via influence functions.
CovarianceEstimate estimate_stream_covariance(const SystemModel& model, const std::string& i,
                                              const std::string& j, double t, std::uint64_t reps,
                                              std::uint64_t seed);

struct GofReport {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    double expected_mean = 0.0;
    std::uint64_t reps = 0;
};

/// Chi-square fit of summed counts of two independently sampled processes
/// against Poisson(m_a(t) + m_b(t)).
GofReport verify_superposition(const IntensityFunction& a, const IntensityFunction& b, double t,
                               std::uint64_t reps, std::uint64_t seed);

}  // namespace relsys
