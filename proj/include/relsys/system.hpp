#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relsys/node.hpp"
#include "relsys/structure.hpp"

namespace relsys {

/// Full model: per-node baseline and private stream, one shared stream whose
/// arrivals hit every node, common stress/service laws, and the topology.
struct SystemModel {
    std::vector<NodeSpec> nodes;
    IntensityFunction correlator = IntensityFunction::constant(0.0);
    StressDistribution stress{{1.0}, {1.0}};
    ServiceDistribution service = ServiceDistribution::exponential(1.0);
    StructureExpr topology = StructureExpr::component("_");

    /// Checks id uniqueness and topology referential integrity.
    void validate() const;

    const NodeSpec& node(const std::string& id) const;
};

struct CurveProvenance {
    enum class Kind { ClosedForm, Simulated };
    Kind kind = Kind::ClosedForm;
    ExpansionMode mode = ExpansionMode::Idempotent;  // closed form only
    std::string estimator;                           // simulated only
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
};

struct SurvivalCurve {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> stderrs;  // empty for closed form
    CurveProvenance provenance;
};

/// Factor breakdown of one expansion term, kept for audit.
struct TermAudit {
    std::map<std::string, int> exponents;
    int q_total = 0;  // exponent passed to the shared-stream kernel
    double value = 0.0;
};

/// Unconditional survival product for one monomial with exponents {q_l}:
/// prod_l Fbar0_l(t)^{q_l} * exp(-sum_l q_l*f_kernel(m_l,1,t))
/// * exp(-f_kernel(m_c, Q, t)) with Q = sum q_l. The shared-stream exponent
/// sits inside the kernel's exponential; private exponents scale linearly.
double term_survival(const SystemModel& model, const std::map<std::string, int>& exponents,
                     double t, const QuadratureSettings& quad, TermAudit* audit = nullptr);

/// Closed-form system survival: signed sum of term_survival over the
/// structure-function expansion of the topology's minimal path sets.
/// Idempotent values are clamped into [0,1] when within 1e-9 and rejected
/// beyond that; paper mode returns the raw signed sum.
double system_survival(const SystemModel& model, double t, ExpansionMode mode,
                       const QuadratureSettings& quad);

/// Direct K-component series formula; requires a topology whose single
/// minimal path set is all nodes. Cross-check for the generic path.
double series_survival_direct(const SystemModel& model, double t,
                              const QuadratureSettings& quad);

/// Direct K-component parallel inclusion-exclusion; requires singleton path
/// sets covering all nodes. Cross-check for the generic path.
double parallel_survival_direct(const SystemModel& model, double t,
                                const QuadratureSettings& quad);

/// Pointwise closed-form curve over a strictly increasing grid.
SurvivalCurve survival_curve(const SystemModel& model, const std::vector<double>& grid,
                             ExpansionMode mode, const QuadratureSettings& quad);

/// g_c/sqrt((g_i+g_c)(g_j+g_c)) with g the mean function (default) or the
/// raw intensity.
enum class CorrelationConvention { MeanFunction, PaperIntensity };

double stream_correlation(const SystemModel& model, const std::string& i, const std::string& j,
                          double t, CorrelationConvention convention);

}  // namespace relsys
