#include "relsys/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "relsys/errors.hpp"

namespace relsys {

void SystemModel::validate() const {
    if (nodes.empty()) {
        throw ValidationError("nodes: must declare at least one node");
    }
    std::set<std::string> ids;
    for (const auto& n : nodes) {
        if (n.id.empty()) {
            throw ValidationError("nodes.id: must be nonempty");
        }
        if (!ids.insert(n.id).second) {
            throw ValidationError("nodes.id: duplicate id '" + n.id + "'");
        }
    }
    for (const auto& id : topology.component_ids()) {
        if (ids.count(id) == 0) {
            throw ValidationError("structure: references undeclared node id '" + id + "'");
        }
    }
}

const NodeSpec& SystemModel::node(const std::string& id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return n;
    }
    throw ValidationError("nodes: unknown node id '" + id + "'");
}

namespace {

/// Per-t factor cache: baseline survival and unit-exponent private kernel per
/// node, shared-stream kernel per distinct total exponent.
struct TermTables {
    std::map<std::string, std::pair<double, double>> node_factors;
    std::map<int, double> correlator_by_q;
};

double term_value(const SystemModel& model, const std::map<std::string, int>& exponents,
                  double t, const QuadratureSettings& quad, TermTables* tables,
                  TermAudit* audit) {
    if (exponents.empty()) {
        throw ValidationError("exponents: must be nonempty");
    }
    double value = 1.0;
    int q_total = 0;
    for (const auto& [id, q] : exponents) {
        if (q < 1) {
            throw ValidationError("exponents: exponent for '" + id + "' must be positive");
        }
        double baseline = 0.0;
        double private_kernel = 0.0;
        bool cached = false;
        if (tables) {
            auto it = tables->node_factors.find(id);
            if (it != tables->node_factors.end()) {
                baseline = it->second.first;
                private_kernel = it->second.second;
                cached = true;
            }
        }
        if (!cached) {
            const NodeSpec& node = model.node(id);
            baseline = baseline_reliability(node, t);
            private_kernel =
                f_kernel(node.private_intensity, 1, model.stress, model.service, t, quad);
            if (tables) tables->node_factors.emplace(id, std::make_pair(baseline, private_kernel));
        }
        value *= std::pow(baseline, q) * std::exp(-q * private_kernel);
        q_total += q;
    }
    double shared_kernel = 0.0;
    if (tables) {
        auto it = tables->correlator_by_q.find(q_total);
        if (it != tables->correlator_by_q.end()) {
            shared_kernel = it->second;
        } else {
            shared_kernel = f_kernel(model.correlator, q_total, model.stress, model.service, t, quad);
            tables->correlator_by_q.emplace(q_total, shared_kernel);
        }
    } else {
        shared_kernel = f_kernel(model.correlator, q_total, model.stress, model.service, t, quad);
    }
    value *= std::exp(-shared_kernel);
    if (audit) {
        audit->exponents = exponents;
        audit->q_total = q_total;
        audit->value = value;
    }
    return value;
}

double signed_sum(const SystemModel& model, const MonomialExpansion& expansion, double t,
                  const QuadratureSettings& quad) {
    TermTables tables;
    double total = 0.0;
    for (const auto& term : expansion.terms) {
        total += static_cast<double>(term.coeff) *
                 term_value(model, term.exponents, t, quad, &tables, nullptr);
    }
    return total;
}

double finish_idempotent(double value) {
    constexpr double slack = 1e-9;
    if (value < -slack || value > 1.0 + slack) {
        const double excess = value < 0.0 ? -value : value - 1.0;
        throw NumericalError("system survival: idempotent value outside [0,1]", value, excess);
    }
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace

double term_survival(const SystemModel& model, const std::map<std::string, int>& exponents,
                     double t, const QuadratureSettings& quad, TermAudit* audit) {
    return term_value(model, exponents, t, quad, nullptr, audit);
}

double system_survival(const SystemModel& model, double t, ExpansionMode mode,
                       const QuadratureSettings& quad) {
    model.validate();
    const MonomialExpansion expansion = expand(min_path_sets(model.topology), mode);
    const double raw = signed_sum(model, expansion, t, quad);
    return mode == ExpansionMode::Idempotent ? finish_idempotent(raw) : raw;
}

double series_survival_direct(const SystemModel& model, double t,
                              const QuadratureSettings& quad) {
    model.validate();
    std::vector<std::string> all_ids;
    for (const auto& n : model.nodes) all_ids.push_back(n.id);
    std::sort(all_ids.begin(), all_ids.end());
    const auto sets = min_path_sets(model.topology);
    if (sets.size() != 1 || sets.front() != all_ids) {
        throw ValidationError("structure: series_survival_direct requires a series of all nodes");
    }

    double value = 1.0;
    double private_sum = 0.0;
    for (const auto& node : model.nodes) {
        value *= baseline_reliability(node, t);
        private_sum += f_kernel(node.private_intensity, 1, model.stress, model.service, t, quad);
    }
    const int k = static_cast<int>(model.nodes.size());
    const double shared = f_kernel(model.correlator, k, model.stress, model.service, t, quad);
    return value * std::exp(-private_sum) * std::exp(-shared);
}

double parallel_survival_direct(const SystemModel& model, double t,
                                const QuadratureSettings& quad) {
    model.validate();
    std::vector<std::string> all_ids;
    for (const auto& n : model.nodes) all_ids.push_back(n.id);
    std::sort(all_ids.begin(), all_ids.end());
    std::vector<std::vector<std::string>> singletons;
    for (const auto& id : all_ids) singletons.push_back({id});
    if (min_path_sets(model.topology) != singletons) {
        throw ValidationError(
            "structure: parallel_survival_direct requires a parallel of all nodes");
    }
    const std::size_t k = model.nodes.size();
    if (k > 24) {
        throw CapacityError("nodes: inclusion-exclusion limited to 24 parallel nodes");
    }

    std::vector<double> baselines(k);
    std::vector<double> kernels(k);
    for (std::size_t i = 0; i < k; ++i) {
        baselines[i] = baseline_reliability(model.nodes[i], t);
        kernels[i] = f_kernel(model.nodes[i].private_intensity, 1, model.stress, model.service,
                              t, quad);
    }
    std::vector<double> shared_by_q(k + 1, 0.0);
    for (std::size_t q = 1; q <= k; ++q) {
        shared_by_q[q] =
            f_kernel(model.correlator, static_cast<int>(q), model.stress, model.service, t, quad);
    }

    double total = 0.0;
    for (std::uint64_t mask = 1; mask < (1ull << k); ++mask) {
        double term = 1.0;
        double private_sum = 0.0;
        int picked = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask & (1ull << i))) continue;
            term *= baselines[i];
            private_sum += kernels[i];
            ++picked;
        }
        term *= std::exp(-private_sum) * std::exp(-shared_by_q[static_cast<std::size_t>(picked)]);
        total += (picked % 2 == 1) ? term : -term;
    }
    return total;
}

SurvivalCurve survival_curve(const SystemModel& model, const std::vector<double>& grid,
                             ExpansionMode mode, const QuadratureSettings& quad) {
    model.validate();
    if (grid.empty()) {
        throw ValidationError("grid: must be nonempty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
            throw DomainError("grid: times must be finite and nonnegative");
        }
        if (i > 0 && grid[i] <= grid[i - 1]) {
            throw ValidationError("grid: times must be strictly increasing");
        }
    }

    const MonomialExpansion expansion = expand(min_path_sets(model.topology), mode);
    SurvivalCurve curve;
    curve.grid = grid;
    curve.values.reserve(grid.size());
    for (double t : grid) {
        const double raw = signed_sum(model, expansion, t, quad);
        curve.values.push_back(mode == ExpansionMode::Idempotent ? finish_idempotent(raw) : raw);
    }
    curve.provenance.kind = CurveProvenance::Kind::ClosedForm;
    curve.provenance.mode = mode;
    return curve;
}

double stream_correlation(const SystemModel& model, const std::string& i, const std::string& j,
                          double t, CorrelationConvention convention) {
    if (i == j) {
        throw ValidationError("nodes: correlation requires two distinct node ids");
    }
    if (!std::isfinite(t) || t <= 0.0) {
        throw DomainError("t: must be finite and positive");
    }
    const NodeSpec& a = model.node(i);
    const NodeSpec& b = model.node(j);
    auto g = [&](const IntensityFunction& f) {
        return convention == CorrelationConvention::MeanFunction ? f.mean(t) : f.rate(t);
    };
    const double gc = g(model.correlator);
    const double gi = g(a.private_intensity);
    const double gj = g(b.private_intensity);
    const double denom = (gi + gc) * (gj + gc);
    if (denom <= 0.0) {
        throw DomainError("correlation: composite streams have zero variance at t");
    }
    return gc / std::sqrt(denom);
}

}  // namespace relsys
