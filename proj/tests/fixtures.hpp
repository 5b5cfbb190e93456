#pragma once

// Shared model fixtures at desk scale: rates 0.2..1.2, horizons around 2.

#include <cstdint>
#include <string>
#include <vector>

#include "relsys/rng.hpp"
#include "relsys/system.hpp"

namespace fixtures {

inline relsys::StressDistribution stress3() {
    return relsys::StressDistribution({0.4, 1.0, 2.2}, {0.5, 0.3, 0.2});
}

inline relsys::StressDistribution stress1() {
    return relsys::StressDistribution({1.0}, {1.0});
}

inline std::vector<double> uniform_grid(double t_max, int steps) {
    std::vector<double> grid;
    for (int i = 0; i <= steps; ++i) {
        grid.push_back(i == steps ? t_max : t_max * i / steps);
    }
    return grid;
}

inline relsys::NodeSpec node(const std::string& id, double baseline_rate, double private_rate) {
    return {id, relsys::IntensityFunction::constant(baseline_rate),
            relsys::IntensityFunction::constant(private_rate)};
}

/// Constant rates everywhere, exponential service.
inline relsys::SystemModel single_node_constant() {
    relsys::SystemModel m;
    m.nodes = {node("a", 0.4, 0.8)};
    m.correlator = relsys::IntensityFunction::constant(0.5);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    m.topology = relsys::StructureExpr::component("a");
    return m;
}

/// Linear intensities, uniform service.
inline relsys::SystemModel single_node_linear() {
    relsys::SystemModel m;
    m.nodes = {{"a", relsys::IntensityFunction::linear(0.2, 0.15),
                relsys::IntensityFunction::linear(0.9, -0.3)}};
    m.correlator = relsys::IntensityFunction::linear(0.1, 0.25);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::uniform(0.2, 1.1);
    m.topology = relsys::StructureExpr::component("a");
    return m;
}

/// Piecewise-constant intensities, Weibull service.
inline relsys::SystemModel single_node_piecewise() {
    relsys::SystemModel m;
    m.nodes = {{"a", relsys::IntensityFunction::constant(0.3),
                relsys::IntensityFunction::piecewise_constant({0.6, 1.4}, {1.2, 0.4, 0.9})}};
    m.correlator = relsys::IntensityFunction::piecewise_constant({1.0}, {0.7, 0.2});
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::weibull(1.6, 0.8);
    m.topology = relsys::StructureExpr::component("a");
    return m;
}

inline relsys::StructureExpr series_of(const std::vector<std::string>& ids) {
    std::vector<relsys::StructureExpr> kids;
    for (const auto& id : ids) kids.push_back(relsys::StructureExpr::component(id));
    return relsys::StructureExpr::series(std::move(kids));
}

inline relsys::StructureExpr parallel_of(const std::vector<std::string>& ids) {
    std::vector<relsys::StructureExpr> kids;
    for (const auto& id : ids) kids.push_back(relsys::StructureExpr::component(id));
    return relsys::StructureExpr::parallel(std::move(kids));
}

inline relsys::SystemModel series2() {
    relsys::SystemModel m;
    m.nodes = {node("a", 0.4, 0.8), node("b", 0.3, 0.6)};
    m.correlator = relsys::IntensityFunction::constant(0.5);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    m.topology = series_of({"a", "b"});
    return m;
}

inline relsys::SystemModel series5() {
    relsys::SystemModel m;
    m.nodes = {node("n1", 0.15, 0.5), node("n2", 0.2, 0.4), node("n3", 0.1, 0.6),
               node("n4", 0.25, 0.3), node("n5", 0.18, 0.45)};
    m.correlator = relsys::IntensityFunction::constant(0.4);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    m.topology = series_of({"n1", "n2", "n3", "n4", "n5"});
    return m;
}

inline relsys::SystemModel parallel2() {
    relsys::SystemModel m;
    m.nodes = {node("a", 0.6, 0.9), node("b", 0.5, 0.7)};
    m.correlator = relsys::IntensityFunction::constant(0.6);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    m.topology = parallel_of({"a", "b"});
    return m;
}

inline relsys::SystemModel parallel3() {
    relsys::SystemModel m;
    m.nodes = {node("a", 0.6, 0.9), node("b", 0.5, 0.7), node("c", 0.7, 0.5)};
    m.correlator = relsys::IntensityFunction::constant(0.6);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    m.topology = parallel_of({"a", "b", "c"});
    return m;
}

inline relsys::SystemModel bridge5() {
    relsys::SystemModel m;
    m.nodes = {node("1", 0.3, 0.7), node("2", 0.35, 0.5), node("3", 0.25, 0.6),
               node("4", 0.4, 0.55), node("5", 0.3, 0.65)};
    m.correlator = relsys::IntensityFunction::constant(0.45);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    m.topology = relsys::StructureExpr::bridge({"1", "2", "3", "4", "5"});
    return m;
}

inline relsys::SystemModel two_of_three() {
    relsys::SystemModel m;
    m.nodes = {node("1", 0.35, 0.6), node("2", 0.3, 0.8), node("3", 0.4, 0.5)};
    m.correlator = relsys::IntensityFunction::constant(0.5);
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    m.topology = relsys::StructureExpr::k_of_n(
        2, {relsys::StructureExpr::component("1"), relsys::StructureExpr::component("2"),
            relsys::StructureExpr::component("3")});
    return m;
}

enum class Shape { Series, Parallel, Bridge };

/// Random constant-rate model; correlator rate 0 when `independent`.
inline relsys::SystemModel random_model(std::uint64_t seed, int n_nodes, Shape shape,
                                        bool independent = false) {
    relsys::Rng rng = relsys::Rng::stream(seed, 0);
    auto rate = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); };
    relsys::SystemModel m;
    std::vector<std::string> ids;
    for (int i = 0; i < n_nodes; ++i) {
        const std::string id = "n" + std::to_string(i + 1);
        ids.push_back(id);
        m.nodes.push_back(node(id, rate(0.1, 0.5), rate(0.2, 1.0)));
    }
    m.correlator = relsys::IntensityFunction::constant(independent ? 0.0 : rate(0.2, 0.8));
    m.stress = stress3();
    m.service = relsys::ServiceDistribution::exponential(1.5);
    switch (shape) {
        case Shape::Series:
            m.topology = series_of(ids);
            break;
        case Shape::Parallel:
            m.topology = parallel_of(ids);
            break;
        case Shape::Bridge:
            m.topology = relsys::StructureExpr::bridge(ids);
            break;
    }
    return m;
}

}  // namespace fixtures
