#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "relsys/errors.hpp"
#include "relsys/system.hpp"

using namespace relsys;

namespace {

const QuadratureSettings kQuad{};

double node_private_survival(const SystemModel& m, const NodeSpec& n, double t) {
    return std::exp(-oracle::mean_oracle(n.baseline, t)) *
           std::exp(-oracle::f_kernel_oracle(n.private_intensity, 1, m.stress, m.service, t));
}

/// Independent reference for the all-series closed form: product of baseline
/// survivals, exp of minus the summed unit private kernels, exp of minus the
/// shared kernel taken at exponent K.
double series_oracle(const SystemModel& m, double t) {
    double value = 1.0;
    double private_sum = 0.0;
    for (const auto& n : m.nodes) {
        value *= std::exp(-oracle::mean_oracle(n.baseline, t));
        private_sum += oracle::f_kernel_oracle(n.private_intensity, 1, m.stress, m.service, t);
    }
    const int k = static_cast<int>(m.nodes.size());
    return value * std::exp(-private_sum) *
           std::exp(-oracle::f_kernel_oracle(m.correlator, k, m.stress, m.service, t));
}

/// Independent reference for the all-parallel closed form: inclusion-exclusion
/// over node subsets, the shared kernel taken at the subset size.
double parallel_oracle(const SystemModel& m, double t) {
    const std::size_t k = m.nodes.size();
    std::vector<double> base(k), fp(k);
    for (std::size_t i = 0; i < k; ++i) {
        base[i] = std::exp(-oracle::mean_oracle(m.nodes[i].baseline, t));
        fp[i] =
            oracle::f_kernel_oracle(m.nodes[i].private_intensity, 1, m.stress, m.service, t);
    }
    std::vector<double> shared(k + 1, 0.0);
    for (std::size_t q = 1; q <= k; ++q) {
        shared[q] =
            oracle::f_kernel_oracle(m.correlator, static_cast<int>(q), m.stress, m.service, t);
    }
    double total = 0.0;
    for (std::uint64_t mask = 1; mask < (1ull << k); ++mask) {
        double term = 1.0;
        int picked = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask & (1ull << i))) continue;
            term *= base[i] * std::exp(-fp[i]);
            ++picked;
        }
        term *= std::exp(-shared[static_cast<std::size_t>(picked)]);
        total += (picked % 2 == 1) ? term : -term;
    }
    return total;
}

}  // namespace

TEST_CASE("model validation catches malformed declarations") {
    SystemModel m = fixtures::series2();
    CHECK_NOTHROW(m.validate());

    SystemModel empty = m;
    empty.nodes.clear();
    CHECK_THROWS_AS(empty.validate(), ValidationError);

    SystemModel dup = m;
    dup.nodes.push_back(fixtures::node("a", 0.1, 0.1));
    CHECK_THROWS_AS(dup.validate(), ValidationError);

    SystemModel unnamed = m;
    unnamed.nodes[0].id = "";
    CHECK_THROWS_AS(unnamed.validate(), ValidationError);

    SystemModel dangling = m;
    dangling.topology = fixtures::series_of({"a", "zz"});
    CHECK_THROWS_AS(dangling.validate(), ValidationError);

    CHECK_THROWS_AS(m.node("zz"), ValidationError);
}

TEST_CASE("single-exponent term equals the unconditional node survival") {
    const SystemModel m = fixtures::single_node_constant();
    for (double t : {0.5, 1.2, 2.0}) {
        const double term = term_survival(m, {{"a", 1}}, t, kQuad);
        const double want = node_survival_unconditional(m.nodes[0], m.correlator, m.stress,
                                                        m.service, t, kQuad);
        CHECK(term == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("terms factor across nodes when the shared stream is silent") {
    SystemModel m = fixtures::series2();
    m.correlator = IntensityFunction::constant(0.0);
    const double t = 1.7;
    const double joint = term_survival(m, {{"a", 1}, {"b", 1}}, t, kQuad);
    const double a = term_survival(m, {{"a", 1}}, t, kQuad);
    const double b = term_survival(m, {{"b", 1}}, t, kQuad);
    CHECK(joint == doctest::Approx(a * b).epsilon(1e-12));
}

TEST_CASE("term exponents scale private kernels linearly and pool the shared exponent") {
    const SystemModel m = fixtures::series2();
    const double t = 1.4;
    TermAudit audit;
    const double got = term_survival(m, {{"a", 2}, {"b", 3}}, t, kQuad, &audit);
    CHECK(audit.q_total == 5);
    CHECK(audit.value == got);
    CHECK(audit.exponents == std::map<std::string, int>{{"a", 2}, {"b", 3}});

    const auto& na = m.node("a");
    const auto& nb = m.node("b");
    const double fa = f_kernel(na.private_intensity, 1, m.stress, m.service, t, kQuad);
    const double fb = f_kernel(nb.private_intensity, 1, m.stress, m.service, t, kQuad);
    const double fc5 = f_kernel(m.correlator, 5, m.stress, m.service, t, kQuad);
    const double want = std::pow(baseline_reliability(na, t), 2) *
                        std::pow(baseline_reliability(nb, t), 3) *
                        std::exp(-(2 * fa + 3 * fb)) * std::exp(-fc5);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));

    CHECK_THROWS_AS(term_survival(m, {}, t, kQuad), ValidationError);
    CHECK_THROWS_AS(term_survival(m, {{"a", 0}}, t, kQuad), ValidationError);
}

TEST_CASE("system survival starts at one") {
    for (const SystemModel& m : {fixtures::series2(), fixtures::parallel3(), fixtures::bridge5(),
                                 fixtures::two_of_three()}) {
        CHECK(system_survival(m, 0.0, ExpansionMode::Idempotent, kQuad) == 1.0);
        CHECK(system_survival(m, 0.0, ExpansionMode::Paper, kQuad) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("series closed form matches an independent reference") {
    for (const SystemModel& m : {fixtures::series2(), fixtures::series5()}) {
        for (double t : {0.5, 1.2, 2.0}) {
            const double want = series_oracle(m, t);
            CHECK(series_survival_direct(m, t, kQuad) == doctest::Approx(want).epsilon(1e-7));
            CHECK(system_survival(m, t, ExpansionMode::Idempotent, kQuad) ==
                  doctest::Approx(want).epsilon(1e-7));
        }
    }
}

TEST_CASE("parallel closed form matches an independent reference") {
    for (const SystemModel& m : {fixtures::parallel2(), fixtures::parallel3()}) {
        for (double t : {0.5, 1.2, 2.0}) {
            const double want = parallel_oracle(m, t);
            CHECK(parallel_survival_direct(m, t, kQuad) == doctest::Approx(want).epsilon(1e-7));
            CHECK(system_survival(m, t, ExpansionMode::Idempotent, kQuad) ==
                  doctest::Approx(want).epsilon(1e-7));
        }
    }
}

TEST_CASE("direct formulas agree with the generic expansion on random models") {
    for (int k = 1; k <= 3; ++k) {
        const auto s = fixtures::random_model(100 + k, k, fixtures::Shape::Series);
        const auto p = fixtures::random_model(200 + k, k, fixtures::Shape::Parallel);
        for (double t : {0.8, 2.0}) {
            CHECK(std::fabs(series_survival_direct(s, t, kQuad) -
                            system_survival(s, t, ExpansionMode::Idempotent, kQuad)) <= 1e-10);
            CHECK(std::fabs(parallel_survival_direct(p, t, kQuad) -
                            system_survival(p, t, ExpansionMode::Idempotent, kQuad)) <= 1e-10);
        }
    }
}

TEST_CASE("direct formulas reject mismatched topologies") {
    CHECK_THROWS_AS(series_survival_direct(fixtures::parallel2(), 1.0, kQuad), ValidationError);
    CHECK_THROWS_AS(parallel_survival_direct(fixtures::series2(), 1.0, kQuad), ValidationError);
    CHECK_THROWS_AS(series_survival_direct(fixtures::bridge5(), 1.0, kQuad), ValidationError);
}

TEST_CASE("silent shared stream reduces to the independent-components value") {
    for (fixtures::Shape shape :
         {fixtures::Shape::Series, fixtures::Shape::Parallel, fixtures::Shape::Bridge}) {
        const int n = shape == fixtures::Shape::Bridge ? 5 : 3;
        const SystemModel m = fixtures::random_model(7 + static_cast<int>(shape), n, shape,
                                                     /*independent=*/true);
        const auto expansion = expand(min_path_sets(m.topology), ExpansionMode::Idempotent);
        for (double t : {0.9, 1.8}) {
            std::map<std::string, double> survival;
            for (const auto& node : m.nodes) {
                survival[node.id] = term_survival(m, {{node.id, 1}}, t, kQuad);
            }
            const double via_expansion = evaluate(expansion, survival);
            CHECK(std::fabs(system_survival(m, t, ExpansionMode::Idempotent, kQuad) -
                            via_expansion) <= 1e-10);
        }
    }
}

TEST_CASE("expansion modes differ once path sets share components") {
    const SystemModel m = fixtures::bridge5();
    const double idem = system_survival(m, 2.0, ExpansionMode::Idempotent, kQuad);
    const double paper = system_survival(m, 2.0, ExpansionMode::Paper, kQuad);
    CHECK(idem > 0.0);
    CHECK(idem < 1.0);
    CHECK(std::isfinite(paper));
    CHECK(std::fabs(idem - paper) > 1e-9);

    // Without shared components the modes coincide exactly.
    const SystemModel s = fixtures::series2();
    CHECK(system_survival(s, 2.0, ExpansionMode::Paper, kQuad) ==
          doctest::Approx(system_survival(s, 2.0, ExpansionMode::Idempotent, kQuad))
              .epsilon(1e-13));
}

TEST_CASE("survival curves are monotone and carry provenance") {
    const SystemModel m = fixtures::bridge5();
    const auto grid = fixtures::uniform_grid(2.0, 40);
    const auto curve = survival_curve(m, grid, ExpansionMode::Idempotent, kQuad);
    REQUIRE(curve.values.size() == grid.size());
    CHECK(curve.grid == grid);
    CHECK(curve.stderrs.empty());
    CHECK(curve.provenance.kind == CurveProvenance::Kind::ClosedForm);
    CHECK(curve.provenance.mode == ExpansionMode::Idempotent);
    CHECK(curve.values.front() == 1.0);
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
        CHECK(curve.values[i] <= curve.values[i - 1] + 1e-12);
        CHECK(curve.values[i] >= 0.0);
    }
}

TEST_CASE("survival curve validates its grid") {
    const SystemModel m = fixtures::series2();
    CHECK_THROWS_AS(survival_curve(m, {}, ExpansionMode::Idempotent, kQuad), ValidationError);
    CHECK_THROWS_AS(survival_curve(m, {0.0, -1.0}, ExpansionMode::Idempotent, kQuad),
                    ValidationError);
    CHECK_THROWS_AS(survival_curve(m, {0.0, 1.0, 1.0}, ExpansionMode::Idempotent, kQuad),
                    ValidationError);
}

TEST_CASE("adding components moves survival the coherent way") {
    const double t = 1.5;

    SystemModel base;
    base.nodes = {fixtures::node("a", 0.4, 0.8)};
    base.correlator = IntensityFunction::constant(0.5);
    base.stress = fixtures::stress3();
    base.service = ServiceDistribution::exponential(1.5);
    base.topology = StructureExpr::component("a");
    const double single = system_survival(base, t, ExpansionMode::Idempotent, kQuad);

    SystemModel wider = base;
    wider.nodes.push_back(fixtures::node("b", 0.3, 0.6));
    wider.topology = fixtures::parallel_of({"a", "b"});
    const double par = system_survival(wider, t, ExpansionMode::Idempotent, kQuad);

    SystemModel longer = wider;
    longer.topology = fixtures::series_of({"a", "b"});
    const double ser = system_survival(longer, t, ExpansionMode::Idempotent, kQuad);

    const double b_alone = term_survival(wider, {{"b", 1}}, t, kQuad);
    CHECK(par >= single - 1e-12);
    CHECK(par >= b_alone - 1e-12);
    CHECK(ser <= single + 1e-12);
    CHECK(ser <= b_alone + 1e-12);
    CHECK(ser <= par);
}

TEST_CASE("stream correlation follows the composite-rate formula") {
    const SystemModel m = fixtures::series2();
    // Constant rates: mean at t scales both numerator and denominator, so the
    // two conventions agree.
    const double gc = 0.5, gi = 0.8, gj = 0.6;
    const double want = gc / std::sqrt((gi + gc) * (gj + gc));
    CHECK(stream_correlation(m, "a", "b", 2.0, CorrelationConvention::MeanFunction) ==
          doctest::Approx(want).epsilon(1e-13));
    CHECK(stream_correlation(m, "a", "b", 2.0, CorrelationConvention::PaperIntensity) ==
          doctest::Approx(want).epsilon(1e-13));
    CHECK(stream_correlation(m, "b", "a", 2.0, CorrelationConvention::MeanFunction) ==
          doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("stream correlation endpoints") {
    SystemModel m = fixtures::series2();
    m.correlator = IntensityFunction::constant(0.0);
    CHECK(stream_correlation(m, "a", "b", 1.0, CorrelationConvention::MeanFunction) == 0.0);

    SystemModel pure = fixtures::series2();
    pure.nodes[0].private_intensity = IntensityFunction::constant(0.0);
    pure.nodes[1].private_intensity = IntensityFunction::constant(0.0);
    CHECK(stream_correlation(pure, "a", "b", 1.0, CorrelationConvention::MeanFunction) ==
          doctest::Approx(1.0).epsilon(1e-13));

    // Symmetric unit rates sit exactly at one half.
    SystemModel sym = fixtures::series2();
    sym.nodes[0].private_intensity = IntensityFunction::constant(1.0);
    sym.nodes[1].private_intensity = IntensityFunction::constant(1.0);
    sym.correlator = IntensityFunction::constant(1.0);
    CHECK(stream_correlation(sym, "a", "b", 3.0, CorrelationConvention::MeanFunction) ==
          doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("correlation conventions disagree for time-varying intensities") {
    SystemModel m = fixtures::series2();
    m.nodes[0].private_intensity = IntensityFunction::linear(0.2, 0.4);
    m.nodes[1].private_intensity = IntensityFunction::linear(0.1, 0.2);
    m.correlator = IntensityFunction::constant(0.5);
    const double t = 2.0;

    // Mean-function convention: g = m(t).
    const double mi = 0.2 * t + 0.2 * t * t;  // 0.4 + 0.4 slope halves
    const double mj = 0.1 * t + 0.1 * t * t;
    const double mc = 0.5 * t;
    const double want_mean = mc / std::sqrt((mi + mc) * (mj + mc));
    CHECK(stream_correlation(m, "a", "b", t, CorrelationConvention::MeanFunction) ==
          doctest::Approx(want_mean).epsilon(1e-12));

    // Intensity convention: g = lambda(t).
    const double ri = 0.2 + 0.4 * t;
    const double rj = 0.1 + 0.2 * t;
    const double rc = 0.5;
    const double want_rate = rc / std::sqrt((ri + rc) * (rj + rc));
    CHECK(stream_correlation(m, "a", "b", t, CorrelationConvention::PaperIntensity) ==
          doctest::Approx(want_rate).epsilon(1e-12));
    CHECK(std::fabs(want_mean - want_rate) > 1e-3);
}

TEST_CASE("stream correlation validates its arguments") {
    const SystemModel m = fixtures::series2();
    CHECK_THROWS_AS(stream_correlation(m, "a", "a", 1.0, CorrelationConvention::MeanFunction),
                    ValidationError);
    CHECK_THROWS_AS(stream_correlation(m, "a", "zz", 1.0, CorrelationConvention::MeanFunction),
                    ValidationError);
    CHECK_THROWS_AS(stream_correlation(m, "a", "b", 0.0, CorrelationConvention::MeanFunction),
                    ValidationError);
    CHECK_THROWS_AS(stream_correlation(m, "a", "b", -1.0, CorrelationConvention::MeanFunction),
                    ValidationError);

    SystemModel dead = fixtures::series2();
    dead.correlator = IntensityFunction::constant(0.0);
    dead.nodes[0].private_intensity = IntensityFunction::constant(0.0);
    dead.nodes[1].private_intensity = IntensityFunction::constant(0.0);
    CHECK_THROWS_AS(stream_correlation(dead, "a", "b", 1.0, CorrelationConvention::MeanFunction),
                    ValidationError);
}
