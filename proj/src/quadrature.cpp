#include "relsys/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "relsys/errors.hpp"

namespace relsys {

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    int max_depth;
    double unresolved_error = 0.0;
};

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

// Returns the extrapolated integral over [a, b]; whole = Simpson on [a, b].
double adapt(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
             double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps || depth >= st.max_depth) {
        if (std::abs(delta) > 15.0 * eps) st.unresolved_error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSettings& settings, std::span<const double> split_points) {
    if (!(settings.rel_tol > 0.0) || !(settings.abs_tol > 0.0) || settings.max_depth < 1) {
        throw ValidationError("quadrature: tolerances must be positive, max_depth >= 1");
    }
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
        throw DomainError("quadrature: bounds must be finite with a <= b");
    }
    if (a == b) return 0.0;

    std::vector<double> edges{a};
    for (double s : split_points) {
        if (s > a && s < b) edges.push_back(s);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Rough composite pass to scale the error budget.
    double rough = 0.0;
    std::vector<double> fl(edges.size()), fm(edges.size()), fr(edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        fl[i] = f(edges[i]);
        fm[i] = f(0.5 * (edges[i] + edges[i + 1]));
        fr[i] = f(edges[i + 1]);
        rough += simpson(fl[i], fm[i], fr[i], edges[i + 1] - edges[i]);
    }
    const double eps_total =
        std::max(settings.abs_tol, settings.rel_tol * std::abs(rough));

    SimpsonState st{&f, settings.max_depth};
    double total = 0.0;
    const double span_len = edges.back() - edges.front();
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double seg_eps = eps_total * (edges[i + 1] - edges[i]) / span_len;
        const double whole = simpson(fl[i], fm[i], fr[i], edges[i + 1] - edges[i]);
        total += adapt(st, edges[i], edges[i + 1], fl[i], fm[i], fr[i], whole, seg_eps, 0);
    }

    const double allowed = std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
    if (st.unresolved_error > allowed) {
        throw NumericalError("quadrature: tolerance not reached within max_depth", total,
                             st.unresolved_error);
    }
    return total;
}

}  // namespace relsys
