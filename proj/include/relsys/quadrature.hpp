#pragma once

#include <functional>
#include <span>

namespace relsys {

struct QuadratureSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_depth = 40;
};

/// Adaptive composite Simpson over [a, b] with Richardson error control.
/// split_points are forced subdivision points (integrand kinks); points
/// outside (a, b) are ignored. Throws NumericalError (carrying the achieved
/// estimate and unresolved error bound) if the depth cap prevents reaching
/// the requested tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSettings& settings, std::span<const double> split_points = {});

}  // namespace relsys
