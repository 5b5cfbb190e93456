#pragma once

#include <vector>

#include "relsys/intensity.hpp"
#include "relsys/rng.hpp"

namespace relsys {

/// One realization of a point process on [0, horizon].
/// Invariant: times strictly increasing, all <= horizon.
struct ArrivalRealization {
    std::vector<double> times;
    double horizon = 0.0;
};

/// Samples arrival times of a nonhomogeneous Poisson process with the given
/// intensity on [0, horizon]. Constant and piecewise-constant intensities use
/// exact inversion of the cumulative mean; linear and sum forms are thinned
/// against a piecewise-constant majorant.
ArrivalRealization sample_arrivals(const IntensityFunction& intensity, double horizon, Rng& rng);

}  // namespace relsys
