#include "relsys/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relsys/errors.hpp"

namespace relsys {

namespace {

// Homogeneous segments [edges[i], edges[i+1]) with constant rate seg_rates[i].
struct PiecewiseGrid {
    std::vector<double> edges;      // starts at 0, ends at horizon
    std::vector<double> seg_rates;  // one per segment
};

PiecewiseGrid segment_grid(const IntensityFunction& f, double horizon) {
    PiecewiseGrid g;
    g.edges.push_back(0.0);
    if (f.kind() == IntensityKind::PiecewiseConstant) {
        for (double b : f.breakpoints()) {
            if (b < horizon) g.edges.push_back(b);
        }
    } else {
        for (double k : f.kink_times()) {
            if (k > 0.0 && k < horizon) g.edges.push_back(k);
        }
    }
    g.edges.push_back(horizon);
    for (std::size_t i = 0; i + 1 < g.edges.size(); ++i) {
        g.seg_rates.push_back(f.sup_rate(g.edges[i], g.edges[i + 1]));
    }
    return g;
}

// Exact gap-based sampling of a homogeneous process per constant-rate segment.
std::vector<double> sample_piecewise_exact(const PiecewiseGrid& g, Rng& rng) {
    std::vector<double> times;
    for (std::size_t i = 0; i + 1 < g.edges.size(); ++i) {
        const double rate = g.seg_rates[i];
        if (rate <= 0.0) continue;
        double t = g.edges[i];
        const double end = g.edges[i + 1];
        for (;;) {
            t += rng.next_exponential() / rate;
            if (t >= end) break;
            times.push_back(t);
        }
    }
    return times;
}

void enforce_strict_increase(std::vector<double>& times, double horizon, Rng& rng) {
    // Ties have probability zero; if the generator ever produces one, nudge
    // the later point forward by an ulp-scale offset drawn from the stream.
    std::size_t out = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        if (out > 0 && t <= times[out - 1]) {
            const double prev = times[out - 1];
            const double ulp = std::nextafter(prev, std::numeric_limits<double>::infinity()) - prev;
            t = prev + ulp * (1.0 + rng.next_unit());
            if (t > horizon) continue;  // drop rather than overshoot the horizon
        }
        times[out++] = t;
    }
    times.resize(out);
}

}  // namespace

ArrivalRealization sample_arrivals(const IntensityFunction& intensity, double horizon, Rng& rng) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
        throw DomainError("sample_arrivals: horizon must be finite and >= 0");
    }
    ArrivalRealization real;
    real.horizon = horizon;
    if (horizon == 0.0 || intensity.is_zero()) return real;

    const PiecewiseGrid grid = segment_grid(intensity, horizon);
    const bool exact = intensity.kind() == IntensityKind::Constant ||
                       intensity.kind() == IntensityKind::PiecewiseConstant;
    if (exact) {
        real.times = sample_piecewise_exact(grid, rng);
    } else {
        // Thinning: candidates from the majorant, each kept with probability
        // lambda(t) / majorant(t).
        std::size_t seg = 0;
        for (double t : sample_piecewise_exact(grid, rng)) {
            while (t >= grid.edges[seg + 1]) ++seg;
            const double accept = intensity.rate(t) / grid.seg_rates[seg];
            if (rng.next_unit() <= accept) real.times.push_back(t);
        }
    }
    enforce_strict_increase(real.times, horizon, rng);
    return real;
}

}  // namespace relsys
