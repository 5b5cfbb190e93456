#include "relsys/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relsys/errors.hpp"

namespace relsys {

namespace {

void require_time(double t, const char* op) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError(std::string(op) + ": time must be finite and >= 0");
    }
}

void require_finite_nonneg(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0) {
        throw ValidationError(std::string(what) + " must be finite and >= 0");
    }
}

}  // namespace

IntensityFunction IntensityFunction::constant(double rate) {
    require_finite_nonneg(rate, "intensity: constant rate");
    IntensityFunction f;
    f.kind_ = IntensityKind::Constant;
    f.a_ = rate;
    return f;
}

IntensityFunction IntensityFunction::linear(double base, double slope) {
    require_finite_nonneg(base, "intensity: linear base");
    if (!std::isfinite(slope)) {
        throw ValidationError("intensity: linear slope must be finite");
    }
    IntensityFunction f;
    f.kind_ = IntensityKind::Linear;
    f.a_ = base;
    f.b_ = slope;
    return f;
}

IntensityFunction IntensityFunction::piecewise_constant(std::vector<double> breakpoints,
                                                        std::vector<double> rates) {
    if (rates.size() != breakpoints.size() + 1) {
        throw ValidationError("intensity: piecewise needs one rate per interval "
                              "(rates.size() == breakpoints.size() + 1)");
    }
    double prev = 0.0;
    for (double b : breakpoints) {
        if (!std::isfinite(b) || b <= prev) {
            throw ValidationError("intensity: breakpoints must be finite, positive, "
                                  "strictly increasing");
        }
        prev = b;
    }
    for (double r : rates) require_finite_nonneg(r, "intensity: piecewise rate");
    IntensityFunction f;
    f.kind_ = IntensityKind::PiecewiseConstant;
    f.breaks_ = std::move(breakpoints);
    f.rates_ = std::move(rates);
    return f;
}

double IntensityFunction::rate(double t) const {
    require_time(t, "rate");
    switch (kind_) {
        case IntensityKind::Constant:
            return a_;
        case IntensityKind::Linear:
            return std::max(a_ + b_ * t, 0.0);
        case IntensityKind::PiecewiseConstant: {
            const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
            return rates_[static_cast<std::size_t>(it - breaks_.begin())];
        }
        case IntensityKind::Sum: {
            double s = 0.0;
            for (const auto& p : parts_) s += p.rate(t);
            return s;
        }
    }
    return 0.0;
}

double IntensityFunction::mean(double t) const {
    require_time(t, "mean_function");
    switch (kind_) {
        case IntensityKind::Constant:
            return a_ * t;
        case IntensityKind::Linear: {
            if (b_ >= 0.0) return a_ * t + 0.5 * b_ * t * t;
            // rate hits zero at t0 = base / (-slope) and stays there
            const double t0 = a_ / (-b_);
            const double u = std::min(t, t0);
            return a_ * u + 0.5 * b_ * u * u;
        }
        case IntensityKind::PiecewiseConstant: {
            double m = 0.0;
            double left = 0.0;
            for (std::size_t i = 0; i < breaks_.size(); ++i) {
                if (t <= breaks_[i]) return m + rates_[i] * (t - left);
                m += rates_[i] * (breaks_[i] - left);
                left = breaks_[i];
            }
            return m + rates_.back() * (t - left);
        }
        case IntensityKind::Sum: {
            double m = 0.0;
            for (const auto& p : parts_) m += p.mean(t);
            return m;
        }
    }
    return 0.0;
}

std::vector<double> IntensityFunction::kink_times() const {
    std::vector<double> k;
    switch (kind_) {
        case IntensityKind::Constant:
            break;
        case IntensityKind::Linear:
            if (b_ < 0.0 && a_ > 0.0) k.push_back(a_ / (-b_));
            break;
        case IntensityKind::PiecewiseConstant:
            k = breaks_;
            break;
        case IntensityKind::Sum:
            for (const auto& p : parts_) {
                auto pk = p.kink_times();
                k.insert(k.end(), pk.begin(), pk.end());
            }
            break;
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

double IntensityFunction::sup_rate(double a, double b) const {
    require_time(a, "sup_rate");
    require_time(b, "sup_rate");
    if (b < a) std::swap(a, b);
    switch (kind_) {
        case IntensityKind::Constant:
            return a_;
        case IntensityKind::Linear:
            // clipped linear is monotone, so the sup sits at an endpoint
            return std::max(rate(a), rate(b));
        case IntensityKind::PiecewiseConstant: {
            const auto lo = std::upper_bound(breaks_.begin(), breaks_.end(), a) - breaks_.begin();
            auto hi = std::lower_bound(breaks_.begin(), breaks_.end(), b) - breaks_.begin();
            double s = 0.0;
            for (auto i = lo; i <= hi; ++i) s = std::max(s, rates_[static_cast<std::size_t>(i)]);
            return s;
        }
        case IntensityKind::Sum: {
            double s = 0.0;
            for (const auto& p : parts_) s += p.sup_rate(a, b);
            return s;
        }
    }
    return 0.0;
}

bool IntensityFunction::is_zero() const {
    switch (kind_) {
        case IntensityKind::Constant:
            return a_ == 0.0;
        case IntensityKind::Linear:
            return a_ == 0.0 && b_ <= 0.0;
        case IntensityKind::PiecewiseConstant:
            return std::all_of(rates_.begin(), rates_.end(), [](double r) { return r == 0.0; });
        case IntensityKind::Sum:
            return std::all_of(parts_.begin(), parts_.end(),
                               [](const IntensityFunction& p) { return p.is_zero(); });
    }
    return false;
}

namespace {

// Exact merge of constant/piecewise parts into a single piecewise form.
IntensityFunction merge_piecewise(const std::vector<IntensityFunction>& parts) {
    std::vector<double> breaks;
    for (const auto& p : parts) {
        if (p.kind() == IntensityKind::PiecewiseConstant) {
            breaks.insert(breaks.end(), p.breakpoints().begin(), p.breakpoints().end());
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> rates(breaks.size() + 1, 0.0);
    for (std::size_t i = 0; i <= breaks.size(); ++i) {
        const double probe = (i < breaks.size())
                                 ? (i == 0 ? breaks[0] * 0.5 : 0.5 * (breaks[i - 1] + breaks[i]))
                                 : (breaks.empty() ? 0.0 : breaks.back() + 1.0);
        for (const auto& p : parts) rates[i] += p.rate(probe);
    }
    if (breaks.empty()) return IntensityFunction::constant(rates[0]);
    return IntensityFunction::piecewise_constant(std::move(breaks), std::move(rates));
}

}  // namespace

IntensityFunction superpose(const std::vector<IntensityFunction>& parts) {
    if (parts.empty()) throw DomainError("superpose: empty intensity list");

    // Flatten nested sums first.
    std::vector<IntensityFunction> flat;
    for (const auto& p : parts) {
        if (p.kind() == IntensityKind::Sum) {
            flat.insert(flat.end(), p.parts().begin(), p.parts().end());
        } else {
            flat.push_back(p);
        }
    }
    if (flat.size() == 1) return flat[0];

    const bool all_constant = std::all_of(flat.begin(), flat.end(), [](const IntensityFunction& p) {
        return p.kind() == IntensityKind::Constant;
    });
    if (all_constant) {
        double total = 0.0;
        for (const auto& p : flat) total += p.constant_rate();
        return IntensityFunction::constant(total);
    }

    const bool mergeable = std::all_of(flat.begin(), flat.end(), [](const IntensityFunction& p) {
        return p.kind() == IntensityKind::Constant || p.kind() == IntensityKind::PiecewiseConstant;
    });
    if (mergeable) return merge_piecewise(flat);

    IntensityFunction f;
    f.kind_ = IntensityKind::Sum;
    f.parts_ = std::move(flat);
    return f;
}

}  // namespace relsys
