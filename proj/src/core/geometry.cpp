#include "geometry.hpp"

#include <cmath>

namespace sgrf {

Domain::Domain(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size())
        throw InvalidArgument("domain bounds must be non-empty and of equal length");
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!(lower_[j] <= upper_[j]))
            throw InvalidArgument("domain lower bound exceeds upper bound in dimension " +
                                  std::to_string(j + 1));
        if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]))
            throw InvalidArgument("domain bounds must be finite");
    }
}

void Domain::add_exclusion(ExclusionBall ball) {
    if (ball.center.size() != dim())
        throw ArityMismatch("exclusion center has wrong dimension");
    if (!(ball.radius > 0.0))
        throw InvalidArgument("exclusion radius must be positive");
    exclusions_.push_back(std::move(ball));
}

bool Domain::contains(const Vec& x) const {
    if (x.size() != dim())
        throw ArityMismatch("point has wrong dimension");
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < lower_[j] || x[j] > upper_[j]) return false;
    for (const auto& ball : exclusions_) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] - ball.center[j];
            d2 += d * d;
        }
        if (d2 < ball.radius * ball.radius) return false;
    }
    return true;
}

double Domain::volume() const {
    double v = 1.0;
    for (std::size_t j = 0; j < dim(); ++j) v *= upper_[j] - lower_[j];
    return v;
}

double Domain::diagonal() const {
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) {
        const double d = upper_[j] - lower_[j];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

} // namespace sgrf
