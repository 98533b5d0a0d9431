#pragma once

#include <cstdint>
#include <optional>

#include "geometry.hpp"

namespace sgrf {

struct WeightedSample {
    Vec x;
    double log_weight = 0.0; // ln(g/P); +inf = exact root hit, -inf = zero weight
};

// Streaming center-of-mass ratio estimator. Numerator and denominator are
// kept rescaled by the largest log-weight seen so far, so weights spanning
// hundreds of orders of magnitude stay representable.
class RatioAccumulator {
public:
    explicit RatioAccumulator(std::size_t n);

    std::size_t dim() const { return n_; }
    std::int64_t count() const { return count_; }
    double log_scale() const { return log_scale_; }
    bool saturated() const { return saturated_at_.has_value(); }

    // True when no finite-weight mass has been consumed (estimate undefined).
    bool empty() const { return !saturated_at_ && scaled_denominator_ == 0.0; }

    void consume(const WeightedSample& s);
    void consume(const Vec& x, double log_weight);

    // Combine with an accumulator built from a disjoint sample stream.
    // Associative up to floating-point rescaling order.
    void merge(const RatioAccumulator& other);

    // Throws EmptyEstimator when no usable sample was consumed.
    Vec estimate() const;

private:
    void rescale_to(double new_scale);

    std::size_t n_;
    std::int64_t count_ = 0;
    double log_scale_;
    double scaled_denominator_ = 0.0;
    Vec scaled_numerator_;
    std::optional<Vec> saturated_at_;
};

} // namespace sgrf
