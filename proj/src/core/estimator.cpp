#include "estimator.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace sgrf {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

RatioAccumulator::RatioAccumulator(std::size_t n)
    : n_(n), log_scale_(kNegInf), scaled_numerator_(n, 0.0) {
    if (n == 0) throw InvalidArgument("accumulator dimension must be >= 1");
}

void RatioAccumulator::consume(const WeightedSample& s) { consume(s.x, s.log_weight); }

void RatioAccumulator::consume(const Vec& x, double log_weight) {
    if (x.size() != n_) throw ArityMismatch("sample has wrong dimension");
    if (std::isnan(log_weight)) throw InvalidArgument("log-weight is NaN");
    ++count_;
    if (log_weight == kNegInf) return; // zero weight: contributes nothing
    if (std::isinf(log_weight)) {
        // Exact root hit: the ratio degenerates to this point.
        if (!saturated_at_) saturated_at_ = x;
        return;
    }
    if (saturated_at_) return;
    if (log_weight > log_scale_) {
        rescale_to(log_weight);
        scaled_denominator_ += 1.0;
        for (std::size_t j = 0; j < n_; ++j) scaled_numerator_[j] += x[j];
    } else {
        const double w = std::exp(log_weight - log_scale_);
        scaled_denominator_ += w;
        for (std::size_t j = 0; j < n_; ++j) scaled_numerator_[j] += x[j] * w;
    }
}

void RatioAccumulator::rescale_to(double new_scale) {
    if (scaled_denominator_ > 0.0) {
        const double r = std::exp(log_scale_ - new_scale);
        scaled_denominator_ *= r;
        for (double& v : scaled_numerator_) v *= r;
    }
    log_scale_ = new_scale;
}

void RatioAccumulator::merge(const RatioAccumulator& other) {
    if (other.n_ != n_) throw ArityMismatch("accumulator dimensions differ");
    count_ += other.count_;
    if (!saturated_at_ && other.saturated_at_) saturated_at_ = other.saturated_at_;
    if (other.scaled_denominator_ == 0.0) return;
    if (other.log_scale_ > log_scale_) rescale_to(other.log_scale_);
    const double r = std::exp(other.log_scale_ - log_scale_);
    scaled_denominator_ += other.scaled_denominator_ * r;
    for (std::size_t j = 0; j < n_; ++j) scaled_numerator_[j] += other.scaled_numerator_[j] * r;
}

Vec RatioAccumulator::estimate() const {
    if (saturated_at_) return *saturated_at_;
    if (count_ == 0 || scaled_denominator_ == 0.0)
        throw EmptyEstimator("no finite-weight samples consumed");
    Vec out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = scaled_numerator_[j] / scaled_denominator_;
    return out;
}

} // namespace sgrf
