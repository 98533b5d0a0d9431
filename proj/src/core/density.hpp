#pragma once

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace sgrf {

// Parameters of the singular density g(x) = 1 / (f(x)^2 + eta^2)^k.
struct DensityParams {
    int k = 1;          // >= 1
    double eta = 1e-8;  // >= 0; 0 only meaningful with uniform sampling

    void validate() const {
        if (k < 1) throw InvalidArgument("density exponent k must be >= 1");
        if (!(eta >= 0.0)) throw InvalidArgument("eta must be non-negative");
    }
};

// log g = -k * ln(f^2 + eta^2), computed without under/overflow of f^2.
// Returns +inf exactly when f == 0 and eta == 0 (an exact root hit).
inline double log_g(double f_val, const DensityParams& p) {
    const double af = std::fabs(f_val);
    if (af == 0.0 && p.eta == 0.0) return std::numeric_limits<double>::infinity();
    if (af >= p.eta) {
        const double r = p.eta / af;
        return -p.k * (2.0 * std::log(af) + std::log1p(r * r));
    }
    const double r = af / p.eta;
    return -p.k * (2.0 * std::log(p.eta) + std::log1p(r * r));
}

// Smallest k with 2*k*m >= n + m (denominator of the center-of-mass ratio
// divergent as eta -> 0 for a root of multiplicity m), floored at n to match
// the g_n choice used for the n-dimensional estimator.
inline int default_k(int n, int multiplicity) {
    if (n < 1 || multiplicity < 1)
        throw InvalidArgument("default_k requires n >= 1 and multiplicity >= 1");
    const int m = multiplicity;
    const int divergent = (n + m + 2 * m - 1) / (2 * m); // ceil((n+m)/(2m))
    return n > divergent ? n : divergent;
}

} // namespace sgrf
