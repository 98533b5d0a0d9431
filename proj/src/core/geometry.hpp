#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace sgrf {

using Vec = std::vector<double>;

struct ExclusionBall {
    Vec center;
    double radius = 0.0; // > 0
};

// Axis-aligned box with optional exclusion balls. The box is closed, the
// balls are open: a point on a ball's surface still belongs to the domain.
class Domain {
public:
    Domain(Vec lower, Vec upper);

    std::size_t dim() const { return lower_.size(); }
    const Vec& lower() const { return lower_; }
    const Vec& upper() const { return upper_; }
    const std::vector<ExclusionBall>& exclusions() const { return exclusions_; }

    void add_exclusion(ExclusionBall ball);

    bool contains(const Vec& x) const;

    // Box volume; exclusions are deliberately not subtracted (the ratio
    // estimator is normalization independent, so the uniform density need
    // not be renormalized after carving).
    double volume() const;

    // Euclidean length of the box diagonal (used for relative radii).
    double diagonal() const;

private:
    Vec lower_;
    Vec upper_;
    std::vector<ExclusionBall> exclusions_;
};

} // namespace sgrf
