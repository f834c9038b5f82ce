#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "somlc/error.hpp"

namespace somlc {

using Vector = std::vector<double>;

inline bool all_finite(const Vector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

/// Squared Euclidean distance; callers guarantee equal lengths.
inline double squared_distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw ConfigError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
    }
    return std::sqrt(squared_distance(a, b));
}

}  // namespace somlc
