#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "somlc/error.hpp"
#include "somlc/som.hpp"
#include "somlc/stimulus.hpp"
#include "somlc/vec.hpp"

namespace somlc {

/// A category's learned representation: the distinct BMU weight vectors of
/// its exemplars, and the precision d_max = max over exemplars of the
/// distance to their own BMU.
struct CategoryStats {
    std::string name;
    std::vector<Vector> bmu_vectors;  // sorted, deduplicated by exact equality
    double d_max = 0.0;

    bool has_exemplars() const { return !bmu_vectors.empty(); }
};

/// One entry per category present in the data; categories without exemplars
/// are simply absent.
inline std::map<std::string, CategoryStats> category_stats(const SomMap& map,
                                                           const std::vector<Stimulus>& stimuli) {
    std::map<std::string, CategoryStats> out;
    for (const Stimulus& s : stimuli) {
        if (s.is_probe()) {
            throw ConfigError("category_stats requires labeled stimuli ('" + s.id +
                              "' has no category)");
        }
        const GridCoord b = find_bmu(map, s.vector);
        const Vector& w = map.weight_at(b.row, b.col);
        CategoryStats& st = out[s.category];
        st.name = s.category;
        st.bmu_vectors.push_back(w);
        st.d_max = std::max(st.d_max, euclidean_distance(s.vector, w));
    }
    for (auto& [name, st] : out) {
        std::sort(st.bmu_vectors.begin(), st.bmu_vectors.end());
        st.bmu_vectors.erase(std::unique(st.bmu_vectors.begin(), st.bmu_vectors.end()),
                             st.bmu_vectors.end());
    }
    return out;
}

/// d(y, C): minimum Euclidean distance from y to the category representation.
inline double dist_to_category(const Vector& y, const CategoryStats& stats) {
    if (!stats.has_exemplars()) {
        throw EvalError("category '" + stats.name + "' has no exemplars");
    }
    if (y.size() != stats.bmu_vectors.front().size()) {
        throw ConfigError("dimension mismatch against category '" + stats.name + "'");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& v : stats.bmu_vectors) {
        best = std::min(best, squared_distance(y, v));
    }
    return std::sqrt(best);
}

/// The relative-distance quotient with its degenerate rule: when d_max is 0
/// the category generalizes nowhere, so rd is 0 for exact matches and +inf
/// otherwise.
inline double relative_distance_from(double dist, double d_max) {
    if (d_max > 0.0) return dist / d_max;
    return dist == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

inline double relative_distance(const Vector& y, const CategoryStats& stats) {
    return relative_distance_from(dist_to_category(y, stats), stats.d_max);
}

/// gd(y, C) = e^{-rd(y, C)}, in [0,1]; 0 exactly when rd is +inf.
inline double generalization_degree(const Vector& y, const CategoryStats& stats) {
    return std::exp(-relative_distance(y, stats));
}

/// d(BMU_Ci, Cj): the largest distance of any src BMU vector from dst.
inline double bmu_set_distance(const CategoryStats& src, const CategoryStats& dst) {
    if (!src.has_exemplars()) throw EvalError("category '" + src.name + "' has no exemplars");
    double worst = 0.0;
    for (const Vector& v : src.bmu_vectors) {
        worst = std::max(worst, dist_to_category(v, dst));
    }
    return worst;
}

/// e^{-rd(BMU_Ci, Cj)}: how strongly the map supports T(Ci) <= Cj. Equals 1
/// exactly when every src BMU lies on the dst representation.
inline double plausibility(const CategoryStats& src, const CategoryStats& dst) {
    return std::exp(-relative_distance_from(bmu_set_distance(src, dst), dst.d_max));
}

}  // namespace somlc
