#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "somlc/error.hpp"
#include "somlc/metrics.hpp"
#include "somlc/som.hpp"
#include "somlc/stimulus.hpp"

namespace somlc {

enum class ElementKind { InputStimulus, BmuElement, Probe };

/// An element of the domain of possible stimuli. A BMU element is distinct
/// from every stimulus even when their vectors coincide.
struct DomainElement {
    std::string id;
    Vector vector;
    ElementKind kind = ElementKind::InputStimulus;
};

/// The finite domain plus per-category statistics, shared by the
/// preferential, fuzzy and probabilistic interpretations. Distances from
/// elements to category representations are precomputed when the table fits
/// the cache budget, and recomputed on demand otherwise; results are
/// identical either way.
class StimulusSpace {
public:
    static constexpr std::size_t kDefaultCacheBudget = std::size_t{1} << 20;

    StimulusSpace(std::vector<DomainElement> domain,
                  std::map<std::string, CategoryStats> categories,
                  std::size_t cache_budget = kDefaultCacheBudget)
        : domain_(std::move(domain)), categories_(std::move(categories)) {
        for (std::size_t i = 0; i < domain_.size(); ++i) {
            if (!element_index_.emplace(domain_[i].id, i).second) {
                throw ConfigError("duplicate domain element id '" + domain_[i].id + "'");
            }
        }
        for (const auto& [name, st] : categories_) {
            category_index_.emplace(name, names_.size());
            names_.push_back(name);
            by_index_.push_back(&st);
        }
        if (!domain_.empty() && domain_.size() * names_.size() <= cache_budget) {
            cache_.resize(domain_.size() * names_.size());
            for (std::size_t e = 0; e < domain_.size(); ++e) {
                for (std::size_t c = 0; c < names_.size(); ++c) {
                    cache_[e * names_.size() + c] = compute_distance(e, c);
                }
            }
        }
    }

    const std::vector<DomainElement>& domain() const { return domain_; }
    std::size_t size() const { return domain_.size(); }
    std::size_t category_count() const { return names_.size(); }
    const std::vector<std::string>& category_names() const { return names_; }
    const std::map<std::string, CategoryStats>& categories() const { return categories_; }

    const CategoryStats& stats(std::size_t cat) const { return *by_index_[cat]; }
    const CategoryStats& stats(const std::string& name) const {
        return stats(category_index(name));
    }

    bool has_element(const std::string& id) const { return element_index_.count(id) != 0; }
    bool has_category(const std::string& name) const { return category_index_.count(name) != 0; }

    std::size_t element_index(const std::string& id) const {
        auto it = element_index_.find(id);
        if (it == element_index_.end()) throw LookupError("unknown element '" + id + "'");
        return it->second;
    }

    std::size_t category_index(const std::string& name) const {
        auto it = category_index_.find(name);
        if (it == category_index_.end()) throw LookupError("unknown category '" + name + "'");
        return it->second;
    }

    /// d(element, category); +inf when the category has no exemplars yet.
    double distance(std::size_t elem, std::size_t cat) const {
        if (!cache_.empty()) return cache_[elem * names_.size() + cat];
        return compute_distance(elem, cat);
    }

    bool cached() const { return !cache_.empty(); }

private:
    double compute_distance(std::size_t elem, std::size_t cat) const {
        const CategoryStats& st = *by_index_[cat];
        if (!st.has_exemplars()) return std::numeric_limits<double>::infinity();
        return dist_to_category(domain_[elem].vector, st);
    }

    std::vector<DomainElement> domain_;
    std::map<std::string, CategoryStats> categories_;
    std::vector<std::string> names_;
    std::vector<const CategoryStats*> by_index_;
    std::map<std::string, std::size_t> element_index_;
    std::map<std::string, std::size_t> category_index_;
    std::vector<double> cache_;
};

/// Assembles the domain: the labeled stimuli, then one BMU element per
/// distinct BMU weight vector (ids bmu_<row>_<col>), then the probes.
/// `category_universe` forces an (empty) entry for categories that have no
/// exemplars among `labeled`, which is how partially trained models are
/// represented.
inline StimulusSpace build_space(const SomMap& map, const std::vector<Stimulus>& labeled,
                                 const std::vector<Stimulus>& probes = {},
                                 const std::vector<std::string>& category_universe = {},
                                 std::size_t cache_budget = StimulusSpace::kDefaultCacheBudget) {
    auto categories = category_stats(map, labeled);
    for (const std::string& name : category_universe) {
        if (!is_identifier(name)) throw ConfigError("category name '" + name + "' is invalid");
        auto [it, inserted] = categories.try_emplace(name);
        if (inserted) it->second.name = name;
    }

    std::vector<DomainElement> domain;
    domain.reserve(labeled.size() * 2 + probes.size());
    for (const Stimulus& s : labeled) {
        domain.push_back({s.id, s.vector, ElementKind::InputStimulus});
    }
    std::set<Vector> seen;
    for (const Stimulus& s : labeled) {
        const GridCoord b = find_bmu(map, s.vector);
        const Vector& w = map.weight_at(b.row, b.col);
        if (seen.insert(w).second) {
            domain.push_back({"bmu_" + std::to_string(b.row) + "_" + std::to_string(b.col), w,
                              ElementKind::BmuElement});
        }
    }
    for (const Stimulus& p : probes) {
        if (!p.is_probe()) {
            throw ConfigError("probe '" + p.id + "' must not carry a category label");
        }
        if (p.vector.size() != map.config.dim) {
            throw ConfigError("probe '" + p.id + "' has dimension " +
                              std::to_string(p.vector.size()) + ", map expects " +
                              std::to_string(map.config.dim));
        }
        domain.push_back({p.id, p.vector, ElementKind::Probe});
    }
    return StimulusSpace(std::move(domain), std::move(categories), cache_budget);
}

}  // namespace somlc
