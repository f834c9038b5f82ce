#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "somlc/error.hpp"
#include "somlc/lang.hpp"
#include "somlc/metrics.hpp"
#include "somlc/space.hpp"

namespace somlc {

/// (Ch, Cj) means Ch is more specific than Cj. Irreflexive and transitive.
using SpecificityRelation = std::set<std::pair<std::string, std::string>>;

namespace detail {

inline bool cycle_path(const SpecificityRelation& rel, const std::string& start,
                       const std::string& at, std::vector<std::string>& path) {
    for (const auto& [h, j] : rel) {
        if (h != at) continue;
        if (j == start) {
            path.push_back(j);
            return true;
        }
        if (std::find(path.begin(), path.end(), j) != path.end()) continue;
        path.push_back(j);
        if (cycle_path(rel, start, j, path)) return true;
        path.pop_back();
    }
    return false;
}

inline std::string find_cycle_text(const SpecificityRelation& rel, const std::string& start) {
    std::vector<std::string> path{start};
    cycle_path(rel, start, start, path);
    std::string text = path.front();
    for (std::size_t i = 1; i < path.size(); ++i) text += " > " + path[i];
    return text;
}

}  // namespace detail

/// Warshall closure; rejects relations whose closure is reflexive anywhere.
inline SpecificityRelation transitive_closure(const SpecificityRelation& base) {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    auto intern = [&](const std::string& n) {
        auto [it, inserted] = index.emplace(n, names.size());
        if (inserted) names.push_back(n);
        return it->second;
    };
    for (const auto& [h, j] : base) {
        intern(h);
        intern(j);
    }
    const std::size_t n = names.size();
    std::vector<char> m(n * n, 0);
    for (const auto& [h, j] : base) m[index[h] * n + index[j]] = 1;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i * n + k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (m[k * n + j]) m[i * n + j] = 1;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i * n + i]) {
            throw ConfigError("specificity relation has a cycle: " +
                              detail::find_cycle_text(base, names[i]));
        }
    }
    SpecificityRelation out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (m[i * n + j]) out.emplace(names[i], names[j]);
        }
    }
    return out;
}

/// The concept-wise multipreference model of a trained map: the stimulus
/// space induces one preference per category (by distance), the specificity
/// relation arbitrates between them in the global preference.
class CwmModel {
public:
    CwmModel(StimulusSpace space, SpecificityRelation specificity)
        : space_(std::move(space)), specificity_(std::move(specificity)) {
        const std::size_t k = space_.category_count();
        matrix_.assign(k * k, 0);
        for (const auto& [h, j] : specificity_) {
            if (space_.has_category(h) && space_.has_category(j)) {
                matrix_[space_.category_index(h) * k + space_.category_index(j)] = 1;
            }
        }
    }

    const StimulusSpace& space() const { return space_; }
    const SpecificityRelation& specificity() const { return specificity_; }

    bool more_specific(std::size_t h, std::size_t j) const {
        return matrix_[h * space_.category_count() + j] != 0;
    }

private:
    StimulusSpace space_;
    SpecificityRelation specificity_;
    std::vector<char> matrix_;
};

// --- extensions ------------------------------------------------------------

/// C^I as a mask over the domain. Atoms are the distance-threshold sets
/// {y | d(y,C) <= d_max,C}; booleans act set-theoretically.
inline std::vector<char> extension_mask(const StimulusSpace& space, const Concept& c) {
    const std::size_t n = space.size();
    switch (c.kind()) {
        case Concept::Kind::Top:
            return std::vector<char>(n, 1);
        case Concept::Kind::Bot:
            return std::vector<char>(n, 0);
        case Concept::Kind::Atom: {
            const std::size_t cat = space.category_index(c.atom_name());
            const double d_max = space.stats(cat).d_max;
            std::vector<char> out(n, 0);
            for (std::size_t e = 0; e < n; ++e) {
                out[e] = space.distance(e, cat) <= d_max;
            }
            return out;
        }
        case Concept::Kind::Not: {
            std::vector<char> out = extension_mask(space, c.child());
            for (auto& b : out) b = !b;
            return out;
        }
        case Concept::Kind::And: {
            std::vector<char> out = extension_mask(space, c.lhs());
            const std::vector<char> r = extension_mask(space, c.rhs());
            for (std::size_t e = 0; e < n; ++e) out[e] = out[e] && r[e];
            return out;
        }
        case Concept::Kind::Or: {
            std::vector<char> out = extension_mask(space, c.lhs());
            const std::vector<char> r = extension_mask(space, c.rhs());
            for (std::size_t e = 0; e < n; ++e) out[e] = out[e] || r[e];
            return out;
        }
    }
    return {};
}

inline std::vector<std::string> ids_of_mask(const StimulusSpace& space,
                                            const std::vector<char>& mask) {
    std::vector<std::string> out;
    for (std::size_t e = 0; e < mask.size(); ++e) {
        if (mask[e]) out.push_back(space.domain()[e].id);
    }
    return out;
}

inline std::vector<std::string> extension(const CwmModel& model, const Concept& c) {
    return ids_of_mask(model.space(), extension_mask(model.space(), c));
}

// --- preferences -----------------------------------------------------------

inline bool pref_less(const CwmModel& model, const std::string& category, const std::string& x,
                      const std::string& y) {
    const auto& sp = model.space();
    const std::size_t c = sp.category_index(category);
    return sp.distance(sp.element_index(x), c) < sp.distance(sp.element_index(y), c);
}

inline bool pref_equiv(const CwmModel& model, const std::string& category, const std::string& x,
                       const std::string& y) {
    const auto& sp = model.space();
    const std::size_t c = sp.category_index(category);
    return sp.distance(sp.element_index(x), c) == sp.distance(sp.element_index(y), c);
}

/// Modified Pareto combination: x < y iff x is strictly closer for some
/// category, and for every category where it is not weakly closer, a more
/// specific category strictly prefers x.
inline bool global_less_at(const CwmModel& model, std::size_t x, std::size_t y) {
    const auto& sp = model.space();
    const std::size_t k = sp.category_count();
    bool some_strict = false;
    for (std::size_t c = 0; c < k; ++c) {
        if (sp.distance(x, c) < sp.distance(y, c)) {
            some_strict = true;
            break;
        }
    }
    if (!some_strict) return false;
    for (std::size_t j = 0; j < k; ++j) {
        if (sp.distance(x, j) <= sp.distance(y, j)) continue;
        bool overridden = false;
        for (std::size_t h = 0; h < k; ++h) {
            if (model.more_specific(h, j) && sp.distance(x, h) < sp.distance(y, h)) {
                overridden = true;
                break;
            }
        }
        if (!overridden) return false;
    }
    return true;
}

inline bool global_less(const CwmModel& model, const std::string& x, const std::string& y) {
    const auto& sp = model.space();
    return global_less_at(model, sp.element_index(x), sp.element_index(y));
}

// --- typicality ------------------------------------------------------------

/// (T(C))^I: the members of C^I with no globally preferred member of C^I,
/// computed by pairwise elimination.
inline std::vector<char> typ_extension_mask(const CwmModel& model, const Concept& c) {
    std::vector<char> ext = extension_mask(model.space(), c);
    std::vector<std::size_t> members;
    for (std::size_t e = 0; e < ext.size(); ++e) {
        if (ext[e]) members.push_back(e);
    }
    std::vector<char> out = ext;
    for (std::size_t u : members) {
        for (std::size_t z : members) {
            if (z != u && global_less_at(model, z, u)) {
                out[u] = 0;
                break;
            }
        }
    }
    return out;
}

inline std::vector<std::string> typ_extension(const CwmModel& model, const Concept& c) {
    return ids_of_mask(model.space(), typ_extension_mask(model, c));
}

/// Most typical members of a learned category under that category's own
/// preference alone: the members of its extension at minimal distance.
inline std::vector<char> typ_extension_mask_under(const CwmModel& model,
                                                  const std::string& category) {
    const auto& sp = model.space();
    const std::size_t cat = sp.category_index(category);
    std::vector<char> ext = extension_mask(sp, Concept::atom(category));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < ext.size(); ++e) {
        if (ext[e]) best = std::min(best, sp.distance(e, cat));
    }
    for (std::size_t e = 0; e < ext.size(); ++e) {
        if (ext[e] && sp.distance(e, cat) != best) ext[e] = 0;
    }
    return ext;
}

// --- model checking --------------------------------------------------------

enum class CheckMethod { General, FastExact, FastSufficient };

struct CheckResult {
    bool holds = false;
    CheckMethod method = CheckMethod::General;
    std::optional<std::string> counterexample;  // set iff !holds and method is General
    std::optional<double> plausibility;
};

namespace detail {

inline CheckResult subset_check(const StimulusSpace& space, const std::vector<char>& sub,
                                const std::vector<char>& super) {
    for (std::size_t e = 0; e < sub.size(); ++e) {
        if (sub[e] && !super[e]) {
            return CheckResult{false, CheckMethod::General, space.domain()[e].id, std::nullopt};
        }
    }
    return CheckResult{true, CheckMethod::General, std::nullopt, std::nullopt};
}

}  // namespace detail

/// lhs^I ⊆ rhs^I by explicit extension computation.
inline CheckResult check_strict_general(const CwmModel& model, const Concept& lhs,
                                        const Concept& rhs) {
    return detail::subset_check(model.space(), extension_mask(model.space(), lhs),
                                extension_mask(model.space(), rhs));
}

/// (T(lhs))^I ⊆ rhs^I. For a learned category on the left, the typical
/// elements are the minima under that category's own preference; for compound
/// concepts they are the minima under the global preference.
inline CheckResult check_typ_general(const CwmModel& model, const Concept& lhs,
                                     const Concept& rhs) {
    std::vector<char> typical = lhs.kind() == Concept::Kind::Atom
                                    ? typ_extension_mask_under(model, lhs.atom_name())
                                    : typ_extension_mask(model, lhs);
    return detail::subset_check(model.space(), typical, extension_mask(model.space(), rhs));
}

/// Category-level typicality via the recorded measures:
/// holds iff d(BMU_Ci, Cj) <= d_max,Cj. Exact, O(b^2), and annotated with the
/// plausibility degree e^{-rd} whether or not it holds.
inline CheckResult check_typ_fast(const CwmModel& model, const std::string& ci,
                                  const std::string& cj) {
    const CategoryStats& si = model.space().stats(ci);
    const CategoryStats& sj = model.space().stats(cj);
    if (!si.has_exemplars() || !sj.has_exemplars()) {
        throw EvalError("fast check needs exemplars for both categories");
    }
    const double d = bmu_set_distance(si, sj);
    const double pl = std::exp(-relative_distance_from(d, sj.d_max));
    return CheckResult{d <= sj.d_max, CheckMethod::FastExact, std::nullopt, pl};
}

/// Category-level strict inclusion via the triangle-inequality bound:
/// d(BMU_Ci, Cj) + d_max,Ci <= d_max,Cj. Sufficient but not necessary, so a
/// negative answer may be refined by check_strict_general.
inline CheckResult check_strict_fast(const CwmModel& model, const std::string& ci,
                                     const std::string& cj) {
    const CategoryStats& si = model.space().stats(ci);
    const CategoryStats& sj = model.space().stats(cj);
    if (!si.has_exemplars() || !sj.has_exemplars()) {
        throw EvalError("fast check needs exemplars for both categories");
    }
    const double d = bmu_set_distance(si, sj);
    return CheckResult{d + si.d_max <= sj.d_max, CheckMethod::FastSufficient, std::nullopt,
                       std::nullopt};
}

// --- specificity inference and KB extraction --------------------------------

/// (Ch, Cj) iff Ch's extension is strictly included in Cj's.
inline SpecificityRelation infer_specificity(const StimulusSpace& space) {
    SpecificityRelation out;
    const auto& names = space.category_names();
    std::vector<std::vector<char>> masks;
    masks.reserve(names.size());
    for (const std::string& n : names) masks.push_back(extension_mask(space, Concept::atom(n)));

    auto subset = [&](const std::vector<char>& a, const std::vector<char>& b) {
        for (std::size_t e = 0; e < a.size(); ++e) {
            if (a[e] && !b[e]) return false;
        }
        return true;
    };
    for (std::size_t h = 0; h < names.size(); ++h) {
        for (std::size_t j = 0; j < names.size(); ++j) {
            if (h == j) continue;
            if (subset(masks[h], masks[j]) && !subset(masks[j], masks[h])) {
                out.emplace(names[h], names[j]);
            }
        }
    }
    return out;
}

inline SpecificityRelation infer_specificity(const CwmModel& model) {
    return infer_specificity(model.space());
}

/// Builds the cwm-model: domain and statistics from the trained map, then
/// specificity as the transitive closure of the inferred relation united with
/// the overrides. Cycles are rejected.
inline CwmModel build_cwm(const SomMap& map, const std::vector<Stimulus>& stimuli,
                          const std::vector<Stimulus>& probes = {},
                          const std::vector<std::pair<std::string, std::string>>& overrides = {},
                          std::size_t cache_budget = StimulusSpace::kDefaultCacheBudget) {
    StimulusSpace space = build_space(map, stimuli, probes, {}, cache_budget);
    SpecificityRelation rel = infer_specificity(space);
    for (const auto& [h, j] : overrides) {
        if (!space.has_category(h)) throw LookupError("unknown category '" + h + "' in override");
        if (!space.has_category(j)) throw LookupError("unknown category '" + j + "' in override");
        rel.emplace(h, j);
    }
    return CwmModel(std::move(space), transitive_closure(rel));
}

struct KbEntry {
    Axiom axiom;
    std::optional<double> plausibility;  // defeasible entries only
};

/// For every ordered pair of learned categories (lexicographic): the strict
/// inclusion when extension inclusion holds, and the defeasible inclusion
/// with its plausibility when the fast typicality condition holds and the
/// plausibility clears the threshold. Categories without exemplars yet are
/// skipped; they are reported as C <= bot states by the trace layer instead.
inline std::vector<KbEntry> extract_kb(const CwmModel& model, double threshold) {
    std::vector<KbEntry> out;
    const auto& space = model.space();
    const auto& names = space.category_names();

    std::vector<std::vector<char>> masks;
    masks.reserve(names.size());
    for (const std::string& n : names) masks.push_back(extension_mask(space, Concept::atom(n)));

    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!space.stats(i).has_exemplars()) continue;
        for (std::size_t j = 0; j < names.size(); ++j) {
            if (i == j || !space.stats(j).has_exemplars()) continue;
            bool strict = true;
            for (std::size_t e = 0; e < masks[i].size(); ++e) {
                if (masks[i][e] && !masks[j][e]) {
                    strict = false;
                    break;
                }
            }
            if (strict) {
                out.push_back(
                    {StrictInclusion{Concept::atom(names[i]), Concept::atom(names[j])},
                     std::nullopt});
            }
            const CheckResult typ = check_typ_fast(model, names[i], names[j]);
            if (typ.holds && *typ.plausibility >= threshold) {
                out.push_back(
                    {DefeasibleInclusion{Concept::atom(names[i]), Concept::atom(names[j])},
                     typ.plausibility});
            }
        }
    }
    return out;
}

/// One statement per line; defeasible entries carry their plausibility.
inline std::string format_kb(const std::vector<KbEntry>& kb) {
    std::string out;
    for (const KbEntry& e : kb) {
        out += print_axiom(e.axiom);
        if (e.plausibility) out += " @ plausibility=" + format_double(*e.plausibility);
        out += '\n';
    }
    return out;
}

/// Override file: lines `Ch > Cj`, '#' comments.
inline std::vector<std::pair<std::string, std::string>> read_specificity_file(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = line.substr(0, line.find('#'));
        std::istringstream fields(body);
        std::string h, gt, j, extra;
        if (!(fields >> h)) continue;  // blank line
        if (!(fields >> gt >> j) || gt != ">" || (fields >> extra)) {
            throw ParseError("expected 'MoreSpecific > LessSpecific'", line_no, 1);
        }
        if (!is_identifier(h) || !is_identifier(j)) {
            throw ParseError("category names must be identifiers", line_no, 1);
        }
        out.emplace_back(h, j);
    }
    return out;
}

}  // namespace somlc
