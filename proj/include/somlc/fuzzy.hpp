#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "somlc/error.hpp"
#include "somlc/lang.hpp"
#include "somlc/space.hpp"

namespace somlc {

enum class FuzzyLogic { Zadeh, Goedel, Lukasiewicz, Product };

namespace connectives {

inline double t_min(double a, double b) { return std::min(a, b); }
inline double s_max(double a, double b) { return std::max(a, b); }
inline double impl_kleene(double a, double b) { return std::max(1.0 - a, b); }
inline double neg_standard(double a) { return 1.0 - a; }

inline double impl_goedel(double a, double b) { return a <= b ? 1.0 : b; }
inline double neg_goedel(double a) { return a == 0.0 ? 1.0 : 0.0; }

inline double t_luk(double a, double b) { return std::max(0.0, a + b - 1.0); }
inline double s_luk(double a, double b) { return std::min(1.0, a + b); }
inline double impl_luk(double a, double b) { return std::min(1.0, 1.0 - a + b); }

inline double t_prod(double a, double b) { return a * b; }
inline double s_prod(double a, double b) { return a + b - a * b; }
inline double impl_prod(double a, double b) { return a == 0.0 ? 1.0 : std::min(1.0, b / a); }

}  // namespace connectives

/// t-norm, s-norm, implication and negation interpreting the connectives.
struct ConnectiveFamily {
    FuzzyLogic logic = FuzzyLogic::Zadeh;
    double (*tnorm)(double, double) = connectives::t_min;
    double (*snorm)(double, double) = connectives::s_max;
    double (*implication)(double, double) = connectives::impl_kleene;
    double (*negation)(double) = connectives::neg_standard;

    static const ConnectiveFamily& get(FuzzyLogic logic) {
        using namespace connectives;
        static const ConnectiveFamily zadeh{FuzzyLogic::Zadeh, t_min, s_max, impl_kleene,
                                            neg_standard};
        static const ConnectiveFamily goedel{FuzzyLogic::Goedel, t_min, s_max, impl_goedel,
                                             neg_goedel};
        static const ConnectiveFamily luk{FuzzyLogic::Lukasiewicz, t_luk, s_luk, impl_luk,
                                          neg_standard};
        static const ConnectiveFamily prod{FuzzyLogic::Product, t_prod, s_prod, impl_prod,
                                           neg_goedel};
        switch (logic) {
            case FuzzyLogic::Zadeh: return zadeh;
            case FuzzyLogic::Goedel: return goedel;
            case FuzzyLogic::Lukasiewicz: return luk;
            case FuzzyLogic::Product: return prod;
        }
        return zadeh;
    }

    static const ConnectiveFamily& from_name(std::string_view name) {
        if (name == "zadeh") return get(FuzzyLogic::Zadeh);
        if (name == "goedel") return get(FuzzyLogic::Goedel);
        if (name == "lukasiewicz") return get(FuzzyLogic::Lukasiewicz);
        if (name == "product") return get(FuzzyLogic::Product);
        throw ConfigError("unknown fuzzy logic '" + std::string(name) +
                          "' (expected zadeh|goedel|lukasiewicz|product)");
    }

    std::string_view name() const {
        switch (logic) {
            case FuzzyLogic::Zadeh: return "zadeh";
            case FuzzyLogic::Goedel: return "goedel";
            case FuzzyLogic::Lukasiewicz: return "lukasiewicz";
            case FuzzyLogic::Product: return "product";
        }
        return "?";
    }
};

/// Fuzzy interpretation of the map: each learned category maps an element to
/// its generalization degree e^{-rd}; compound concepts combine through the
/// selected family. The domain is finite, so every inf is attained.
class FuzzyModel {
public:
    FuzzyModel(StimulusSpace space, const ConnectiveFamily& family)
        : space_(std::move(space)), family_(family) {}

    const StimulusSpace& space() const { return space_; }
    const ConnectiveFamily& family() const { return family_; }

private:
    StimulusSpace space_;
    ConnectiveFamily family_;
};

inline FuzzyModel build_fuzzy(const SomMap& map, const std::vector<Stimulus>& stimuli,
                              const std::vector<Stimulus>& probes = {},
                              FuzzyLogic logic = FuzzyLogic::Zadeh,
                              std::size_t cache_budget = StimulusSpace::kDefaultCacheBudget) {
    return FuzzyModel(build_space(map, stimuli, probes, {}, cache_budget),
                      ConnectiveFamily::get(logic));
}

inline double membership_at(const FuzzyModel& model, const Concept& c, std::size_t elem) {
    const auto& f = model.family();
    switch (c.kind()) {
        case Concept::Kind::Top: return 1.0;
        case Concept::Kind::Bot: return 0.0;
        case Concept::Kind::Atom: {
            const std::size_t cat = model.space().category_index(c.atom_name());
            return std::exp(-relative_distance_from(model.space().distance(elem, cat),
                                                    model.space().stats(cat).d_max));
        }
        case Concept::Kind::Not: return f.negation(membership_at(model, c.child(), elem));
        case Concept::Kind::And:
            return f.tnorm(membership_at(model, c.lhs(), elem),
                           membership_at(model, c.rhs(), elem));
        case Concept::Kind::Or:
            return f.snorm(membership_at(model, c.lhs(), elem),
                           membership_at(model, c.rhs(), elem));
    }
    return 0.0;
}

inline double membership(const FuzzyModel& model, const Concept& c, const std::string& element) {
    return membership_at(model, c, model.space().element_index(element));
}

struct DegreeResult {
    double degree = 1.0;
    std::string witness;  // element attaining the minimum
};

/// (lhs <= rhs)^I = min over the domain of lhs^I(x) |> rhs^I(x).
inline DegreeResult inclusion_degree(const FuzzyModel& model, const Concept& lhs,
                                     const Concept& rhs) {
    const auto& sp = model.space();
    if (sp.size() == 0) throw EvalError("inclusion degree over an empty domain");
    DegreeResult best{2.0, {}};
    for (std::size_t e = 0; e < sp.size(); ++e) {
        const double d =
            model.family().implication(membership_at(model, lhs, e), membership_at(model, rhs, e));
        if (d < best.degree) {
            best.degree = d;
            best.witness = sp.domain()[e].id;
        }
    }
    return best;
}

/// Comparison guard for non-strict thresholds: membership values are
/// compositions of exp and arithmetic, so >= and <= allow a 1e-9 slack.
inline constexpr double kDegreeEpsilon = 1e-9;

inline bool cmp_holds(Cmp cmp, double value, double bound) {
    switch (cmp) {
        case Cmp::Ge: return value >= bound - kDegreeEpsilon;
        case Cmp::Le: return value <= bound + kDegreeEpsilon;
        case Cmp::Gt: return value > bound;
        case Cmp::Lt: return value < bound;
    }
    return false;
}

struct FuzzyVerdict {
    bool holds = false;
    double degree = 0.0;
    std::optional<std::string> witness;
};

inline FuzzyVerdict check_fuzzy_axiom(const FuzzyModel& model, const Axiom& axiom) {
    if (const auto* inc = std::get_if<FuzzyInclusion>(&axiom)) {
        const DegreeResult d = inclusion_degree(model, inc->lhs, inc->rhs);
        return {cmp_holds(inc->cmp, d.degree, inc->bound), d.degree, d.witness};
    }
    if (const auto* as = std::get_if<FuzzyAssertion>(&axiom)) {
        const double m = membership(model, as->subject, as->individual);
        return {cmp_holds(as->cmp, m, as->bound), m, std::nullopt};
    }
    throw EvalError("not a fuzzy axiom: " + print_axiom(axiom));
}

}  // namespace somlc
