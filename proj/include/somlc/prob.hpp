#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "somlc/error.hpp"
#include "somlc/fuzzy.hpp"

namespace somlc {

/// Probability of fuzzy concepts over the map's fuzzy interpretation:
/// P(C) = sum over the domain of C^I(d) * p(d). Restricted to the Zadeh and
/// Lukasiewicz families with negation 1-a, the two whose weighted sums behave
/// like probabilities (PZ-compatibility); other families are rejected.
class ProbModel {
public:
    static ProbModel uniform(FuzzyModel fuzzy) {
        const std::size_t n = fuzzy.space().size();
        if (n == 0) throw EvalError("probability over an empty domain");
        std::vector<double> mass(n, 1.0 / static_cast<double>(n));
        return ProbModel(std::move(fuzzy), std::move(mass), 1.0);
    }

    /// Masses by element id; missing elements get mass 0, unknown ids are
    /// rejected. The masses are renormalized to sum to 1; callers may inspect
    /// raw_mass_sum() to warn when the file was off by more than a rounding
    /// error.
    static ProbModel with_masses(FuzzyModel fuzzy, const std::map<std::string, double>& by_id) {
        const auto& sp = fuzzy.space();
        std::vector<double> mass(sp.size(), 0.0);
        double sum = 0.0;
        for (const auto& [id, m] : by_id) {
            if (m < 0.0) throw ConfigError("negative mass for element '" + id + "'");
            mass[sp.element_index(id)] = m;
            sum += m;
        }
        if (!(sum > 0.0)) throw ConfigError("distribution must have positive total mass");
        for (double& m : mass) m /= sum;
        return ProbModel(std::move(fuzzy), std::move(mass), sum);
    }

    const FuzzyModel& fuzzy() const { return fuzzy_; }
    double mass(std::size_t elem) const { return mass_[elem]; }
    bool is_uniform() const { return uniform_; }
    double raw_mass_sum() const { return raw_sum_; }

private:
    ProbModel(FuzzyModel fuzzy, std::vector<double> mass, double raw_sum)
        : fuzzy_(std::move(fuzzy)), mass_(std::move(mass)), raw_sum_(raw_sum) {
        const FuzzyLogic logic = fuzzy_.family().logic;
        if (logic != FuzzyLogic::Zadeh && logic != FuzzyLogic::Lukasiewicz) {
            throw EvalError("probability operations require the Zadeh or Lukasiewicz family "
                            "(PZ-compatible connectives with negation 1-a); got '" +
                            std::string(fuzzy_.family().name()) + "'");
        }
        const auto [lo, hi] = std::minmax_element(mass_.begin(), mass_.end());
        uniform_ = *hi - *lo <= 1e-15;
    }

    FuzzyModel fuzzy_;
    std::vector<double> mass_;
    double raw_sum_ = 1.0;
    bool uniform_ = true;
};

inline double prob(const ProbModel& model, const Concept& c) {
    const std::size_t n = model.fuzzy().space().size();
    if (model.is_uniform()) {
        // one division instead of n products, so P(top) is exactly n/n = 1
        double sum = 0.0;
        for (std::size_t e = 0; e < n; ++e) sum += membership_at(model.fuzzy(), c, e);
        return sum / static_cast<double>(n);
    }
    double sum = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
        sum += membership_at(model.fuzzy(), c, e) * model.mass(e);
    }
    return sum;
}

/// Smets conditional probability of fuzzy events: P(C|D) = P(D and C) / P(D),
/// with the conjunction interpreted by the model's t-norm.
inline double cond_prob(const ProbModel& model, const Concept& c, const Concept& given) {
    const double pg = prob(model, given);
    if (pg == 0.0) throw EvalError("conditioning on '" + print_concept(given) +
                                   "' with probability 0");
    return prob(model, Concept::conjunction(given, c)) / pg;
}

/// P(C|x) where x stands for the crisp singleton {x}: evaluated through the
/// explicit weighted sums, as an independent route to membership.
inline double cond_prob_singleton(const ProbModel& model, const Concept& c,
                                  const std::string& element) {
    const auto& sp = model.fuzzy().space();
    const std::size_t x = sp.element_index(element);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t e = 0; e < sp.size(); ++e) {
        const double indicator = e == x ? 1.0 : 0.0;
        num += model.fuzzy().family().tnorm(indicator, membership_at(model.fuzzy(), c, e)) *
               model.mass(e);
        den += indicator * model.mass(e);
    }
    if (den == 0.0) throw EvalError("element '" + element + "' has probability mass 0");
    return num / den;
}

/// P(C|x) = C^I(x).
inline double prob_given_element(const ProbModel& model, const Concept& c,
                                 const std::string& element) {
    const std::size_t x = model.fuzzy().space().element_index(element);
    if (model.mass(x) == 0.0) {
        throw EvalError("element '" + element + "' has probability mass 0");
    }
    return membership_at(model.fuzzy(), c, x);
}

/// M(C): the size of the fuzzy concept.
inline double concept_size(const ProbModel& model, const Concept& c) {
    double sum = 0.0;
    for (std::size_t e = 0; e < model.fuzzy().space().size(); ++e) {
        sum += membership_at(model.fuzzy(), c, e);
    }
    return sum;
}

/// P(x|C). Under a uniform distribution this is C^I(x) / M(C); otherwise the
/// general quotient P({x} and C) / P(C).
inline double likelihood(const ProbModel& model, const std::string& element, const Concept& c) {
    const auto& sp = model.fuzzy().space();
    const std::size_t x = sp.element_index(element);
    if (model.is_uniform()) {
        const double size = concept_size(model, c);
        if (size == 0.0) throw EvalError("concept '" + print_concept(c) + "' has size 0");
        return membership_at(model.fuzzy(), c, x) / size;
    }
    const double pc = prob(model, c);
    if (pc == 0.0) throw EvalError("concept '" + print_concept(c) + "' has probability 0");
    return membership_at(model.fuzzy(), c, x) * model.mass(x) / pc;
}

}  // namespace somlc
