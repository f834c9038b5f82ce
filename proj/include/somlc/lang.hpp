#pragma once

#include <charconv>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "somlc/error.hpp"
#include "somlc/stimulus.hpp"

namespace somlc {

inline bool is_reserved_word(std::string_view s) {
    return s == "and" || s == "or" || s == "not" || s == "top" || s == "bot";
}

/// Immutable boolean concept tree: top, bot, atoms, complement, intersection
/// and union. Copies share structure.
class Concept {
public:
    enum class Kind { Top, Bot, Atom, Not, And, Or };

    static Concept top() { return Concept(std::make_shared<const Node>(Node{Kind::Top, {}, {}, {}})); }
    static Concept bot() { return Concept(std::make_shared<const Node>(Node{Kind::Bot, {}, {}, {}})); }

    static Concept atom(std::string name) {
        if (!is_identifier(name) || is_reserved_word(name)) {
            throw ConfigError("invalid atom name '" + name + "'");
        }
        return Concept(std::make_shared<const Node>(Node{Kind::Atom, std::move(name), {}, {}}));
    }

    static Concept negation(Concept c) {
        return Concept(std::make_shared<const Node>(Node{Kind::Not, {}, std::move(c.node_), {}}));
    }
    static Concept conjunction(Concept a, Concept b) {
        return Concept(
            std::make_shared<const Node>(Node{Kind::And, {}, std::move(a.node_), std::move(b.node_)}));
    }
    static Concept disjunction(Concept a, Concept b) {
        return Concept(
            std::make_shared<const Node>(Node{Kind::Or, {}, std::move(a.node_), std::move(b.node_)}));
    }

    Kind kind() const { return node_->kind; }
    const std::string& atom_name() const { return node_->name; }
    Concept child() const { return Concept(node_->a); }  // Not
    Concept lhs() const { return Concept(node_->a); }    // And/Or
    Concept rhs() const { return Concept(node_->b); }

    std::size_t node_count() const { return count(node_.get()); }
    std::size_t depth() const { return depth_of(node_.get()); }

    bool operator==(const Concept& other) const { return equal(node_.get(), other.node_.get()); }

private:
    struct Node {
        Kind kind;
        std::string name;
        std::shared_ptr<const Node> a, b;
    };

    explicit Concept(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static bool equal(const Node* x, const Node* y) {
        if (x == y) return true;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case Kind::Top:
            case Kind::Bot:
                return true;
            case Kind::Atom:
                return x->name == y->name;
            case Kind::Not:
                return equal(x->a.get(), y->a.get());
            case Kind::And:
            case Kind::Or:
                return equal(x->a.get(), y->a.get()) && equal(x->b.get(), y->b.get());
        }
        return false;
    }

    static std::size_t count(const Node* n) {
        if (!n) return 0;
        return 1 + count(n->a.get()) + count(n->b.get());
    }
    static std::size_t depth_of(const Node* n) {
        if (!n) return 0;
        return 1 + std::max(depth_of(n->a.get()), depth_of(n->b.get()));
    }

    std::shared_ptr<const Node> node_;
};

enum class Cmp { Ge, Le, Gt, Lt };

inline std::string_view cmp_symbol(Cmp c) {
    switch (c) {
        case Cmp::Ge: return ">=";
        case Cmp::Le: return "<=";
        case Cmp::Gt: return ">";
        case Cmp::Lt: return "<";
    }
    return "?";
}

struct StrictInclusion {
    Concept lhs, rhs;
    bool operator==(const StrictInclusion&) const = default;
};

/// Rendered T(lhs) <= rhs; typicality appears only here.
struct DefeasibleInclusion {
    Concept lhs, rhs;
    bool operator==(const DefeasibleInclusion&) const = default;
};

struct FuzzyInclusion {
    Concept lhs, rhs;
    Cmp cmp = Cmp::Ge;
    double bound = 0.0;  // in [0,1]
    bool operator==(const FuzzyInclusion&) const = default;
};

struct FuzzyAssertion {
    Concept subject;
    std::string individual;
    Cmp cmp = Cmp::Ge;
    double bound = 0.0;
    bool operator==(const FuzzyAssertion&) const = default;
};

using Axiom = std::variant<StrictInclusion, DefeasibleInclusion, FuzzyInclusion, FuzzyAssertion>;

struct CheckAxiomQuery {
    Axiom axiom;
    bool operator==(const CheckAxiomQuery&) const = default;
};
struct ProbQuery {
    Concept c;
    bool operator==(const ProbQuery&) const = default;
};
struct CondProbQuery {
    Concept c, given;
    bool operator==(const CondProbQuery&) const = default;
};
struct ProbGivenElementQuery {
    Concept c;
    std::string element;
    bool operator==(const ProbGivenElementQuery&) const = default;
};
struct LikelihoodQuery {
    std::string element;
    Concept c;
    bool operator==(const LikelihoodQuery&) const = default;
};
struct InclusionDegreeQuery {
    Concept lhs, rhs;
    bool operator==(const InclusionDegreeQuery&) const = default;
};
struct MembershipQuery {
    Concept c;
    std::string element;
    bool operator==(const MembershipQuery&) const = default;
};
struct PlausibilityQuery {
    std::string src, dst;
    bool operator==(const PlausibilityQuery&) const = default;
};

using Query = std::variant<CheckAxiomQuery, ProbQuery, CondProbQuery, ProbGivenElementQuery,
                           LikelihoodQuery, InclusionDegreeQuery, MembershipQuery,
                           PlausibilityQuery>;

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace detail {

inline int precedence(Concept::Kind k) {
    switch (k) {
        case Concept::Kind::Or: return 1;
        case Concept::Kind::And: return 2;
        case Concept::Kind::Not: return 3;
        default: return 4;
    }
}

inline void print_into(std::string& out, const Concept& c, int min_prec) {
    const int p = precedence(c.kind());
    const bool parens = p < min_prec;
    if (parens) out += '(';
    switch (c.kind()) {
        case Concept::Kind::Top: out += "top"; break;
        case Concept::Kind::Bot: out += "bot"; break;
        case Concept::Kind::Atom: out += c.atom_name(); break;
        case Concept::Kind::Not:
            out += "not ";
            print_into(out, c.child(), 3);
            break;
        case Concept::Kind::And:
            print_into(out, c.lhs(), 2);
            out += " and ";
            print_into(out, c.rhs(), 3);
            break;
        case Concept::Kind::Or:
            print_into(out, c.lhs(), 1);
            out += " or ";
            print_into(out, c.rhs(), 2);
            break;
    }
    if (parens) out += ')';
}

}  // namespace detail

/// Canonical minimally-parenthesized form; parse(print(c)) == c.
inline std::string print_concept(const Concept& c) {
    std::string out;
    detail::print_into(out, c, 0);
    return out;
}

inline std::string print_axiom(const Axiom& axiom) {
    return std::visit(
        [](const auto& a) -> std::string {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, StrictInclusion>) {
                return print_concept(a.lhs) + " <= " + print_concept(a.rhs);
            } else if constexpr (std::is_same_v<T, DefeasibleInclusion>) {
                return "T(" + print_concept(a.lhs) + ") <= " + print_concept(a.rhs);
            } else if constexpr (std::is_same_v<T, FuzzyInclusion>) {
                return print_concept(a.lhs) + " <= " + print_concept(a.rhs) + " " +
                       std::string(cmp_symbol(a.cmp)) + " " + format_double(a.bound);
            } else {
                // atoms that collide with statement keywords must be wrapped,
                // or `T(a) >= n` would re-parse as a typicality inclusion
                auto is_call_keyword = [](const std::string& s) {
                    return s == "T" || s == "P" || s == "deg" || s == "mem" || s == "plaus";
                };
                const bool bare = (a.subject.kind() == Concept::Kind::Atom &&
                                   !is_call_keyword(a.subject.atom_name())) ||
                                  a.subject.kind() == Concept::Kind::Top ||
                                  a.subject.kind() == Concept::Kind::Bot;
                const std::string body = print_concept(a.subject);
                return (bare ? body : "(" + body + ")") + "(" + a.individual + ") " +
                       std::string(cmp_symbol(a.cmp)) + " " + format_double(a.bound);
            }
        },
        axiom);
}

inline std::string print_query(const Query& query) {
    return std::visit(
        [](const auto& q) -> std::string {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, CheckAxiomQuery>) {
                return print_axiom(q.axiom);
            } else if constexpr (std::is_same_v<T, ProbQuery>) {
                return "P(" + print_concept(q.c) + ")";
            } else if constexpr (std::is_same_v<T, CondProbQuery>) {
                return "P(" + print_concept(q.c) + " | " + print_concept(q.given) + ")";
            } else if constexpr (std::is_same_v<T, ProbGivenElementQuery>) {
                return "P(" + print_concept(q.c) + " | elem:" + q.element + ")";
            } else if constexpr (std::is_same_v<T, LikelihoodQuery>) {
                return "P(elem:" + q.element + " | " + print_concept(q.c) + ")";
            } else if constexpr (std::is_same_v<T, InclusionDegreeQuery>) {
                return "deg(" + print_concept(q.lhs) + " <= " + print_concept(q.rhs) + ")";
            } else if constexpr (std::is_same_v<T, MembershipQuery>) {
                return "mem(" + print_concept(q.c) + ", elem:" + q.element + ")";
            } else {
                return "plaus(" + q.src + ", " + q.dst + ")";
            }
        },
        query);
}

}  // namespace somlc
