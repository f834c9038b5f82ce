#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "somlc/error.hpp"
#include "somlc/lang.hpp"

namespace somlc {
namespace detail {

enum class Tok { End, Ident, Number, LParen, RParen, Pipe, Comma, Colon, Le, Ge, Lt, Gt };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t line = 1;
    std::size_t col = 1;
    double value = 0.0;
};

/// Hand-rolled scanner. Copyable, so parsers may snapshot it to look ahead.
class Lexer {
public:
    explicit Lexer(std::string_view src, std::size_t first_line = 1)
        : src_(src), line_(first_line) {
        advance();
    }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    static bool ident_head(char c) {
        return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
    }
    static bool ident_tail(char c) { return ident_head(c) || (c >= '0' && c <= '9'); }
    static bool digit(char c) { return c >= '0' && c <= '9'; }

    void advance() {
        skip_blank();
        current_ = Token{Tok::End, {}, line_, col_, 0.0};
        if (pos_ >= src_.size()) return;

        const char c = src_[pos_];
        const std::size_t start = pos_;
        if (ident_head(c)) {
            while (pos_ < src_.size() && ident_tail(src_[pos_])) step();
            current_.kind = Tok::Ident;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (digit(c) || (c == '.' && pos_ + 1 < src_.size() && digit(src_[pos_ + 1]))) {
            while (pos_ < src_.size() && (digit(src_[pos_]) || src_[pos_] == '.')) step();
            current_.kind = Tok::Number;
            current_.text = src_.substr(start, pos_ - start);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(current_.text.data(),
                                             current_.text.data() + current_.text.size(), value);
            if (ec != std::errc() || ptr != current_.text.data() + current_.text.size()) {
                throw ParseError("invalid number '" + std::string(current_.text) + "'",
                                 current_.line, current_.col);
            }
            current_.value = value;
            return;
        }
        switch (c) {
            case '(': step(); current_.kind = Tok::LParen; break;
            case ')': step(); current_.kind = Tok::RParen; break;
            case '|': step(); current_.kind = Tok::Pipe; break;
            case ',': step(); current_.kind = Tok::Comma; break;
            case ':': step(); current_.kind = Tok::Colon; break;
            case '<':
                step();
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    step();
                    current_.kind = Tok::Le;
                } else {
                    current_.kind = Tok::Lt;
                }
                break;
            case '>':
                step();
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    step();
                    current_.kind = Tok::Ge;
                } else {
                    current_.kind = Tok::Gt;
                }
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        }
        current_.text = src_.substr(start, pos_ - start);
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') step();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                step();
            } else {
                break;
            }
        }
    }

    void step() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    Token current_;
};

class StatementParser {
public:
    explicit StatementParser(std::string_view src, std::size_t first_line = 1)
        : lex_(src, first_line) {}

    Concept concept_only() {
        Concept c = parse_or();
        expect_end();
        return c;
    }

    Query query() {
        // leading keyword forms need one token of lookahead past the ident
        if (at_keyword_call("T")) return typicality_axiom();
        if (at_keyword_call("P")) return prob_query();
        if (at_keyword_call("deg")) return deg_query();
        if (at_keyword_call("mem")) return mem_query();
        if (at_keyword_call("plaus")) return plaus_query();
        return concept_led();
    }

private:
    bool at_keyword_call(std::string_view kw) {
        if (lex_.peek().kind != Tok::Ident || lex_.peek().text != kw) return false;
        Lexer ahead = lex_;
        ahead.next();
        return ahead.peek().kind == Tok::LParen;
    }

    Query typicality_axiom() {
        lex_.next();  // T
        expect(Tok::LParen, "'('");
        Concept lhs = parse_or();
        expect(Tok::RParen, "')'");
        expect(Tok::Le, "'<=' after the typicality concept");
        Concept rhs = parse_or();
        if (is_cmp(lex_.peek().kind)) {
            throw err("typicality inclusions take no degree bound");
        }
        expect_end();
        return CheckAxiomQuery{DefeasibleInclusion{std::move(lhs), std::move(rhs)}};
    }

    // P(C) | P(C | D) | P(C | elem:ID) | P(elem:ID | C)
    Query prob_query() {
        lex_.next();  // P
        expect(Tok::LParen, "'('");
        auto first = prob_arg();
        if (lex_.peek().kind == Tok::RParen) {
            lex_.next();
            expect_end();
            if (!first.concept_value) throw err("P(elem:...) needs a conditioning concept");
            return ProbQuery{*first.concept_value};
        }
        expect(Tok::Pipe, "'|' or ')'");
        auto second = prob_arg();
        expect(Tok::RParen, "')'");
        expect_end();
        if (first.concept_value && second.concept_value) {
            return CondProbQuery{*first.concept_value, *second.concept_value};
        }
        if (first.concept_value && !second.concept_value) {
            return ProbGivenElementQuery{*first.concept_value, second.element};
        }
        if (!first.concept_value && second.concept_value) {
            return LikelihoodQuery{first.element, *second.concept_value};
        }
        throw err("P(elem | elem) is not a query form");
    }

    struct ProbArg {
        std::optional<Concept> concept_value;
        std::string element;
    };

    ProbArg prob_arg() {
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "elem") {
            Lexer ahead = lex_;
            ahead.next();
            if (ahead.peek().kind == Tok::Colon) {
                lex_.next();  // elem
                lex_.next();  // :
                return ProbArg{std::nullopt, expect_ident("element id")};
            }
        }
        return ProbArg{parse_or(), {}};
    }

    Query deg_query() {
        lex_.next();
        expect(Tok::LParen, "'('");
        Concept lhs = parse_or();
        expect(Tok::Le, "'<='");
        Concept rhs = parse_or();
        expect(Tok::RParen, "')'");
        expect_end();
        return InclusionDegreeQuery{std::move(lhs), std::move(rhs)};
    }

    Query mem_query() {
        lex_.next();
        expect(Tok::LParen, "'('");
        Concept c = parse_or();
        expect(Tok::Comma, "','");
        expect_keyword("elem");
        expect(Tok::Colon, "':'");
        std::string element = expect_ident("element id");
        expect(Tok::RParen, "')'");
        expect_end();
        return MembershipQuery{std::move(c), std::move(element)};
    }

    Query plaus_query() {
        lex_.next();
        expect(Tok::LParen, "'('");
        std::string src = expect_ident("category name");
        expect(Tok::Comma, "','");
        std::string dst = expect_ident("category name");
        expect(Tok::RParen, "')'");
        expect_end();
        return PlausibilityQuery{std::move(src), std::move(dst)};
    }

    Query concept_led() {
        Concept lhs = parse_or();
        const Token& t = lex_.peek();
        if (t.kind == Tok::LParen) {  // assertion: C(a) cmp n
            lex_.next();
            std::string individual = expect_ident("individual name");
            expect(Tok::RParen, "')'");
            Cmp cmp = expect_cmp();
            double bound = expect_degree();
            expect_end();
            return CheckAxiomQuery{
                FuzzyAssertion{std::move(lhs), std::move(individual), cmp, bound}};
        }
        if (t.kind == Tok::Le) {
            lex_.next();
            Concept rhs = parse_or();
            if (is_cmp(lex_.peek().kind)) {
                Cmp cmp = expect_cmp();
                double bound = expect_degree();
                expect_end();
                return CheckAxiomQuery{FuzzyInclusion{std::move(lhs), std::move(rhs), cmp, bound}};
            }
            expect_end();
            return CheckAxiomQuery{StrictInclusion{std::move(lhs), std::move(rhs)}};
        }
        throw err("expected '<=' or '(' after the concept");
    }

    Concept parse_or() {
        Concept left = parse_and();
        while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "or") {
            lex_.next();
            left = Concept::disjunction(std::move(left), parse_and());
        }
        return left;
    }

    Concept parse_and() {
        Concept left = parse_unary();
        while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "and") {
            lex_.next();
            left = Concept::conjunction(std::move(left), parse_unary());
        }
        return left;
    }

    Concept parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Ident) {
            if (t.text == "not") {
                lex_.next();
                return Concept::negation(parse_unary());
            }
            if (t.text == "top") {
                lex_.next();
                return Concept::top();
            }
            if (t.text == "bot") {
                lex_.next();
                return Concept::bot();
            }
            Token name = lex_.next();
            return Concept::atom(std::string(name.text));
        }
        if (t.kind == Tok::LParen) {
            lex_.next();
            Concept c = parse_or();
            expect(Tok::RParen, "')'");
            return c;
        }
        throw err("expected 'not', 'top', 'bot', an identifier or '('");
    }

    static bool is_cmp(Tok k) {
        return k == Tok::Le || k == Tok::Ge || k == Tok::Lt || k == Tok::Gt;
    }

    Cmp expect_cmp() {
        const Token t = lex_.next();
        switch (t.kind) {
            case Tok::Le: return Cmp::Le;
            case Tok::Ge: return Cmp::Ge;
            case Tok::Lt: return Cmp::Lt;
            case Tok::Gt: return Cmp::Gt;
            default:
                throw ParseError("expected one of '>=', '<=', '>', '<'", t.line, t.col);
        }
    }

    double expect_degree() {
        const Token t = lex_.next();
        if (t.kind != Tok::Number) throw ParseError("expected a degree in [0,1]", t.line, t.col);
        if (t.value < 0.0 || t.value > 1.0) {
            throw ParseError("degree " + std::string(t.text) + " is outside [0,1]", t.line, t.col);
        }
        return t.value;
    }

    std::string expect_ident(const std::string& what) {
        const Token t = lex_.next();
        if (t.kind != Tok::Ident) throw ParseError("expected " + what, t.line, t.col);
        return std::string(t.text);
    }

    void expect_keyword(std::string_view kw) {
        const Token t = lex_.next();
        if (t.kind != Tok::Ident || t.text != kw) {
            throw ParseError("expected '" + std::string(kw) + "'", t.line, t.col);
        }
    }

    void expect(Tok kind, const std::string& what) {
        const Token t = lex_.next();
        if (t.kind != kind) throw ParseError("expected " + what, t.line, t.col);
    }

    void expect_end() {
        const Token& t = lex_.peek();
        if (t.kind != Tok::End) {
            throw ParseError("unexpected trailing input '" + std::string(t.text) + "'", t.line,
                             t.col);
        }
    }

    ParseError err(const std::string& message) const {
        return ParseError(message, lex_.peek().line, lex_.peek().col);
    }

    Lexer lex_;
};

}  // namespace detail

/// Grammar: or := and ("or" and)* ; and := unary ("and" unary)* ;
/// unary := "not" unary | "top" | "bot" | IDENT | "(" or ")".
inline Concept parse_concept(std::string_view text) {
    return detail::StatementParser(text).concept_only();
}

inline Query parse_query(std::string_view text, std::size_t first_line = 1) {
    return detail::StatementParser(text, first_line).query();
}

inline Axiom parse_axiom(std::string_view text, std::size_t first_line = 1) {
    Query q = parse_query(text, first_line);
    if (auto* check = std::get_if<CheckAxiomQuery>(&q)) return std::move(check->axiom);
    throw ParseError("statement is a query, not an axiom", first_line, 1);
}

struct ParsedLine {
    std::size_t line_no = 0;
    std::string text;  // statement text, comments stripped
    std::optional<Query> query;
    std::string error;  // set when parsing failed
};

/// One statement per line; '#' starts a comment; blank lines skipped.
inline std::vector<ParsedLine> parse_query_lines(std::istream& in) {
    std::vector<ParsedLine> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = line.substr(0, line.find('#'));
        while (!body.empty() && (body.back() == '\r' || body.back() == ' ' || body.back() == '\t')) {
            body.pop_back();
        }
        std::size_t start = body.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        body = body.substr(start);

        ParsedLine p;
        p.line_no = line_no;
        p.text = body;
        try {
            p.query = parse_query(body, line_no);
        } catch (const ParseError& e) {
            p.error = e.what();
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace somlc
