#ifndef STRUCTID_PARSER_HPP
#define STRUCTID_PARSER_HPP

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "structid/model.hpp"

namespace structid {

struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;
};

class ParseError : public Error {
  public:
    enum class Kind { Syntax, UndeclaredSymbol, NonIntegerExponent, DivisionByZeroConstant };

    ParseError(Kind kind, SourceSpan span, const std::string& msg)
        : Error("line " + std::to_string(span.line) + ", column " + std::to_string(span.column) + ": " + msg),
          kind_(kind),
          span_(span) {}

    Kind kind() const { return kind_; }
    SourceSpan span() const { return span_; }

  private:
    Kind kind_;
    SourceSpan span_;
};

namespace parser_detail {

struct Token {
    enum class Type { Ident, Number, Prime, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Colon, Equal };
    Type type;
    std::string text;
    Int value{0};
    SourceSpan span;
};

using TokenLine = std::vector<Token>;

inline std::vector<TokenLine> tokenize(std::string_view text) {
    std::vector<TokenLine> lines;
    TokenLine current;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto flush = [&]() {
        if (!current.empty()) lines.push_back(std::move(current));
        current.clear();
    };
    while (i < text.size()) {
        char c = text[i];
        SourceSpan here{line, col, 1};
        if (c == '\n') {
            flush();
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == '\r' || c == ' ' || c == '\t') {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
                ++col;
            }
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
                ++i;
                ++col;
            }
            here.length = static_cast<int>(i - start);
            current.push_back({Token::Type::Ident, std::string(text.substr(start, i - start)), Int(0), here});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                ++i;
                ++col;
            }
            here.length = static_cast<int>(i - start);
            std::string digits(text.substr(start, i - start));
            current.push_back({Token::Type::Number, digits, Int(digits, 10), here});
            continue;
        }
        Token::Type t;
        switch (c) {
            case '\'': t = Token::Type::Prime; break;
            case '+': t = Token::Type::Plus; break;
            case '-': t = Token::Type::Minus; break;
            case '*': t = Token::Type::Star; break;
            case '/': t = Token::Type::Slash; break;
            case '^': t = Token::Type::Caret; break;
            case '(': t = Token::Type::LParen; break;
            case ')': t = Token::Type::RParen; break;
            case ',': t = Token::Type::Comma; break;
            case ':': t = Token::Type::Colon; break;
            case '=': t = Token::Type::Equal; break;
            default:
                throw ParseError(ParseError::Kind::Syntax, here,
                                 std::string("unexpected character '") + c + "'");
        }
        current.push_back({t, std::string(1, c), Int(0), here});
        ++i;
        ++col;
    }
    flush();
    return lines;
}

// Recursive-descent expression parser over one token line; evaluates to an
// exact RatFunc over the declared symbols.
class ExprParser {
  public:
    ExprParser(const TokenLine& tokens, std::size_t start, const Model& model)
        : tokens_(tokens), pos_(start), model_(model) {}

    RatFunc parse() {
        RatFunc value = expression();
        if (pos_ != tokens_.size())
            throw ParseError(ParseError::Kind::Syntax, tokens_[pos_].span, "unexpected token '" + tokens_[pos_].text + "'");
        return value;
    }

  private:
    const Token& peek() const {
        if (pos_ >= tokens_.size())
            throw ParseError(ParseError::Kind::Syntax, end_span(), "unexpected end of expression");
        return tokens_[pos_];
    }

    bool at_end() const { return pos_ >= tokens_.size(); }

    SourceSpan end_span() const {
        if (tokens_.empty()) return SourceSpan{};
        SourceSpan s = tokens_.back().span;
        s.column += s.length;
        s.length = 0;
        return s;
    }

    bool accept(Token::Type t) {
        if (!at_end() && tokens_[pos_].type == t) {
            ++pos_;
            return true;
        }
        return false;
    }

    RatFunc expression() {
        RatFunc acc = term();
        while (!at_end()) {
            if (accept(Token::Type::Plus))
                acc = acc + term();
            else if (accept(Token::Type::Minus))
                acc = acc - term();
            else
                break;
        }
        return acc;
    }

    RatFunc term() {
        RatFunc acc = unary();
        while (!at_end()) {
            if (accept(Token::Type::Star)) {
                acc = acc * unary();
            } else if (tokens_[pos_].type == Token::Type::Slash) {
                SourceSpan slash = tokens_[pos_].span;
                ++pos_;
                RatFunc divisor = unary();
                if (divisor.is_zero())
                    throw ParseError(ParseError::Kind::DivisionByZeroConstant, slash,
                                     "division by an expression that is identically zero");
                acc = acc / divisor;
            } else {
                break;
            }
        }
        return acc;
    }

    RatFunc unary() {
        if (accept(Token::Type::Minus)) return -unary();
        return power();
    }

    RatFunc power() {
        RatFunc base = atom();
        if (!at_end() && tokens_[pos_].type == Token::Type::Caret) {
            SourceSpan caret = tokens_[pos_].span;
            ++pos_;
            RatFunc exponent = unary();
            long e = positive_integer_exponent(exponent, caret);
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    RatFunc atom() {
        const Token& t = peek();
        switch (t.type) {
            case Token::Type::Number: {
                ++pos_;
                return RatFunc::from_poly(Poly::constant(t.value));
            }
            case Token::Type::Ident: {
                auto v = model_.resolve(t.text);
                if (!v)
                    throw ParseError(ParseError::Kind::UndeclaredSymbol, t.span,
                                     "undeclared symbol '" + t.text + "'");
                ++pos_;
                return RatFunc::from_poly(Poly::variable(*v));
            }
            case Token::Type::LParen: {
                ++pos_;
                RatFunc inner = expression();
                if (!accept(Token::Type::RParen))
                    throw ParseError(ParseError::Kind::Syntax, at_end() ? end_span() : tokens_[pos_].span,
                                     "expected ')'");
                return inner;
            }
            default:
                throw ParseError(ParseError::Kind::Syntax, t.span, "unexpected token '" + t.text + "'");
        }
    }

    long positive_integer_exponent(const RatFunc& value, SourceSpan caret) const {
        if (!value.is_constant())
            throw ParseError(ParseError::Kind::NonIntegerExponent, caret,
                             "exponent must be a positive integer constant");
        if (value.is_zero())
            throw ParseError(ParseError::Kind::NonIntegerExponent, caret,
                             "exponent must be a positive integer");
        Int num = value.num().constant_value();
        Int den = value.den().constant_value();
        if (den == 0 || num % den != 0)
            throw ParseError(ParseError::Kind::NonIntegerExponent, caret,
                             "exponent must be a positive integer");
        Int e = num / den;
        if (e <= 0)
            throw ParseError(ParseError::Kind::NonIntegerExponent, caret,
                             "exponent must be a positive integer");
        if (e > 4096)
            throw ParseError(ParseError::Kind::Syntax, caret, "exponent too large");
        return e.get_si();
    }

    const TokenLine& tokens_;
    std::size_t pos_;
    const Model& model_;
};

inline bool is_section_header(const TokenLine& line, const char* keyword) {
    return line.size() >= 2 && line[0].type == Token::Type::Ident && line[0].text == keyword &&
           line[1].type == Token::Type::Colon;
}

inline std::vector<std::string> parse_name_list(const TokenLine& line, std::size_t start) {
    std::vector<std::string> names;
    std::size_t i = start;
    while (i < line.size()) {
        if (line[i].type != Token::Type::Ident)
            throw ParseError(ParseError::Kind::Syntax, line[i].span, "expected an identifier");
        names.push_back(line[i].text);
        ++i;
        if (i < line.size()) {
            if (line[i].type != Token::Type::Comma)
                throw ParseError(ParseError::Kind::Syntax, line[i].span, "expected ','");
            ++i;
            if (i == line.size())
                throw ParseError(ParseError::Kind::Syntax, line[i - 1].span, "trailing ','");
        }
    }
    return names;
}

}  // namespace parser_detail

// Parses the section-based model format:
//
//   model <ident>            (optional)
//   params: a, b             (optional)
//   inputs: u1, u2           (optional)
//   states:
//     x' = <expr>
//   outputs:
//     y = <expr>
//
// Expressions use identifiers, nonnegative integer literals, + - * / ^ and
// parentheses; '^' takes positive integer exponents; '#' starts a comment.
inline Model parse_model(std::string_view text) {
    using namespace parser_detail;
    std::vector<TokenLine> lines = tokenize(text);

    Model model;
    bool saw_model_header = false;
    enum class Section { None, States, Outputs };
    Section section = Section::None;

    struct PendingEquation {
        std::string name;
        const TokenLine* line;
        std::size_t expr_start;
        bool is_state;
    };
    std::vector<PendingEquation> pending;

    for (const TokenLine& line : lines) {
        if (is_section_header(line, "params")) {
            for (auto& p : parse_name_list(line, 2)) model.params.push_back(p);
            section = Section::None;
            continue;
        }
        if (is_section_header(line, "inputs")) {
            for (auto& u : parse_name_list(line, 2)) model.inputs.push_back(u);
            section = Section::None;
            continue;
        }
        if (is_section_header(line, "states")) {
            if (line.size() != 2)
                throw ParseError(ParseError::Kind::Syntax, line[2].span, "unexpected token after 'states:'");
            section = Section::States;
            continue;
        }
        if (is_section_header(line, "outputs")) {
            if (line.size() != 2)
                throw ParseError(ParseError::Kind::Syntax, line[2].span, "unexpected token after 'outputs:'");
            section = Section::Outputs;
            continue;
        }
        if (line[0].type == Token::Type::Ident && line[0].text == "model" && section == Section::None) {
            if (saw_model_header || line.size() != 2 || line[1].type != Token::Type::Ident)
                throw ParseError(ParseError::Kind::Syntax, line[0].span, "malformed model header");
            model.name = line[1].text;
            saw_model_header = true;
            continue;
        }
        if (section == Section::States) {
            if (line.size() < 4 || line[0].type != Token::Type::Ident ||
                line[1].type != Token::Type::Prime || line[2].type != Token::Type::Equal)
                throw ParseError(ParseError::Kind::Syntax, line[0].span,
                                 "expected a state equation of the form x' = <expr>");
            pending.push_back({line[0].text, &line, 3, true});
            model.states.emplace_back(line[0].text, RatFunc());
            continue;
        }
        if (section == Section::Outputs) {
            if (line.size() < 3 || line[0].type != Token::Type::Ident ||
                line[1].type != Token::Type::Equal)
                throw ParseError(ParseError::Kind::Syntax, line[0].span,
                                 "expected an output equation of the form y = <expr>");
            pending.push_back({line[0].text, &line, 2, false});
            model.outputs.emplace_back(line[0].text, RatFunc());
            continue;
        }
        throw ParseError(ParseError::Kind::Syntax, line[0].span,
                         "expected a section header (params:, inputs:, states:, outputs:)");
    }

    // Expressions are resolved after all declarations so that equations may
    // reference states declared further down.
    std::size_t state_i = 0, output_i = 0;
    for (const PendingEquation& eq : pending) {
        ExprParser parser(*eq.line, eq.expr_start, model);
        RatFunc value = parser.parse();
        if (eq.is_state)
            model.states[state_i++].second = value;
        else
            model.outputs[output_i++].second = value;
    }
    return model;
}

namespace parser_detail {

inline std::string monomial_to_string(const Monomial& m, const Model& names) {
    if (m.is_one()) return "1";
    std::string out;
    for (const auto& [v, e] : m.entries()) {
        if (!out.empty()) out += "*";
        out += names.var_name(v);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

inline std::string poly_to_string(const Poly& p, const Model& names) {
    if (p.is_zero()) return "0";
    std::string out;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [mono, coeff] = *it;
        Int abs_coeff = abs(coeff);
        if (out.empty())
            out += coeff < 0 ? "-" : "";
        else
            out += coeff < 0 ? " - " : " + ";
        if (mono.is_one())
            out += abs_coeff.get_str();
        else if (abs_coeff == 1)
            out += monomial_to_string(mono, names);
        else
            out += abs_coeff.get_str() + "*" + monomial_to_string(mono, names);
    }
    return out;
}

inline std::string ratfunc_to_string(const RatFunc& rf, const Model& names) {
    if (rf.is_poly()) return poly_to_string(rf.num(), names);
    if (rf.is_constant()) return rf.num().constant_value().get_str() + "/" + rf.den().constant_value().get_str();
    return "(" + poly_to_string(rf.num(), names) + ")/(" + poly_to_string(rf.den(), names) + ")";
}

}  // namespace parser_detail

// Canonical text that re-parses to an equal Model.
inline std::string serialize_model(const Model& model) {
    std::ostringstream out;
    if (!model.name.empty()) out << "model " << model.name << "\n";
    auto emit_list = [&out](const char* header, const std::vector<std::string>& names) {
        if (names.empty()) return;
        out << header << ":";
        for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : " ") << names[i];
        out << "\n";
    };
    emit_list("params", model.params);
    emit_list("inputs", model.inputs);
    out << "states:\n";
    for (const auto& [x, f] : model.states)
        out << "  " << x << "' = " << parser_detail::ratfunc_to_string(f, model) << "\n";
    out << "outputs:\n";
    for (const auto& [y, g] : model.outputs)
        out << "  " << y << " = " << parser_detail::ratfunc_to_string(g, model) << "\n";
    return out.str();
}

}  // namespace structid

#endif  // STRUCTID_PARSER_HPP
