#include "pg4/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <vector>

namespace pg4 {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

ExprPtr make(Expr::Kind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr, double number = 0.0) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->number = number;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

const std::map<std::string, Expr::Kind>& function_table() {
    static const std::map<std::string, Expr::Kind> table = {
        {"sin", Expr::Kind::Sin},   {"cos", Expr::Kind::Cos}, {"sinh", Expr::Kind::Sinh},
        {"cosh", Expr::Kind::Cosh}, {"exp", Expr::Kind::Exp}, {"ln", Expr::Kind::Ln},
        {"sqrt", Expr::Kind::Sqrt},
    };
    return table;
}

struct Token {
    enum class Type { Number, Ident, Symbol, End };
    Type type = Type::End;
    double number = 0.0;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, const std::string& expected) const {
        throw ParseError(msg, current_.line, current_.col, expected);
    }

  private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        current_ = Token{};
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= src_.size()) {
            current_.type = Token::Type::End;
            current_.text = "<end>";
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                current_.text.push_back(src_[pos_]);
                bump();
            }
            current_.type = Token::Type::Ident;
            return;
        }
        static const std::string symbols = "+-*/^()=;[],";
        if (symbols.find(c) != std::string::npos) {
            current_.type = Token::Type::Symbol;
            current_.text.push_back(c);
            bump();
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    void lex_number() {
        const size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            bump();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t mark = pos_;
            bump();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) bump();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
            } else {
                // not an exponent ("2e" would otherwise eat the ident)
                while (pos_ > mark) unbump();
            }
        }
        current_.type = Token::Type::Number;
        current_.text = src_.substr(start, pos_ - start);
        current_.number = std::strtod(current_.text.c_str(), nullptr);
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void unbump() {
        --pos_;
        --col_;  // numbers never span lines
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

// Recursive-descent parser for
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? power
//   power  := atom ("^" number)?
//   atom   := number | ident | ident "(" expr ")" | "(" expr ")"
class Parser {
  public:
    // `param` empty means the parameter is elected by first use of s or t.
    Parser(const std::string& src, std::string param) : lex_(src), param_(std::move(param)) {}

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (is_symbol("+") || is_symbol("-")) {
            const bool add = is_symbol("+");
            lex_.next();
            e = make(add ? Expr::Kind::Add : Expr::Kind::Sub, e, parse_term());
        }
        return e;
    }

    const std::string& param() const { return param_; }

    bool is_symbol(const std::string& s) const {
        return lex_.peek().type == Token::Type::Symbol && lex_.peek().text == s;
    }

    bool is_ident(const std::string& s) const {
        return lex_.peek().type == Token::Type::Ident && lex_.peek().text == s;
    }

    void expect_symbol(const std::string& s) {
        if (!is_symbol(s)) lex_.fail("unexpected token '" + lex_.peek().text + "'", "'" + s + "'");
        lex_.next();
    }

    double expect_number(bool allow_sign) {
        double sign = 1.0;
        if (allow_sign && is_symbol("-")) {
            lex_.next();
            sign = -1.0;
        }
        if (lex_.peek().type != Token::Type::Number)
            lex_.fail("unexpected token '" + lex_.peek().text + "'", "number");
        return sign * lex_.next().number;
    }

    std::string expect_ident() {
        if (lex_.peek().type != Token::Type::Ident)
            lex_.fail("unexpected token '" + lex_.peek().text + "'", "identifier");
        return lex_.next().text;
    }

    void expect_end() {
        if (lex_.peek().type != Token::Type::End)
            lex_.fail("trailing input '" + lex_.peek().text + "'", "end of input");
    }

    int line() const { return lex_.peek().line; }
    int col() const { return lex_.peek().col; }

  private:
    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        while (is_symbol("*") || is_symbol("/")) {
            const bool mul = is_symbol("*");
            lex_.next();
            e = make(mul ? Expr::Kind::Mul : Expr::Kind::Div, e, parse_factor());
        }
        return e;
    }

    ExprPtr parse_factor() {
        if (is_symbol("-")) {
            lex_.next();
            return make(Expr::Kind::Neg, parse_power());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (is_symbol("^")) {
            lex_.next();
            const double exponent = expect_number(false);
            return make(Expr::Kind::Pow, base, nullptr, exponent);
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Token& t = lex_.peek();
        if (t.type == Token::Type::Number) return make(Expr::Kind::Number, nullptr, nullptr, lex_.next().number);
        if (is_symbol("(")) {
            lex_.next();
            ExprPtr e = parse_expr();
            expect_symbol(")");
            return e;
        }
        if (t.type == Token::Type::Ident) {
            const Token ident = lex_.next();
            const auto& functions = function_table();
            const auto fn = functions.find(ident.text);
            if (is_symbol("(")) {
                if (fn == functions.end()) throw UnknownIdentifier(ident.text, ident.line, ident.col);
                lex_.next();
                ExprPtr arg = parse_expr();
                expect_symbol(")");
                return make(fn->second, arg);
            }
            if (fn != functions.end()) throw ArityError(ident.text, ident.line, ident.col);
            if (ident.text == "pi") return make(Expr::Kind::Pi);
            if (ident.text == "e") return make(Expr::Kind::E);
            if (!param_.empty()) {
                if (ident.text == param_) return make(Expr::Kind::Parameter);
                throw UnknownIdentifier(ident.text, ident.line, ident.col);
            }
            // Parameter elected by first use; only s and t are admissible names.
            if (ident.text == "s" || ident.text == "t") {
                param_ = ident.text;
                return make(Expr::Kind::Parameter);
            }
            throw UnknownIdentifier(ident.text, ident.line, ident.col);
        }
        lex_.fail("unexpected token '" + t.text + "'", "number, identifier or '('");
    }

    Lexer lex_;
    std::string param_;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* function_name(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Sin: return "sin";
        case Expr::Kind::Cos: return "cos";
        case Expr::Kind::Sinh: return "sinh";
        case Expr::Kind::Cosh: return "cosh";
        case Expr::Kind::Exp: return "exp";
        case Expr::Kind::Ln: return "ln";
        case Expr::Kind::Sqrt: return "sqrt";
        default: return nullptr;
    }
}

// Precedence levels used by the printer: additive 1, multiplicative 2,
// unary minus 3, power 4, atom 5.
int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

void print_rec(const Expr& e, int min_prec, const std::string& param, std::string& out) {
    const bool parens = precedence(e) < min_prec;
    if (parens) out.push_back('(');
    switch (e.kind) {
        case Expr::Kind::Number: out += format_number(e.number); break;
        case Expr::Kind::Parameter: out += param; break;
        case Expr::Kind::Pi: out += "pi"; break;
        case Expr::Kind::E: out += "e"; break;
        case Expr::Kind::Neg:
            out.push_back('-');
            print_rec(*e.lhs, 4, param, out);
            break;
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
            print_rec(*e.lhs, 1, param, out);
            out.push_back(e.kind == Expr::Kind::Add ? '+' : '-');
            print_rec(*e.rhs, 2, param, out);
            break;
        case Expr::Kind::Mul:
        case Expr::Kind::Div:
            print_rec(*e.lhs, 2, param, out);
            out.push_back(e.kind == Expr::Kind::Mul ? '*' : '/');
            print_rec(*e.rhs, 3, param, out);
            break;
        case Expr::Kind::Pow:
            print_rec(*e.lhs, 5, param, out);
            out.push_back('^');
            out += format_number(e.number);
            break;
        default:
            out += function_name(e.kind);
            out.push_back('(');
            print_rec(*e.lhs, 1, param, out);
            out.push_back(')');
            break;
    }
    if (parens) out.push_back(')');
}

}  // namespace

ExprPtr parse_expression(const std::string& text, const std::string& param) {
    Parser p(text, param);
    ExprPtr e = p.parse_expr();
    p.expect_end();
    return e;
}

std::string print_expr(const Expr& e, const std::string& param) {
    std::string out;
    print_rec(e, 0, param, out);
    return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Expr::Kind::Number || a.kind == Expr::Kind::Pow)
        if (a.number != b.number) return false;
    if (!a.lhs != !b.lhs || !a.rhs != !b.rhs) return false;
    if (a.lhs && !expr_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !expr_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

Jet eval_jet(const Expr& e, double s0, int order) {
    switch (e.kind) {
        case Expr::Kind::Number: return Jet::constant(e.number, order);
        case Expr::Kind::Parameter: return Jet::variable(s0, order);
        case Expr::Kind::Pi: return Jet::constant(kPi, order);
        case Expr::Kind::E: return Jet::constant(kE, order);
        case Expr::Kind::Neg: return -eval_jet(*e.lhs, s0, order);
        case Expr::Kind::Sin: return sin(eval_jet(*e.lhs, s0, order));
        case Expr::Kind::Cos: return cos(eval_jet(*e.lhs, s0, order));
        case Expr::Kind::Sinh: return sinh(eval_jet(*e.lhs, s0, order));
        case Expr::Kind::Cosh: return cosh(eval_jet(*e.lhs, s0, order));
        case Expr::Kind::Exp: return exp(eval_jet(*e.lhs, s0, order));
        case Expr::Kind::Ln: return log(eval_jet(*e.lhs, s0, order));
        case Expr::Kind::Sqrt: return sqrt(eval_jet(*e.lhs, s0, order));
        case Expr::Kind::Add: return eval_jet(*e.lhs, s0, order) + eval_jet(*e.rhs, s0, order);
        case Expr::Kind::Sub: return eval_jet(*e.lhs, s0, order) - eval_jet(*e.rhs, s0, order);
        case Expr::Kind::Mul: return eval_jet(*e.lhs, s0, order) * eval_jet(*e.rhs, s0, order);
        case Expr::Kind::Div: return eval_jet(*e.lhs, s0, order) / eval_jet(*e.rhs, s0, order);
        case Expr::Kind::Pow: {
            const Jet base = eval_jet(*e.lhs, s0, order);
            const double r = e.number;
            if (std::abs(r - std::round(r)) < 1e-12 && std::abs(r) < 1e9)
                return pow_int(base, static_cast<long>(std::llround(r)));
            return pow_real(base, r);
        }
    }
    throw Error("unreachable expression kind");
}

double eval_value(const Expr& e, double s0) { return eval_jet(e, s0, 0).value(); }

CurveDef parse_curve(const std::string& text) {
    Parser p(text, "");
    CurveDef def;
    std::array<ExprPtr, 4> comps{};
    static const std::string coords = "xyzw";
    for (int i = 0; i < 4; ++i) {
        const int at_line = p.line(), at_col = p.col();
        const std::string name = p.expect_ident();
        const size_t idx = coords.find(name);
        if (name.size() != 1 || idx == std::string::npos)
            throw ParseError("'" + name + "' is not a coordinate", at_line, at_col, "x, y, z or w");
        if (comps[idx])
            throw ParseError("coordinate '" + name + "' assigned twice", at_line, at_col);
        p.expect_symbol("=");
        comps[idx] = p.parse_expr();
        if (i < 3) p.expect_symbol(";");
    }
    if (!p.is_ident("on"))
        throw ParseError("missing domain clause", p.line(), p.col(), "'on [a,b]'");
    p.expect_ident();
    const int dom_line = p.line(), dom_col = p.col();
    p.expect_symbol("[");
    def.domain_min = p.expect_number(true);
    p.expect_symbol(",");
    def.domain_max = p.expect_number(true);
    p.expect_symbol("]");
    p.expect_end();
    if (!(def.domain_min < def.domain_max))
        throw ParseError("degenerate domain", dom_line, dom_col);
    def.x = comps[0];
    def.y = comps[1];
    def.z = comps[2];
    def.w = comps[3];
    def.param = p.param().empty() ? "s" : p.param();
    return def;
}

std::string print_curve(const CurveDef& c) {
    auto component = [&](const Expr& e) { return print_expr(e, c.param); };
    std::string out;
    out += "x=" + component(*c.x) + "; ";
    out += "y=" + component(*c.y) + "; ";
    out += "z=" + component(*c.z) + "; ";
    out += "w=" + component(*c.w);
    out += " on [" + format_number(c.domain_min) + "," + format_number(c.domain_max) + "]";
    return out;
}

}  // namespace pg4
