#include "ks/operator_expr.hpp"

#include "ks/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace ks {

OperatorExpr OperatorExpr::pauli(PauliAxis axis, std::size_t site)
{
    OperatorExpr e;
    e.kind = ExprKind::pauli;
    e.axis = axis;
    e.site = site;
    return e;
}

OperatorExpr OperatorExpr::identity() { return OperatorExpr{}; }

OperatorExpr OperatorExpr::scalar(double c, OperatorExpr operand)
{
    OperatorExpr e;
    e.kind = ExprKind::scalar;
    e.coefficient = c;
    e.children.push_back(std::move(operand));
    return e;
}

OperatorExpr OperatorExpr::product(std::vector<OperatorExpr> factors)
{
    if (factors.size() < 2) {
        throw InvalidArgument("product needs at least two factors");
    }
    OperatorExpr e;
    e.kind = ExprKind::product;
    e.children = std::move(factors);
    return e;
}

OperatorExpr OperatorExpr::sum(std::vector<OperatorExpr> terms)
{
    if (terms.size() < 2) {
        throw InvalidArgument("sum needs at least two terms");
    }
    OperatorExpr e;
    e.kind = ExprKind::sum;
    e.children = std::move(terms);
    return e;
}

namespace {

enum class Tok { number, name, lparen, rparen, plus, minus, star, end };

struct Token {
    Tok kind;
    std::string text;
    double value = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next()
    {
        skip_space();
        Token t{Tok::end, "", 0.0, line_, column_};
        if (pos_ >= src_.size()) {
            return t;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number(t);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
                t.text += src_[pos_];
                advance();
            }
            t.kind = Tok::name;
            return t;
        }
        t.text = std::string(1, c);
        switch (c) {
        case '(': t.kind = Tok::lparen; break;
        case ')': t.kind = Tok::rparen; break;
        case '+': t.kind = Tok::plus; break;
        case '-': t.kind = Tok::minus; break;
        case '*': t.kind = Tok::star; break;
        default: throw SyntaxError(t.line, t.column, std::string("unexpected character '") + c + "'");
        }
        advance();
        return t;
    }

private:
    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            advance();
        }
    }

    bool digit_at(std::size_t i) const
    {
        return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    }

    Token number(Token t)
    {
        const std::size_t start = pos_;
        while (digit_at(pos_)) {
            advance();
        }
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            while (digit_at(pos_)) {
                advance();
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) {
                ++look;
            }
            if (digit_at(look)) {
                while (pos_ < look) {
                    advance();
                }
                while (digit_at(pos_)) {
                    advance();
                }
            }
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        const auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (ec != std::errc() || end != t.text.data() + t.text.size() || !std::isfinite(t.value)) {
            throw SyntaxError(t.line, t.column, "malformed number '" + t.text + "'");
        }
        t.kind = Tok::number;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

class Parser {
public:
    Parser(std::string_view src, std::size_t sites) : lexer_(src), sites_(sites) { cur_ = lexer_.next(); }

    OperatorExpr run()
    {
        OperatorExpr e = expr();
        if (cur_.kind != Tok::end) {
            fail("unexpected '" + cur_.text + "' after expression");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(cur_.line, cur_.column, what); }

    void shift() { cur_ = lexer_.next(); }

    void expect(Tok kind, const char* what)
    {
        if (cur_.kind != kind) {
            fail(std::string("expected ") + what + (cur_.kind == Tok::end ? " at end of input" : ", found '" + cur_.text + "'"));
        }
        shift();
    }

    OperatorExpr expr()
    {
        std::vector<OperatorExpr> terms;
        if (cur_.kind == Tok::minus) {
            shift();
            terms.push_back(OperatorExpr::scalar(-1.0, term()));
        } else {
            terms.push_back(term());
        }
        while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
            const bool negate = cur_.kind == Tok::minus;
            shift();
            OperatorExpr t = term();
            terms.push_back(negate ? OperatorExpr::scalar(-1.0, std::move(t)) : std::move(t));
        }
        return terms.size() == 1 ? std::move(terms.front()) : OperatorExpr::sum(std::move(terms));
    }

    OperatorExpr term()
    {
        std::vector<OperatorExpr> factors;
        factors.push_back(factor());
        while (cur_.kind == Tok::star) {
            shift();
            factors.push_back(factor());
        }
        return factors.size() == 1 ? std::move(factors.front()) : OperatorExpr::product(std::move(factors));
    }

    OperatorExpr factor()
    {
        switch (cur_.kind) {
        case Tok::number: {
            const double v = cur_.value;
            shift();
            return OperatorExpr::scalar(v, OperatorExpr::identity());
        }
        case Tok::lparen: {
            shift();
            OperatorExpr inner = expr();
            expect(Tok::rparen, "')'");
            return inner;
        }
        case Tok::name: return named();
        case Tok::end: fail("unexpected end of input");
        default: fail("unexpected '" + cur_.text + "'");
        }
    }

    OperatorExpr named()
    {
        const Token name = cur_;
        if (name.text == "I") {
            shift();
            return OperatorExpr::identity();
        }
        PauliAxis axis{};
        if (name.text == "sx") {
            axis = PauliAxis::x;
        } else if (name.text == "sy") {
            axis = PauliAxis::y;
        } else if (name.text == "sz") {
            axis = PauliAxis::z;
        } else {
            fail("unknown name '" + name.text + "'");
        }
        shift();
        expect(Tok::lparen, "'('");
        const Token site = cur_;
        if (site.kind != Tok::number || site.text.find_first_not_of("0123456789") != std::string::npos) {
            fail("expected integer site index");
        }
        shift();
        expect(Tok::rparen, "')'");
        if (site.value < 1.0 || site.value > static_cast<double>(sites_)) {
            throw SiteOutOfRange("site " + site.text + " outside [1, " + std::to_string(sites_) + "] at line " +
                                 std::to_string(site.line) + ", column " + std::to_string(site.column));
        }
        return OperatorExpr::pauli(axis, static_cast<std::size_t>(site.value));
    }

    Lexer lexer_;
    std::size_t sites_;
    Token cur_;
};

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool is_negation(const OperatorExpr& e) { return e.kind == ExprKind::scalar && e.coefficient < 0.0; }

std::string print(const OperatorExpr& e);

std::string parenthesized(const OperatorExpr& e) { return "(" + print(e) + ")"; }

std::string print(const OperatorExpr& e)
{
    switch (e.kind) {
    case ExprKind::identity: return "I";
    case ExprKind::pauli: {
        static constexpr const char* names[] = {"sx", "sy", "sz"};
        return std::string(names[static_cast<int>(e.axis)]) + "(" + std::to_string(e.site) + ")";
    }
    case ExprKind::scalar: {
        const OperatorExpr& operand = e.children.front();
        if (!is_negation(e) && operand.kind == ExprKind::identity) {
            return format_number(e.coefficient);
        }
        if (e.coefficient == -1.0) {
            const bool wrap = operand.kind == ExprKind::sum || is_negation(operand);
            return "-" + (wrap ? parenthesized(operand) : print(operand));
        }
        // hand-built trees only; reparses as a product with the same matrix
        return format_number(e.coefficient) + "*" + parenthesized(operand);
    }
    case ExprKind::product: {
        std::string out;
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            const OperatorExpr& f = e.children[i];
            const bool wrap = f.kind == ExprKind::sum || f.kind == ExprKind::product || is_negation(f);
            out += (i ? "*" : "") + (wrap ? parenthesized(f) : print(f));
        }
        return out;
    }
    case ExprKind::sum: {
        std::string out;
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            const OperatorExpr& t = e.children[i];
            if (i > 0 && t.kind == ExprKind::scalar && t.coefficient == -1.0) {
                const OperatorExpr& operand = t.children.front();
                const bool wrap = operand.kind == ExprKind::sum || is_negation(operand);
                out += " - " + (wrap ? parenthesized(operand) : print(operand));
                continue;
            }
            const bool wrap = t.kind == ExprKind::sum || (i > 0 && is_negation(t));
            out += (i ? " + " : "") + (wrap ? parenthesized(t) : print(t));
        }
        return out;
    }
    }
    return {};
}

} // namespace

OperatorExpr parse(std::string_view source, std::size_t sites)
{
    if (sites == 0) {
        throw InvalidArgument("site count must be at least 1");
    }
    return Parser(source, sites).run();
}

ComplexMatrix evaluate(const OperatorExpr& expr, std::size_t sites)
{
    switch (expr.kind) {
    case ExprKind::identity: return ComplexMatrix::identity(std::size_t{1} << sites);
    case ExprKind::pauli: return site_operator(expr.axis, expr.site, sites);
    case ExprKind::scalar: return expr.coefficient * evaluate(expr.children.front(), sites);
    case ExprKind::product: {
        ComplexMatrix acc = evaluate(expr.children.front(), sites);
        for (std::size_t i = 1; i < expr.children.size(); ++i) {
            acc = acc * evaluate(expr.children[i], sites);
        }
        return acc;
    }
    case ExprKind::sum: {
        ComplexMatrix acc = evaluate(expr.children.front(), sites);
        for (std::size_t i = 1; i < expr.children.size(); ++i) {
            acc += evaluate(expr.children[i], sites);
        }
        return acc;
    }
    }
    throw InvalidArgument("unknown expression kind");
}

std::string to_string(const OperatorExpr& expr) { return print(expr); }

} // namespace ks
