#include "stateprio/parser.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace stateprio {

namespace {

std::string summarize(const std::vector<Diagnostic>& diags)
{
    if (diags.empty())
        return "parse error";
    std::string msg = to_string(diags.front());
    if (diags.size() > 1)
        msg += " (and " + std::to_string(diags.size() - 1) + " more)";
    return msg;
}

} // namespace

ParseError::ParseError(std::vector<Diagnostic> diags) : Error(summarize(diags)), diags_(std::move(diags)) {}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

enum class Tok { Word, Real, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.span = {file_, line_, col_, 0};
            if (pos_ >= text_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = text_[pos_];
            if (is_word(c)) {
                std::size_t start = pos_;
                while (pos_ < text_.size() && is_word(text_[pos_]))
                    advance();
                std::string word(text_.substr(start, pos_ - start));
                bool digits = std::all_of(word.begin(), word.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
                if (digits && pos_ + 1 < text_.size() && text_[pos_] == '.' && is_digit(text_[pos_ + 1])) {
                    advance();
                    while (pos_ < text_.size() && is_digit(text_[pos_]))
                        advance();
                    t.kind = Tok::Real;
                    t.text = std::string(text_.substr(start, pos_ - start));
                } else {
                    t.kind = Tok::Word;
                    t.text = std::move(word);
                }
            } else {
                static const char* two[] = {"->", ":=", "<=", ">=", "==", "!=", "&&", "||"};
                std::string sym;
                for (const char* s : two)
                    if (text_.substr(pos_, 2) == s)
                        sym = s;
                if (sym.empty()) {
                    static const std::string one = "{}();,.+-*<>!=";
                    if (one.find(c) == std::string::npos)
                        throw ParseError({{t.span, std::string("unexpected character '") + c + "'"}});
                    sym = std::string(1, c);
                }
                for (std::size_t i = 0; i < sym.size(); ++i)
                    advance();
                t.kind = Tok::Sym;
                t.text = sym;
            }
            t.span.length = static_cast<int>(t.text.size());
            out.push_back(std::move(t));
        }
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::string_view text, const std::string& file) : toks_(Lexer(text, file).run()) {}

    Network network()
    {
        SourceSpan start = peek().span;
        expect("network");
        std::string name = identifier("network name");
        expect("{");
        std::vector<VarDecl> vars;
        while (peek_is("int") || peek_is("real") || peek_is("bool"))
            vars.push_back(vardecl());
        std::vector<Automaton> automata;
        while (peek_is("automaton"))
            automata.push_back(automaton());
        if (automata.empty() && peek_is("}"))
            fail(peek().span, "network '" + name + "' must contain at least one automaton");
        expect("}");
        expect_end();
        return Network(std::move(name), std::move(vars), std::move(automata), start);
    }

    StateFormula query(const Network& net)
    {
        StateFormula f;
        expect("EF");
        expect("(");
        for (;;) {
            Literal lit;
            if (accept("!"))
                lit.negated = true;
            SourceSpan at = peek().span;
            lit.automaton = identifier("automaton name");
            expect(".");
            lit.location = location("location name");
            auto ai = net.automaton_index(lit.automaton);
            if (!ai)
                fail(at, "unknown automaton '" + lit.automaton + "'");
            if (!net.automaton(*ai).location_index(lit.location))
                fail(at, "unknown location '" + lit.automaton + "." + lit.location + "'");
            f.literals.push_back(std::move(lit));
            if (accept("&&"))
                continue;
            if (peek_is("||"))
                fail(peek().span, "query must be a conjunction of literals");
            break;
        }
        expect(")");
        expect_end();
        return f;
    }

    Expr standalone_expr()
    {
        Expr e = expr();
        expect_end();
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool peek_is(std::string_view s) const
    {
        return (peek().kind == Tok::Word || peek().kind == Tok::Sym) && peek().text == s;
    }

    bool accept(std::string_view s)
    {
        if (!peek_is(s))
            return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const SourceSpan& span, std::string msg) { throw ParseError({{span, std::move(msg)}}); }

    std::string describe(const Token& t) const
    {
        if (t.kind == Tok::End)
            return "end of input";
        return "'" + t.text + "'";
    }

    void expect(std::string_view s)
    {
        if (!accept(s))
            fail(peek().span, "expected '" + std::string(s) + "', found " + describe(peek()));
    }

    void expect_end()
    {
        if (peek().kind != Tok::End)
            fail(peek().span, "unexpected " + describe(peek()) + " after end of input");
    }

    static bool is_keyword(const std::string& w)
    {
        static const std::set<std::string> kw = {"network", "int", "real", "bool", "automaton", "init", "locations",
            "edge", "on", "when", "do", "true", "false", "EF"};
        return kw.count(w) != 0;
    }

    std::string identifier(const char* what)
    {
        const Token& t = peek();
        if (t.kind != Tok::Word || is_keyword(t.text) || std::isdigit(static_cast<unsigned char>(t.text[0])))
            fail(t.span, std::string("expected ") + what + ", found " + describe(t));
        ++pos_;
        return t.text;
    }

    std::string location(const char* what)
    {
        const Token& t = peek();
        if (t.kind != Tok::Word || is_keyword(t.text))
            fail(t.span, std::string("expected ") + what + ", found " + describe(t));
        ++pos_;
        return t.text;
    }

    Value literal()
    {
        bool neg = accept("-");
        const Token& t = peek();
        if (!neg && (peek_is("true") || peek_is("false"))) {
            ++pos_;
            return Value::boolean(t.text == "true");
        }
        if (t.kind == Tok::Real) {
            ++pos_;
            Rational r = Rational::parse(t.text);
            return Value::real(neg ? -r : r);
        }
        if (t.kind == Tok::Word && std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            ++pos_;
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc())
                fail(t.span, "integer literal '" + t.text + "' out of range");
            return Value::integer(neg ? -v : v);
        }
        fail(t.span, "expected a literal, found " + describe(t));
    }

    VarDecl vardecl()
    {
        VarDecl v;
        v.span = peek().span;
        std::string kw = peek().text;
        ++pos_;
        v.type = kw == "int" ? Type::Int : kw == "real" ? Type::Real : Type::Bool;
        v.name = identifier("variable name");
        expect("=");
        v.init = literal();
        if (v.type == Type::Real && v.init.type() == Type::Int)
            v.init = Value::real(v.init.as_rational());
        expect(";");
        return v;
    }

    Automaton automaton()
    {
        Automaton a;
        a.span = peek().span;
        expect("automaton");
        a.name = identifier("automaton name");
        expect("{");
        expect("init");
        a.initial = location("initial location");
        expect(";");
        expect("locations");
        a.locations.push_back(location("location name"));
        while (accept(","))
            a.locations.push_back(location("location name"));
        expect(";");
        while (peek_is("edge"))
            a.edges.push_back(edge());
        expect("}");
        return a;
    }

    Edge edge()
    {
        Edge e;
        e.span = peek().span;
        expect("edge");
        e.source = location("source location");
        expect("->");
        e.target = location("target location");
        expect("on");
        e.action = identifier("action name");
        if (accept("when"))
            e.guard = expr();
        if (accept("do")) {
            do {
                Assignment as;
                as.target = identifier("assignment target");
                expect(":=");
                as.expr = expr();
                e.updates.push_back(std::move(as));
            } while (accept(","));
        }
        expect(";");
        return e;
    }

    Expr expr()
    {
        Expr lhs = conj();
        while (accept("||"))
            lhs = Expr::binary(Op::Or, lhs, conj());
        return lhs;
    }

    Expr conj()
    {
        Expr lhs = negation();
        while (accept("&&"))
            lhs = Expr::binary(Op::And, lhs, negation());
        return lhs;
    }

    Expr negation()
    {
        if (accept("!"))
            return Expr::unary(Op::Not, negation());
        return comparison();
    }

    Expr comparison()
    {
        Expr lhs = sum();
        static const std::pair<const char*, Op> ops[] = {
            {"<=", Op::Le}, {">=", Op::Ge}, {"==", Op::Eq}, {"!=", Op::Ne}, {"<", Op::Lt}, {">", Op::Gt}};
        for (auto [s, op] : ops)
            if (accept(s))
                return Expr::binary(op, lhs, sum());
        return lhs;
    }

    Expr sum()
    {
        Expr lhs = product();
        for (;;) {
            if (accept("+"))
                lhs = Expr::binary(Op::Add, lhs, product());
            else if (accept("-"))
                lhs = Expr::binary(Op::Sub, lhs, product());
            else
                return lhs;
        }
    }

    Expr product()
    {
        Expr lhs = unary();
        while (accept("*"))
            lhs = Expr::binary(Op::Mul, lhs, unary());
        return lhs;
    }

    Expr unary()
    {
        if (accept("-"))
            return Expr::unary(Op::Neg, unary());
        return primary();
    }

    Expr primary()
    {
        const Token& t = peek();
        if (accept("(")) {
            Expr e = expr();
            expect(")");
            return e;
        }
        if (t.kind == Tok::Real || (t.kind == Tok::Word && (std::isdigit(static_cast<unsigned char>(t.text[0])) || t.text == "true" || t.text == "false")))
            return Expr::lit(literal());
        if (t.kind == Tok::Word && !is_keyword(t.text)) {
            ++pos_;
            return Expr::var(t.text);
        }
        fail(t.span, "expected an expression, found " + describe(t));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

Network parse_network(std::string_view text, const std::string& file)
{
    Network net = Parser(text, file).network();
    auto diags = validate_network(net);
    if (!diags.empty())
        throw ParseError(std::move(diags));
    return net;
}

StateFormula parse_query(std::string_view text, const Network& net, const std::string& file)
{
    return Parser(text, file).query(net);
}

Expr parse_expr(std::string_view text) { return Parser(text, "<expr>").standalone_expr(); }

std::string print_network(const Network& net)
{
    std::ostringstream os;
    os << "network " << net.name() << " {\n";
    for (const auto& v : net.vars())
        os << "  " << to_string(v.type) << ' ' << v.name << " = " << v.init.str() << ";\n";
    for (const auto& a : net.automata()) {
        os << '\n' << "  automaton " << a.name << " {\n";
        os << "    init " << a.initial << ";\n";
        os << "    locations ";
        for (std::size_t i = 0; i < a.locations.size(); ++i)
            os << (i ? ", " : "") << a.locations[i];
        os << ";\n";
        for (const auto& e : a.edges) {
            os << "    edge " << e.source << " -> " << e.target << " on " << e.action;
            if (!e.guard.is_true())
                os << " when " << to_string(e.guard);
            if (!e.updates.empty()) {
                os << " do ";
                for (std::size_t i = 0; i < e.updates.size(); ++i)
                    os << (i ? ", " : "") << e.updates[i].target << " := " << to_string(e.updates[i].expr);
            }
            os << ";\n";
        }
        os << "  }\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace stateprio
