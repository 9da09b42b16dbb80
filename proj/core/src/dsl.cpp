#include "divrisk/dsl.hpp"

#include <cctype>
#include <sstream>

namespace divrisk {

namespace {

struct Lexer {
    std::string src;
    size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at offset " + std::to_string(pos) + " in '" + src + "'");
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        return src.substr(start, pos - start);
    }

    bool at_number() {
        char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    /// Unsigned numeric literal: digits, optional fraction part.
    Rat unsigned_number() {
        skip_ws();
        size_t start = pos;
        while (pos < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
            ++pos;
        if (start == pos) fail("expected a number");
        try {
            return parse_rational(src.substr(start, pos - start));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    /// Signed rational in argument position: [-] INT [/ INT] | [-] DECIMAL.
    Rat signed_rational_arg() {
        skip_ws();
        bool neg = accept('-');
        Rat num = unsigned_number();
        if (accept('/')) {
            Rat den = unsigned_number();
            if (den == 0) fail("zero denominator");
            num /= den;
        }
        return neg ? Rat(-num) : num;
    }
};

struct Parser {
    Lexer lex;

    FunctionalPtr parse_expr() {
        FunctionalPtr node = parse_term();
        while (true) {
            if (lex.accept('+')) node = f_sum(node, parse_term());
            else if (lex.accept('-')) node = f_sum(node, f_neg(parse_term()));
            else break;
        }
        return node;
    }

    FunctionalPtr parse_term() {
        FunctionalPtr node = parse_factor();
        while (true) {
            if (lex.accept('*')) node = f_product(node, parse_factor());
            else if (lex.accept('/')) node = f_quotient(node, parse_factor());
            else break;
        }
        return node;
    }

    FunctionalPtr parse_factor() {
        if (lex.accept('-')) return f_neg(parse_primary());
        return parse_primary();
    }

    FunctionalPtr parse_primary() {
        if (lex.accept('(')) {
            FunctionalPtr e = parse_expr();
            lex.expect(')');
            return e;
        }
        if (lex.at_number()) return f_const(lex.unsigned_number());
        std::string name = lex.ident();
        if (name.empty()) lex.fail("expected an expression");
        if (name == "mean") return f_mean();
        if (name == "var") return f_var();
        if (name == "esssup") return f_esssup();
        if (name == "essinf") return f_essinf();
        if (name == "quantile") return one_arg([&](Rat t) { return f_quantile(t); });
        if (name == "stoploss") return one_arg([&](Rat k) { return f_stoploss(k); });
        if (name == "expmom") return one_arg([&](Rat a) { return f_expmom(a); });
        if (name == "abs") {
            lex.expect('(');
            auto e = parse_expr();
            lex.expect(')');
            return f_abs(e);
        }
        if (name == "pow") {
            lex.expect('(');
            auto e = parse_expr();
            lex.expect(',');
            Rat ex = lex.signed_rational_arg();
            lex.expect(')');
            return f_pow(e, ex);
        }
        if (name == "eu" || name == "dual") {
            lex.expect('(');
            PiecewisePoly pw = parse_pw();
            lex.expect(')');
            return name == "eu" ? f_eu(std::move(pw)) : f_dual(std::move(pw));
        }
        lex.fail("unknown identifier '" + name + "'");
    }

    template <class F>
    FunctionalPtr one_arg(F make) {
        lex.expect('(');
        Rat v = lex.signed_rational_arg();
        lex.expect(')');
        try {
            auto node = make(v);
            return node;
        } catch (const std::domain_error& e) {
            lex.fail(e.what());
        }
    }

    std::vector<Rat> parse_poly_body() {
        lex.expect('(');
        std::vector<Rat> coeffs;
        coeffs.push_back(lex.signed_rational_arg());
        while (lex.accept(',')) coeffs.push_back(lex.signed_rational_arg());
        lex.expect(')');
        return coeffs;
    }

    PiecewisePoly parse_pw() {
        std::string name = lex.ident();
        if (name == "poly") return PiecewisePoly::poly(parse_poly_body());
        if (name == "pieces") {
            lex.expect('(');
            std::vector<PiecewisePoly::Piece> pieces;
            while (true) {
                lex.expect('[');
                Rat lo = lex.signed_rational_arg();
                lex.expect(',');
                Rat hi = lex.signed_rational_arg();
                lex.expect(']');
                std::string pn = lex.ident();
                if (pn != "poly") lex.fail("expected 'poly' in piece");
                pieces.push_back({lo, hi, parse_poly_body()});
                if (!lex.accept(';')) break;
            }
            lex.expect(')');
            try {
                return PiecewisePoly(std::move(pieces));
            } catch (const std::domain_error& e) {
                lex.fail(e.what());
            }
        }
        lex.fail("expected 'poly' or 'pieces'");
    }
};

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Sum: return 1;
        case NodeKind::Product:
        case NodeKind::Quotient: return 2;
        case NodeKind::Neg: return 3;
        default: return 4;
    }
}

void print_pw(std::ostream& os, const PiecewisePoly& pw) {
    auto poly_body = [&](const std::vector<Rat>& coeffs) {
        os << "poly(";
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (i) os << ", ";
            os << rational_to_string(coeffs[i]);
        }
        os << ")";
    };
    const bool is_default_domain =
        pw.pieces().size() == 1 && pw.domain_lo() == Rat(-1024) && pw.domain_hi() == Rat(1024);
    if (is_default_domain) {
        poly_body(pw.pieces().front().coeffs);
        return;
    }
    os << "pieces(";
    for (size_t i = 0; i < pw.pieces().size(); ++i) {
        if (i) os << "; ";
        const auto& pc = pw.pieces()[i];
        os << "[" << rational_to_string(pc.lo) << ", " << rational_to_string(pc.hi) << "] ";
        poly_body(pc.coeffs);
    }
    os << ")";
}

void print_node(std::ostream& os, const FunctionalNode& f) {
    // a rational or negative constant prints with '/' or '-', which would bind
    // to the surrounding '*' or '/'; parenthesize it in factor positions
    auto factor_const = [&](const FunctionalPtr& c) {
        return c->kind == NodeKind::Const && (c->param < 0 || denominator(c->param) != 1);
    };
    auto child = [&](const FunctionalPtr& c, bool parens_on_equal) {
        bool parens = precedence(c->kind) < precedence(f.kind) ||
                      (parens_on_equal && precedence(c->kind) == precedence(f.kind));
        if (f.kind == NodeKind::Neg && c->kind == NodeKind::Neg) parens = true;
        if ((f.kind == NodeKind::Product || f.kind == NodeKind::Quotient) && factor_const(c))
            parens = true;
        if (parens) os << "(";
        print_node(os, *c);
        if (parens) os << ")";
    };
    switch (f.kind) {
        case NodeKind::Mean: os << "mean"; return;
        case NodeKind::Var: os << "var"; return;
        case NodeKind::EssSup: os << "esssup"; return;
        case NodeKind::EssInf: os << "essinf"; return;
        case NodeKind::Quantile: os << "quantile(" << rational_to_string(f.param) << ")"; return;
        case NodeKind::StopLoss: os << "stoploss(" << rational_to_string(f.param) << ")"; return;
        case NodeKind::ExpMoment: os << "expmom(" << rational_to_string(f.param) << ")"; return;
        case NodeKind::Eu:
            os << "eu(";
            print_pw(os, *f.pw);
            os << ")";
            return;
        case NodeKind::Dual:
            os << "dual(";
            print_pw(os, *f.pw);
            os << ")";
            return;
        case NodeKind::Const: os << rational_to_string(f.param); return;
        case NodeKind::Neg:
            os << "-";
            child(f.lhs, false);
            return;
        case NodeKind::Abs:
            os << "abs(";
            print_node(os, *f.lhs);
            os << ")";
            return;
        case NodeKind::Pow:
            os << "pow(";
            print_node(os, *f.lhs);
            os << ", " << rational_to_string(f.param) << ")";
            return;
        case NodeKind::Sum:
            child(f.lhs, false);
            if (f.rhs->kind == NodeKind::Neg) {
                os << " - ";
                // the negated operand prints directly; parenthesize nested sums
                const FunctionalPtr& inner = f.rhs->lhs;
                bool parens = precedence(inner->kind) <= precedence(NodeKind::Sum) ||
                              inner->kind == NodeKind::Neg;
                if (parens) os << "(";
                print_node(os, *inner);
                if (parens) os << ")";
            } else {
                os << " + ";
                child(f.rhs, true);
            }
            return;
        case NodeKind::Product:
            child(f.lhs, false);
            os << " * ";
            child(f.rhs, true);
            return;
        case NodeKind::Quotient:
            child(f.lhs, false);
            os << " / ";
            child(f.rhs, true);
            return;
    }
}

}  // namespace

FunctionalPtr parse_functional(const std::string& text) {
    Parser p{Lexer{text}};
    FunctionalPtr e = p.parse_expr();
    if (!p.lex.eof()) p.lex.fail("trailing input");
    return e;
}

std::string print_functional(const FunctionalPtr& f) {
    std::ostringstream os;
    print_node(os, *f);
    return os.str();
}

Preference parse_preference(const std::string& text) {
    Parser p{Lexer{text}};
    std::string head = p.lex.ident();
    auto parse_dir = [&]() {
        std::string d = p.lex.ident();
        if (d == "higher") return Direction::HigherBetter;
        if (d == "lower") return Direction::LowerBetter;
        p.lex.fail("expected 'higher' or 'lower'");
    };
    if (head == "total") {
        p.lex.expect('(');
        FunctionalPtr e = p.parse_expr();
        p.lex.expect(',');
        Direction dir = parse_dir();
        p.lex.expect(')');
        if (!p.lex.eof()) p.lex.fail("trailing input");
        return Preference::total(e, dir);
    }
    if (head == "pareto") {
        p.lex.expect('(');
        p.lex.expect('[');
        std::vector<Preference::Criterion> cs;
        while (true) {
            p.lex.expect('(');
            FunctionalPtr e = p.parse_expr();
            p.lex.expect(',');
            Direction dir = parse_dir();
            p.lex.expect(')');
            cs.push_back({e, dir});
            if (!p.lex.accept(',')) break;
        }
        p.lex.expect(']');
        p.lex.expect(')');
        if (!p.lex.eof()) p.lex.fail("trailing input");
        return Preference::pareto(std::move(cs));
    }
    p.lex.fail("expected 'total' or 'pareto'");
}

std::string print_preference(const Preference& p) {
    std::ostringstream os;
    if (p.is_total()) {
        os << "total(" << print_functional(p.criteria()[0].spec) << ", "
           << direction_name(p.criteria()[0].direction) << ")";
    } else {
        os << "pareto([";
        for (size_t i = 0; i < p.criteria().size(); ++i) {
            if (i) os << ", ";
            os << "(" << print_functional(p.criteria()[i].spec) << ", "
               << direction_name(p.criteria()[i].direction) << ")";
        }
        os << "])";
    }
    return os.str();
}

}  // namespace divrisk
