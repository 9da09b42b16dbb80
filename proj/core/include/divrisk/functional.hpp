#pragma once

#include "divrisk/distribution.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

namespace divrisk {

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// Piecewise polynomial with rational breakpoints and coefficients, used for
/// expected-utility integrands and dual-utility weight functions. Pieces are
/// contiguous; piece i covers [lo_i, hi_i) and the last piece is closed.
class PiecewisePoly {
public:
    struct Piece {
        Rat lo, hi;
        std::vector<Rat> coeffs;  // c0 + c1 t + c2 t^2 + ...
        bool operator==(const Piece&) const = default;
    };

    explicit PiecewisePoly(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw std::domain_error("piecewise: no pieces");
        for (size_t i = 0; i < pieces_.size(); ++i) {
            if (!(pieces_[i].lo < pieces_[i].hi))
                throw std::domain_error("piecewise: empty piece");
            if (i > 0 && pieces_[i - 1].hi != pieces_[i].lo)
                throw std::domain_error("piecewise: pieces must be contiguous");
            if (pieces_[i].coeffs.empty())
                throw std::domain_error("piecewise: empty polynomial");
        }
    }

    /// Single global polynomial on [lo, hi].
    static PiecewisePoly poly(std::vector<Rat> coeffs, Rat lo = Rat(-1024), Rat hi = Rat(1024)) {
        return PiecewisePoly({Piece{std::move(lo), std::move(hi), std::move(coeffs)}});
    }

    const std::vector<Piece>& pieces() const { return pieces_; }
    Rat domain_lo() const { return pieces_.front().lo; }
    Rat domain_hi() const { return pieces_.back().hi; }
    bool operator==(const PiecewisePoly&) const = default;

    Rat eval(const Rat& t) const {
        const Piece& pc = piece_at(t);
        Rat acc(0);
        for (auto it = pc.coeffs.rbegin(); it != pc.coeffs.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    double eval(double t) const {
        const Piece& pc = piece_at(rational_from_double(t));
        double acc = 0;
        for (auto it = pc.coeffs.rbegin(); it != pc.coeffs.rend(); ++it)
            acc = acc * t + to_double(*it);
        return acc;
    }

    /// Exact integral over [a, b] within the domain.
    Rat integral(const Rat& a, const Rat& b) const {
        if (a > b) return -integral(b, a);
        if (a < domain_lo() || b > domain_hi())
            throw std::domain_error("piecewise: integral outside domain");
        Rat total(0);
        for (const Piece& pc : pieces_) {
            Rat lo = std::max(a, pc.lo), hi = std::min(b, pc.hi);
            if (lo >= hi) continue;
            total += antiderivative(pc, hi) - antiderivative(pc, lo);
        }
        return total;
    }

    /// Nondecreasing on [0,1], sampled at breakpoints and a uniform grid.
    bool increasing_on_unit_interval(int grid = 64) const {
        if (domain_lo() > 0 || domain_hi() < 1) return false;
        std::vector<Rat> ts;
        for (int k = 0; k <= grid; ++k) ts.push_back(Rat(k, grid));
        for (const auto& pc : pieces_) {
            if (pc.lo >= 0 && pc.lo <= 1) ts.push_back(pc.lo);
            if (pc.hi >= 0 && pc.hi <= 1) ts.push_back(pc.hi);
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        for (size_t i = 1; i < ts.size(); ++i)
            if (eval(ts[i]) < eval(ts[i - 1])) return false;
        return true;
    }

private:
    const Piece& piece_at(const Rat& t) const {
        if (t < domain_lo() || t > domain_hi())
            throw EvalError("piecewise: point " + rational_to_string(t) + " outside domain [" +
                            rational_to_string(domain_lo()) + ", " +
                            rational_to_string(domain_hi()) + "]");
        for (const Piece& pc : pieces_)
            if (t < pc.hi) return pc;
        return pieces_.back();
    }

    static Rat antiderivative(const Piece& pc, const Rat& t) {
        Rat acc(0), power = t;
        for (size_t k = 0; k < pc.coeffs.size(); ++k) {
            acc += pc.coeffs[k] * power / Rat(static_cast<long long>(k) + 1);
            power *= t;
        }
        return acc;
    }

    std::vector<Piece> pieces_;
};

enum class NodeKind {
    Mean, Var, EssSup, EssInf, Quantile, StopLoss, ExpMoment,
    Eu, Dual, Const, Neg, Abs, Pow, Sum, Product, Quotient,
};

inline const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Mean: return "mean";
        case NodeKind::Var: return "var";
        case NodeKind::EssSup: return "esssup";
        case NodeKind::EssInf: return "essinf";
        case NodeKind::Quantile: return "quantile";
        case NodeKind::StopLoss: return "stoploss";
        case NodeKind::ExpMoment: return "expmom";
        case NodeKind::Eu: return "eu";
        case NodeKind::Dual: return "dual";
        case NodeKind::Const: return "const";
        case NodeKind::Neg: return "neg";
        case NodeKind::Abs: return "abs";
        case NodeKind::Pow: return "pow";
        case NodeKind::Sum: return "sum";
        case NodeKind::Product: return "product";
        case NodeKind::Quotient: return "quotient";
    }
    return "?";
}

struct FunctionalNode;
using FunctionalPtr = std::shared_ptr<const FunctionalNode>;

/// AST of a law-invariant functional over distributions.
struct FunctionalNode {
    NodeKind kind;
    Rat param;                          // Quantile t, StopLoss k, ExpMoment a, Const c, Pow exponent
    std::optional<PiecewisePoly> pw;    // Eu utility / Dual weight
    FunctionalPtr lhs, rhs;

    bool operator==(const FunctionalNode& o) const {
        if (kind != o.kind || param != o.param) return false;
        if (pw.has_value() != o.pw.has_value()) return false;
        if (pw && !(*pw == *o.pw)) return false;
        auto eq = [](const FunctionalPtr& a, const FunctionalPtr& b) {
            if (!a && !b) return true;
            if (!a || !b) return false;
            return *a == *b;
        };
        return eq(lhs, o.lhs) && eq(rhs, o.rhs);
    }
};

inline FunctionalPtr f_leaf(NodeKind k) {
    return std::make_shared<FunctionalNode>(FunctionalNode{k, Rat(0), std::nullopt, nullptr, nullptr});
}
inline FunctionalPtr f_mean() { return f_leaf(NodeKind::Mean); }
inline FunctionalPtr f_var() { return f_leaf(NodeKind::Var); }
inline FunctionalPtr f_esssup() { return f_leaf(NodeKind::EssSup); }
inline FunctionalPtr f_essinf() { return f_leaf(NodeKind::EssInf); }
inline FunctionalPtr f_quantile(const Rat& t) {
    if (!(t > 0 && t < 1)) throw std::domain_error("quantile level must lie in (0,1)");
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Quantile, t, std::nullopt, nullptr, nullptr});
}
inline FunctionalPtr f_stoploss(const Rat& k) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::StopLoss, k, std::nullopt, nullptr, nullptr});
}
inline FunctionalPtr f_expmom(const Rat& a) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::ExpMoment, a, std::nullopt, nullptr, nullptr});
}
inline FunctionalPtr f_eu(PiecewisePoly u) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Eu, Rat(0), std::move(u), nullptr, nullptr});
}
inline FunctionalPtr f_dual(PiecewisePoly g) {
    if (g.domain_lo() > 0 || g.domain_hi() < 1)
        throw std::domain_error("dual weight must be defined on [0,1]");
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Dual, Rat(0), std::move(g), nullptr, nullptr});
}
inline FunctionalPtr f_const(const Rat& c) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Const, c, std::nullopt, nullptr, nullptr});
}
inline FunctionalPtr f_neg(FunctionalPtr x) {
    if (x->kind == NodeKind::Const) return f_const(-x->param);
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Neg, Rat(0), std::nullopt, std::move(x), nullptr});
}
inline FunctionalPtr f_abs(FunctionalPtr x) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Abs, Rat(0), std::nullopt, std::move(x), nullptr});
}
inline FunctionalPtr f_pow(FunctionalPtr x, const Rat& e) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Pow, e, std::nullopt, std::move(x), nullptr});
}
inline FunctionalPtr f_sum(FunctionalPtr a, FunctionalPtr b) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Sum, Rat(0), std::nullopt, std::move(a), std::move(b)});
}
inline FunctionalPtr f_diff(FunctionalPtr a, FunctionalPtr b) { return f_sum(std::move(a), f_neg(std::move(b))); }
inline FunctionalPtr f_product(FunctionalPtr a, FunctionalPtr b) {
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Product, Rat(0), std::nullopt, std::move(a), std::move(b)});
}
inline FunctionalPtr f_quotient(FunctionalPtr a, FunctionalPtr b) {
    if (a->kind == NodeKind::Const && b->kind == NodeKind::Const && b->param != 0)
        return f_const(a->param / b->param);
    return std::make_shared<FunctionalNode>(FunctionalNode{NodeKind::Quotient, Rat(0), std::nullopt, std::move(a), std::move(b)});
}

/// Evaluates a functional on a distribution. Law-invariant by construction:
/// the result depends only on the distribution value. Exact subexpressions stay
/// exact; exp moments and non-perfect fractional powers produce double-backed
/// values.
template <class S>
Value evaluate(const FunctionalNode& f, const Distribution<S>& d) {
    using T = scalar_traits<S>;
    switch (f.kind) {
        case NodeKind::Mean: return T::value(d.mean());
        case NodeKind::Var: return T::value(d.variance());
        case NodeKind::EssSup: return T::value(d.max_value());
        case NodeKind::EssInf: return T::value(d.min_value());
        case NodeKind::Quantile: return T::value(d.quantile(T::from_rat(f.param)));
        case NodeKind::StopLoss: return T::value(d.stop_loss(T::from_rat(f.param)));
        case NodeKind::ExpMoment: return d.exp_moment(f.param);
        case NodeKind::Eu: {
            if constexpr (T::exact) {
                Rat acc(0);
                for (size_t i = 0; i < d.size(); ++i) acc += f.pw->eval(d.value(i)) * d.prob(i);
                return Value(acc);
            } else {
                double acc = 0;
                for (size_t i = 0; i < d.size(); ++i) acc += f.pw->eval(d.value(i)) * d.prob(i);
                return Value::from_double(acc);
            }
        }
        case NodeKind::Dual: {
            // integral of g(t) Q(t) dt as an exact sum over quantile steps
            if constexpr (T::exact) {
                Rat acc(0), prev(0);
                auto cum = d.cumulative();
                for (size_t i = 0; i < d.size(); ++i) {
                    acc += d.value(i) * f.pw->integral(prev, cum[i]);
                    prev = cum[i];
                }
                return Value(acc);
            } else {
                double acc = 0;
                Rat prev(0);
                auto cum = d.cumulative();
                for (size_t i = 0; i < d.size(); ++i) {
                    Rat ci = rational_from_double(std::min(1.0, cum[i]));
                    if (i + 1 == d.size()) ci = Rat(1);
                    acc += d.value(i) * to_double(f.pw->integral(prev, ci));
                    prev = ci;
                }
                return Value::from_double(acc);
            }
        }
        case NodeKind::Const: return Value(f.param);
        case NodeKind::Neg: return -evaluate(*f.lhs, d);
        case NodeKind::Abs: return evaluate(*f.lhs, d).abs();
        case NodeKind::Pow: {
            try {
                return evaluate(*f.lhs, d).pow(f.param);
            } catch (const std::domain_error& e) {
                throw EvalError(std::string("pow node: ") + e.what());
            }
        }
        case NodeKind::Sum: return evaluate(*f.lhs, d) + evaluate(*f.rhs, d);
        case NodeKind::Product: return evaluate(*f.lhs, d) * evaluate(*f.rhs, d);
        case NodeKind::Quotient: {
            Value den = evaluate(*f.rhs, d);
            if (den.is_zero()) throw EvalError("quotient node: denominator evaluates to zero");
            return evaluate(*f.lhs, d) / den;
        }
    }
    throw EvalError("unknown node");
}

template <class S>
Value evaluate(const FunctionalPtr& f, const Distribution<S>& d) {
    return evaluate(*f, d);
}

}  // namespace divrisk
