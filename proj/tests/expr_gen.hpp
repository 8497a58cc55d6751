#pragma once

#include <random>

#include "acmnp/expr.hpp"

namespace acmnp::testing {

// Random expression trees over x, y, z whose values and derivatives stay
// bounded on [-1, 1]^3, so finite differences are meaningful.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    Expr make(int depth)
    {
        if (depth == 0 || pick(4) == 0) {
            if (pick(3) == 0) return Expr(coeff());
            return Expr::coordinate(pick(3));
        }
        const Expr u = make(depth - 1);
        switch (pick(14)) {
        case 0: return u + make(depth - 1);
        case 1: return u - make(depth - 1);
        case 2: return u * make(depth - 1);
        case 3: return u / (Expr(2.5) + cos(make(depth - 1)));
        case 4: return sin(u);
        case 5: return cos(u);
        case 6: return exp(Expr(0.5) * sin(u));
        case 7: return log(Expr(2.0) + sin(u));
        case 8: return sqrt(Expr(1.0) + u * u);
        case 9: return tanh(u);
        case 10: return sinh(Expr(0.5) * sin(u));
        case 11: return cosh(Expr(0.5) * cos(u));
        case 12: return pow(sin(u), Expr(static_cast<double>(2 + pick(2))));
        default: return pow(Expr(1.5) + cos(u), Expr(1.5));
        }
    }

    Point point()
    {
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        return {d(rng_), d(rng_), d(rng_)};
    }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    double coeff() { return std::uniform_real_distribution<double>(-2.0, 2.0)(rng_); }

    std::mt19937_64 rng_;
};

// Finite differences lose relative accuracy near a zero of a derivative with
// a large value; the bound 1e-6 (1 + |value|) is on the absolute error.
inline double central_difference(const Expr& e, const Point& p, int i, double h)
{
    Point a = p;
    Point b = p;
    a[static_cast<std::size_t>(i)] += h;
    b[static_cast<std::size_t>(i)] -= h;
    return (evaluate(e, a) - evaluate(e, b)) / (2.0 * h);
}

}  // namespace acmnp::testing
