#include <cmath>
#include <random>

#include "acmnp/random_structure.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace acmnp;
using acmnp::testing::P;

namespace {

MetricData metric_of(std::initializer_list<const char*> c)
{
    std::array<Expr, 6> g;
    std::size_t k = 0;
    for (const char* s : c) g[k++] = P(s);
    return build_metric(g);
}

MetricData flat() { return metric_of({"1", "0", "0", "1", "0", "1"}); }
MetricData hyperbolic() { return metric_of({"exp(2*z)", "0", "0", "exp(2*z)", "0", "1"}); }
MetricData heisenberg() { return metric_of({"1 + y^2", "0", "-y", "1", "0", "1"}); }

ComplexVector vec(const char* a, const char* b, const char* c) { return complexify({P(a), P(b), P(c)}); }

double max_component(const ComplexVector& v, const SampleSet& s)
{
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, acmnp::testing::max_abs_on(c, s));
    return m;
}

SampleSet random_points(std::uint64_t seed, int n)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SampleSet s;
    for (int i = 0; i < n; ++i) s.points.push_back({d(rng), d(rng), d(rng)});
    return s;
}

}  // namespace

TEST_CASE("flat metric: no connection, no curvature")
{
    const MetricData m = flat();
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(m.gamma[k][i][j].is_zero());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m.ricci[i][j].is_zero());
    CHECK(m.scalar_curv.is_zero());
}

TEST_CASE("hyperbolic warped metric: Christoffel symbols and Einstein constant")
{
    // Values from the sympy oracle in tests/oracles.
    const MetricData m = hyperbolic();
    const Point p{0.3, -0.2, 0.4};
    const double e2z = std::exp(0.8);
    CHECK(evaluate(m.gamma[0][0][2], p) == doctest::Approx(1.0));
    CHECK(evaluate(m.gamma[1][1][2], p) == doctest::Approx(1.0));
    CHECK(evaluate(m.gamma[2][0][0], p) == doctest::Approx(-e2z));
    CHECK(evaluate(m.gamma[2][1][1], p) == doctest::Approx(-e2z));
    CHECK(evaluate(m.gamma[2][2][2], p) == doctest::Approx(0.0));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(evaluate(m.ricci[i][j], p) == doctest::Approx(-2.0 * evaluate(m.g[i][j], p)).epsilon(1e-14));
        }
    }
    CHECK(evaluate(m.scalar_curv, p) == doctest::Approx(-6.0));
}

TEST_CASE("Riemann sign convention is frozen")
{
    // R(∂_i, ∂_j)∂_k = R^l_kij ∂_l; the hyperbolic metric has sectional
    // curvature −1, so R^x_zxz = −1 and R^z_xzx = −e^{2z}.
    const MetricData m = hyperbolic();
    const RiemannTensor r = riemann(m);
    const Point p{0.1, 0.2, 0.3};
    CHECK(evaluate(r[0][2][0][2], p) == doctest::Approx(-1.0));
    CHECK(evaluate(r[2][0][2][0], p) == doctest::Approx(-std::exp(0.6)));
    CHECK(evaluate(r[0][2][2][0], p) == doctest::Approx(1.0));
}

TEST_CASE("Heisenberg Ricci tensor matches the oracle")
{
    const MetricData m = heisenberg();
    for (double y : {-0.7, 0.0, 0.4}) {
        const Point p{0.2, y, -0.5};
        const double expect[3][3] = {{y * y / 2 - 0.5, 0, -y / 2}, {0, -0.5, 0}, {-y / 2, 0, 0.5}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(evaluate(m.ricci[i][j], p) == doctest::Approx(expect[i][j]).epsilon(1e-14));
    }
}

TEST_CASE("covariant derivative examples")
{
    const auto s = acmnp::testing::single({0.3, 0.6, 0.9});
    {
        const auto d = covariant_derivative(vec("x", "0", "0"), vec("1", "0", "0"), flat());
        CHECK(max_component(d - vec("1", "0", "0"), s) == 0.0);
    }
    {
        const MetricData m = hyperbolic();
        const auto e2 = vec("exp(-z)", "0", "0");
        const auto d = covariant_derivative(vec("0", "0", "1"), e2, m);
        CHECK(max_component(d - e2, s) < 1e-15);
    }
    {
        const MetricData m = metric_of({"0.5*(z^2 + sin(y)^2) + cos(y)^2", "0", "cos(y)", "0.5*(z^2 + sin(y)^2)", "0",
                                        "1"});
        const auto xi = vec("0", "0", "1");
        const auto grid = lattice({{0, 0.5, 0.5}, {1, 2.5, 1.5}}, 4);
        SampleSet at;
        at.points = grid;
        CHECK(max_component(covariant_derivative(xi, xi, m), at) < 1e-14);
    }
}

TEST_CASE("lie bracket examples")
{
    const auto s = acmnp::testing::single({0.3, -0.6, 0.9});
    CHECK(max_component(lie_bracket(vec("1", "0", "0"), vec("0", "1", "0")), s) == 0.0);
    const auto b = lie_bracket(vec("1", "0", "y"), vec("0", "1", "0"));
    CHECK(max_component(b - vec("0", "0", "-1"), s) == 0.0);
}

TEST_CASE("divergence examples")
{
    const auto s = acmnp::testing::single({0.3, -0.6, 0.9});
    CHECK(acmnp::testing::at(divergence(vec("x", "0", "0"), flat()), s.points[0]) == std::complex<double>(1.0));
    CHECK(std::abs(acmnp::testing::at(divergence(vec("0", "0", "1"), hyperbolic()), s.points[0]) - 2.0) < 1e-14);
}

TEST_CASE("horizontal gradient examples")
{
    const MetricData m = flat();
    const RealVector xi{P("0"), P("0"), P("1")};
    const auto s = acmnp::testing::single({0.3, -0.6, 0.9});
    CHECK(max_component(horizontal_gradient(ComplexField(P("z")), m, xi), s) == 0.0);
    CHECK(max_component(horizontal_gradient(ComplexField(P("x")), m, xi) - vec("1", "0", "0"), s) == 0.0);
}

TEST_CASE("positive-definiteness is checked at sample points")
{
    const MetricData m = metric_of({"1", "0", "0", "1", "0", "z"});
    SampleSet s;
    s.points = {{0, 0, 1}, {0, 0, 0.5}, {0.1, 0.2, -0.25}};
    try {
        check_positive_definite(m, s);
        FAIL("expected a degenerate metric");
    } catch (const MetricError& e) {
        CHECK(e.where()[2] == -0.25);
    }
}

TEST_CASE("property: connection invariants on random metrics")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const RandomStructure r = random_structure(seed, {0.2});
        const MetricData& m = r.s.metric;
        const SampleSet pts = random_points(seed, 100);
        CAPTURE(seed);

        double inv = 0.0;
        double compat = 0.0;
        double sym = 0.0;
        for (const auto& p : pts.points) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    double gg = 0.0;
                    for (int k = 0; k < 3; ++k) gg += evaluate(m.g[i][k], p) * evaluate(m.g_inv[k][j], p);
                    inv = std::max(inv, std::abs(gg - (i == j ? 1.0 : 0.0)));
                    sym = std::max(sym, std::abs(evaluate(m.ricci[i][j] - m.ricci[j][i], p)));
                    for (int k = 0; k < 3; ++k) {
                        sym = std::max(sym, std::abs(evaluate(m.gamma[k][i][j] - m.gamma[k][j][i], p)));
                        // ∇_k g_ij = ∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il
                        Expr c = differentiate(m.g[i][j], k);
                        for (int l = 0; l < 3; ++l) c = c - m.gamma[l][k][i] * m.g[l][j] - m.gamma[l][k][j] * m.g[i][l];
                        compat = std::max(compat, std::abs(evaluate(c, p)));
                    }
                }
            }
        }
        CHECK(inv <= 1e-10);
        CHECK(compat <= 1e-10);
        CHECK(sym <= 1e-12);

        const ComplexVector X = complexify({sin(P("x + 2*y")), P("0.3*cos(z)"), P("x*y")});
        const ComplexVector Y = complexify({P("y^2"), exp(P("0.4*z")), sin(P("x - z"))});
        const auto torsion = covariant_derivative(Y, X, m) - covariant_derivative(X, Y, m) - lie_bracket(X, Y);
        CHECK(max_component(torsion, pts) <= 1e-10);

        const Matrix3 ric2 = ricci_from_riemann(riemann(m));
        double two_paths = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                two_paths = std::max(two_paths, max_abs(sample(ComplexField(ric2[i][j] - m.ricci[i][j]), pts)).value);
        CHECK(two_paths <= 1e-9);

        const ComplexField f(sin(P("x*z")) + P("y^3"));
        const auto g1 = horizontal_gradient(f, m, r.s.frame.xi);
        const auto g2 = horizontal_gradient(f, r.s.frame.e2, r.s.frame.e3);
        CHECK(max_component(g1 - g2, pts) <= 1e-9);
    }
}
