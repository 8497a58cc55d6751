#include "acmnp/geometry.hpp"

namespace acmnp {

MetricData build_metric(const std::array<Expr, 6>& c)
{
    MetricData m;
    auto& g = m.g;
    g[0] = {c[0], c[1], c[2]};
    g[1] = {c[1], c[3], c[4]};
    g[2] = {c[2], c[4], c[5]};

    auto& adj = m.adj;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3;
            const int r1 = (j + 2) % 3;
            const int c0 = (i + 1) % 3;
            const int c1 = (i + 2) % 3;
            adj[i][j] = g[r0][c0] * g[r1][c1] - g[r0][c1] * g[r1][c0];
        }
    }
    m.det_g = g[0][0] * adj[0][0] + g[0][1] * adj[1][0] + g[0][2] * adj[2][0];
    m.sqrt_det_g = sqrt(m.det_g);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m.g_inv[i][j] = adj[i][j] / m.det_g;
        }
    }

    std::array<Matrix3, 3> dg;  // dg[l][i][j] = ∂_l g_ij
    for (int l = 0; l < 3; ++l) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                dg[l][i][j] = differentiate(g[i][j], l);
            }
        }
    }
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                Expr s;
                for (int l = 0; l < 3; ++l) {
                    s += m.g_inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                }
                m.gamma[k][i][j] = 0.5 * s;
                m.gamma[k][j][i] = m.gamma[k][i][j];
            }
        }
    }

    const auto& G = m.gamma;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            Expr r;
            for (int k = 0; k < 3; ++k) {
                r += differentiate(G[k][i][j], k) - differentiate(G[k][k][j], i);
                for (int l = 0; l < 3; ++l) {
                    r += G[k][k][l] * G[l][i][j] - G[k][i][l] * G[l][k][j];
                }
            }
            m.ricci[i][j] = r;
            m.ricci[j][i] = r;
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m.scalar_curv += m.g_inv[i][j] * m.ricci[i][j];
        }
    }
    return m;
}

void check_positive_definite(const MetricData& m, const SampleSet& at)
{
    const auto& g = m.g;
    const Expr minor2 = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    const std::array<Expr, 3> minors{g[0][0], minor2, m.det_g};
    const Program prog(minors, at.params);
    std::vector<double> v(3);
    std::vector<double> scratch;
    for (const auto& p : at.points) {
        prog.run(p, v, scratch);
        for (int k = 0; k < 3; ++k) {
            if (!(v[k] > 0.0)) {
                throw MetricError("metric is not positive-definite (leading minor " + std::to_string(k + 1) +
                                      " = " + std::to_string(v[k]) + ")",
                                  p);
            }
        }
    }
}

RiemannTensor riemann(const MetricData& m)
{
    const auto& G = m.gamma;
    RiemannTensor r;
    for (int l = 0; l < 3; ++l) {
        for (int k = 0; k < 3; ++k) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    if (j < i) {
                        r[l][k][i][j] = -r[l][k][j][i];
                        continue;
                    }
                    if (i == j) {
                        r[l][k][i][j] = Expr();
                        continue;
                    }
                    Expr s = differentiate(G[l][j][k], i) - differentiate(G[l][i][k], j);
                    for (int q = 0; q < 3; ++q) {
                        s += G[l][i][q] * G[q][j][k] - G[l][j][q] * G[q][i][k];
                    }
                    r[l][k][i][j] = s;
                }
            }
        }
    }
    return r;
}

Matrix3 ricci_from_riemann(const RiemannTensor& r)
{
    Matrix3 ric;
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                ric[k][j] += r[i][k][i][j];
            }
        }
    }
    return ric;
}

ComplexField contract2(const Matrix3& T, const ComplexVector& A, const ComplexVector& B)
{
    ComplexField out;
    for (int i = 0; i < 3; ++i) {
        ComplexField row;
        for (int j = 0; j < 3; ++j) {
            row += T[i][j] * B[j];
        }
        out += A[i] * row;
    }
    return out;
}

ComplexField pair(const MetricData& m, const ComplexVector& A, const ComplexVector& B)
{
    return contract2(m.g, A, B);
}

ComplexVector lower(const MetricData& m, const ComplexVector& X)
{
    ComplexVector out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out[i] += m.g[i][j] * X[j];
        }
    }
    return out;
}

ComplexVector covariant_derivative(const ComplexVector& X, const ComplexVector& along, const MetricData& m)
{
    ComplexVector out;
    for (int k = 0; k < 3; ++k) {
        ComplexField s = directional(along, X[k]);
        for (int i = 0; i < 3; ++i) {
            ComplexField t;
            for (int j = 0; j < 3; ++j) {
                t += m.gamma[k][i][j] * X[j];
            }
            s += along[i] * t;
        }
        out[k] = s;
    }
    return out;
}

ComplexVector lie_bracket(const ComplexVector& X, const ComplexVector& Y)
{
    ComplexVector out;
    for (int k = 0; k < 3; ++k) {
        out[k] = directional(X, Y[k]) - directional(Y, X[k]);
    }
    return out;
}

ComplexField divergence(const ComplexVector& X, const MetricData& m)
{
    ComplexField s;
    for (int i = 0; i < 3; ++i) {
        s += differentiate(m.sqrt_det_g * X[i], i);
    }
    return s / ComplexField(m.sqrt_det_g);
}

ComplexVector gradient(const ComplexField& f, const MetricData& m)
{
    ComplexVector out;
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            out[k] += m.g_inv[k][i] * differentiate(f, i);
        }
    }
    return out;
}

ComplexVector horizontal_gradient(const ComplexField& f, const MetricData& m, const RealVector& xi)
{
    const ComplexVector x = complexify(xi);
    return gradient(f, m) - directional(x, f) * x;
}

ComplexVector horizontal_gradient(const ComplexField& f, const RealVector& e2, const RealVector& e3)
{
    const ComplexVector a = complexify(e2);
    const ComplexVector b = complexify(e3);
    return directional(a, f) * a + directional(b, f) * b;
}

}  // namespace acmnp
