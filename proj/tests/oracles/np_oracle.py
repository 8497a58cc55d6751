"""Independent sympy oracle for frozen expected values in the C++ tests.

Builds Christoffel symbols, Ricci tensor and spin coefficients with sympy's
own simplifier, then prints values that the C++ tests assert.  Run with
`python3 tests/oracles/np_oracle.py`.
"""
import sympy as sp

x, y, z = sp.symbols("x y z", real=True)
X = [x, y, z]


def christoffel(g):
    gi = sp.simplify(g.inv())
    G = [[[sp.simplify(sum(gi[k, l] * (sp.diff(g[j, l], X[i]) + sp.diff(g[i, l], X[j])
                                        - sp.diff(g[i, j], X[l])) for l in range(3)) / 2)
           for j in range(3)] for i in range(3)] for k in range(3)]
    return gi, G


def ricci(G):
    R = sp.zeros(3, 3)
    for i in range(3):
        for j in range(3):
            R[i, j] = sp.simplify(sum(sp.diff(G[k][i][j], X[k]) for k in range(3))
                                  - sum(sp.diff(G[k][k][j], X[i]) for k in range(3))
                                  + sum(G[k][k][l] * G[l][i][j] for k in range(3) for l in range(3))
                                  - sum(G[k][i][l] * G[l][k][j] for k in range(3) for l in range(3)))
    return R


def cov(G, A, V):
    return [sum(A[i] * sp.diff(V[k], X[i]) for i in range(3))
            + sum(A[i] * V[j] * G[k][i][j] for i in range(3) for j in range(3)) for k in range(3)]


def pair(g, A, B):
    return sum(g[i, j] * A[i] * B[j] for i in range(3) for j in range(3))


def spin(g, G, xi, e2, e3, exact=True):
    d = [(e2[k] - sp.I * e3[k]) / sp.sqrt(2) for k in range(3)]
    db = [(e2[k] + sp.I * e3[k]) / sp.sqrt(2) for k in range(3)]
    kappa = -pair(g, cov(G, xi, xi), d)
    rho = pair(g, cov(G, db, xi), d)
    sigma = -pair(g, cov(G, d, xi), d)
    eps = pair(g, cov(G, xi, d), db)
    beta = pair(g, cov(G, d, d), db)
    qs = (kappa, rho, sigma, eps, beta)
    if not exact:
        return list(qs), d, db
    return [sp.simplify(sp.expand_complex(q)) for q in qs], d, db


def report(name, g, xi, e2, e3, extra_points=(), exact=True):
    print("=" * 10, name)
    gi, G = christoffel(g)
    R = ricci(G)
    print("Gamma nonzero:", {(k, i, j): G[k][i][j] for k in range(3) for i in range(3)
                             for j in range(3) if G[k][i][j] != 0})
    print("Ric:", R)
    print("orthonormality:", [sp.simplify(pair(g, a, b)) for a in (xi, e2, e3) for b in (xi, e2, e3)])
    (kappa, rho, sigma, eps, beta), d, db = spin(g, G, xi, e2, e3, exact)
    if exact:
        print("kappa =", kappa, " rho =", rho, " sigma =", sigma, " eps =", eps, " beta =", beta)
        print("Ric(xi,xi) =", sp.simplify(pair(R, xi, xi)), " Ric(d,db) =", sp.simplify(sp.expand_complex(pair(R, d, db))),
              " Ric(xi,d) =", sp.simplify(sp.expand_complex(pair(R, xi, d))),
              " Ric(d,d) =", sp.simplify(sp.expand_complex(pair(R, d, d))))
    for p in extra_points:
        sub = dict(zip(X, p))
        print("  at", p, ": rho =", complex(sp.N(rho.subs(sub), 20)), " sigma =", complex(sp.N(sigma.subs(sub), 20)),
              " beta =", complex(sp.N(beta.subs(sub), 20)), " eps =", complex(sp.N(eps.subs(sub), 20)),
              " kappa =", complex(sp.N(kappa.subs(sub), 20)))
        print("     Ric(xi,xi) =", complex(sp.N(pair(R, xi, xi).subs(sub), 20)),
              " Ric(d,db) =", complex(sp.N(pair(R, d, db).subs(sub), 20)),
              " Ric(xi,d) =", complex(sp.N(pair(R, xi, d).subs(sub), 20)))
    return G, R, (kappa, rho, sigma, eps, beta), d, db


# Hyperbolic space dz^2 + e^{2z}(dx^2 + dy^2), xi = d_z.
g = sp.diag(sp.exp(2 * z), sp.exp(2 * z), 1)
report("hyperbolic", g, [0, 0, 1], [sp.exp(-z), 0, 0], [0, sp.exp(-z), 0])

# Heisenberg dx^2 + dy^2 + (dz - y dx)^2, xi = d_z; orientation +1 frame e2 = d_x + y d_z, e3 = d_y.
def heis(c, s):
    eta = sp.Matrix([-c * y, 0, 1])
    h = sp.diag(1, s, 0)
    return h + eta * eta.T

report("heisenberg", heis(1, 1), [0, 0, 1], [1, 0, y], [0, 1, 0])
report("heisenberg_aniso", heis(1, sp.Rational(1, 4)), [0, 0, 1], [1, 0, y], [0, 2, 0])
report("heisenberg_sasakian", heis(2, 1), [0, 0, 1], [1, 0, 2 * y], [0, 1, 0])

# Euclidean dx^2 + dy^2 + dz^2/4 with the rotating field xi = (cos z, sin z, 0);
# e2 = (-sin z, cos z, 0) is the Gram-Schmidt completion seeded by d_y.
report("flat_contact", sp.diag(1, 1, sp.Rational(1, 4)), [sp.cos(z), sp.sin(z), 0], [-sp.sin(z), sp.cos(z), 0],
       [0, 0, 2])

# Remark metric 1/2 (z^2 + sin^2 y)(dx^2+dy^2) + (dz + cos y dx)^2, xi = d_z.
f = (z ** 2 + sp.sin(y) ** 2) / 2
eta = sp.Matrix([sp.cos(y), 0, 1])
g = sp.diag(f, f, 0) + eta * eta.T
e2 = [1 / sp.sqrt(f), 0, -sp.cos(y) / sp.sqrt(f)]
e3 = [0, 1 / sp.sqrt(f), 0]
G, R, (kappa, rho, sigma, eps, beta), d, db = report("remark", g, [0, 0, 1], e2, e3,
                                                     extra_points=[(0.5, 1.5, 1.0), (0.25, 1.0, 0.75)], exact=False)
# eta-Einstein residuals of the remark metric: Ric - a g - b eta (x) eta.
a = sp.simplify(sp.expand_complex(pair(R, d, db)))
b = sp.simplify(pair(R, [0, 0, 1], [0, 0, 1]) - a)
print("remark a =", a, " b =", b)
print("remark Ric - a g - b eta eta =", sp.simplify(R - a * g - b * eta * eta.T))
