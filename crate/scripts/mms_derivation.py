"""Symbolic forcing for the manufactured cases in vvlab::oracle.

Substitutes the closed-form fields into

    rho_t + div(rho u) = F_rho
    rho (u_t + u.grad u) + grad(rho^gamma) - eps (mu lap u + (mu + lambda) grad div u) = F_u

(eps = 0 for the Euler system), prints the expressions, and writes
reference values at fixed points to crates/core/tests/data/mms_samples.csv.

    python3 scripts/mms_derivation.py
"""

import csv
import pathlib

import sympy as sp

y1, y2, z, t = sp.symbols("y1 y2 z t", real=True)
gamma, mu, lam, eps = sp.symbols("gamma mu lambda epsilon", positive=True)
pi = sp.pi


def cases():
    k = 2 * pi
    beta = sp.Integer(1)
    yield "robin", "ns", 2, (
        1 + sp.Rational(1, 10) * sp.cos(k * y1) * sp.cos(pi * z) * sp.cos(t),
        [
            sp.sin(k * y1) * (1 + beta * z * (1 - z)) * sp.cos(t),
            sp.Rational(1, 2) * sp.cos(k * y1) * sp.sin(pi * z) * sp.cos(t),
        ],
    )
    sym2 = (
        1 + sp.Rational(1, 10) * sp.cos(k * y1) * sp.cos(k * z) * sp.cos(t),
        [
            sp.Rational(1, 2) * sp.sin(k * y1) * sp.cos(k * z) * sp.cos(t),
            sp.Rational(1, 2) * sp.cos(k * y1) * sp.sin(k * z) * sp.cos(t),
        ],
    )
    yield "symmetric", "ns", 2, sym2
    yield "symmetric", "euler", 2, sym2
    yield "robin_shear", "ns", 2, (
        sp.Integer(1),
        [(1 + beta * z * (1 - z)) * sp.cos(t), sp.Integer(0)],
    )
    w = z * (1 - z)
    yield "flat_wall", "ns", 2, (
        1 + sp.Rational(1, 10) * sp.cos(k * y1) * (1 + 10 * w**2) * sp.cos(t),
        [sp.sin(k * y1) * (1 + 4 * w**4) * sp.cos(t), sp.Integer(0)],
    )
    yield "symmetric", "ns", 3, (
        1 + sp.Rational(1, 10) * sp.cos(k * y1) * sp.cos(k * y2) * sp.cos(k * z) * sp.cos(t),
        [
            sp.Rational(1, 2) * sp.sin(k * y1) * sp.cos(k * z) * sp.cos(t),
            sp.Rational(1, 2) * sp.sin(k * y2) * sp.cos(k * z) * sp.cos(t),
            sp.Rational(1, 2) * sp.cos(k * y1) * sp.cos(k * y2) * sp.sin(k * z) * sp.cos(t),
        ],
    )


def forcing(dim, mode, rho, u):
    x = [y1, z] if dim == 2 else [y1, y2, z]
    e = 0 if mode == "euler" else eps
    f_rho = sp.diff(rho, t) + sum(sp.diff(rho * u[a], x[a]) for a in range(dim))
    div = sum(sp.diff(u[a], x[a]) for a in range(dim))
    f_u = []
    for c in range(dim):
        adv = sp.diff(u[c], t) + sum(u[a] * sp.diff(u[c], x[a]) for a in range(dim))
        lap = sum(sp.diff(u[c], x[a], 2) for a in range(dim))
        f_u.append(
            rho * adv
            + sp.diff(rho**gamma, x[c])
            - e * (mu * lap + (mu + lam) * sp.diff(div, x[c]))
        )
    return f_rho, f_u


THERMO = [
    {gamma: 2, mu: 1, lam: 0, eps: sp.Rational(1, 10)},
    {gamma: sp.Rational(7, 5), mu: sp.Rational(3, 2), lam: sp.Rational(-1, 2), eps: sp.Rational(1, 20)},
]
POINTS = [
    (sp.Rational(1, 10), sp.Rational(3, 10), sp.Rational(1, 5), sp.Rational(1, 4)),
    (sp.Rational(7, 10), sp.Rational(1, 20), sp.Rational(9, 10), sp.Rational(3, 5)),
    (sp.Rational(37, 100), sp.Rational(61, 100), sp.Rational(1, 2), sp.Integer(0)),
]


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/tests/data/mms_samples.csv"
    rows = []
    for name, mode, dim, (rho, u) in cases():
        f_rho, f_u = forcing(dim, mode, rho, u)
        print(f"== {name} ({mode}, {dim}-D)")
        print("F_rho =", f_rho)
        for c, f in enumerate(f_u):
            print(f"F_u{c + 1} =", f)
        for th in THERMO:
            for (a, b, c, d) in POINTS:
                subs = dict(th)
                subs.update({y1: a, y2: b, z: c, t: d})
                vals = [sp.N(f_rho.subs(subs), 30)] + [sp.N(f.subs(subs), 30) for f in f_u]
                vals += [0] * (3 - dim)
                rows.append(
                    [name, mode, dim]
                    + [sp.N(th[s], 17) for s in (gamma, mu, lam, eps)]
                    + [sp.N(v, 17) for v in (a, b, c, d)]
                    + [sp.N(v, 20) for v in vals]
                )
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["case", "mode", "dim", "gamma", "mu", "lambda", "epsilon",
             "y1", "y2", "z", "t", "f_rho", "f_u1", "f_u2", "f_u3"]
        )
        w.writerows(rows)


if __name__ == "__main__":
    main()
