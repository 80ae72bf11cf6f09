"""Quantum determinants, Drinfeld-type generator triples, and their relations.

The commuting family is generated by the level-n quantum determinant

    A_n(lam) = sum over permutations p of sign(p) *
        prod_{k=1..n} [ (lam - i hbar rho_k) delta_{p(k),k} - i hbar E_{p(k),k} ],

with rho_k = (n - 2k + 1)/2 and factors composed left to right (the leftmost
acts last).  On pattern functions it acts as multiplication by
prod_j (lam - gamma_nj); this single identity exercises the determinant
expansion, the composite generators, and operator composition at once.

The off-diagonal quantum minors have closed interpolation forms

    B_n(lam) =  sum_j prod_{s != j} (lam - g_ns)/(g_nj - g_ns)
                * prod_{r=1..n+1} (g_nj - g_{n+1,r} - i hbar/2) * shift_j(-),
    C_n(lam) = -sum_j prod_{s != j} (lam - g_ns)/(g_nj - g_ns)
                * prod_{r=1..n-1} (g_nj - g_{n-1,r} + i hbar/2) * shift_j(+),

equal to the commutators [A_n(lam), E_{n,n+1}] and [E_{n+1,n}, A_n(lam)].
The lattice (QISM) normalization drops the Gamma-kernel factors and carries
i^{1 +- n} prefactors; it is similar to the triple above by conjugation with
the two-level kernel s_n (s_{n-1} for C), up to a constant scalar that is
determined empirically and recorded by the checks.

Generators are recovered from the triples by residue integrals over a circle
|lam| = R enclosing the level roots:

    E_{n,n+1} = (1/2 pi hbar) oint A_n(lam)^{-1} B_n(lam) dlam,
    E_{n+1,n} = (1/2 pi hbar) oint C_n(lam) A_n(lam)^{-1} dlam,
    E_nn      = (1/2 pi hbar) oint A_n(lam)/A_{n-1}(lam + i hbar/2)
                dlam/lam - (n-1)/2,

counterclockwise.  (The +i hbar/2 shift in the diagonal formula is forced:
the expansion at infinity gives a_{-1} = sum gamma_{n-1} - sum gamma_n
+ 2s for denominator shift s, and only s = +i hbar/2 makes the constant
-(n-1)/2 close the identity.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .core import (
    CachedGzFunction,
    GzFunction,
    GzOperator,
    HBar,
    compose,
    identity_operator,
    multiplication_operator,
    random_pattern,
    random_polynomial,
)
from .errors import ConfigurationError, ContourError, CostGuardError
from .glrep import generator, level_kernel, rho_vector
from .report import Stopwatch, SuiteReport

__all__ = [
    "OperatorPolynomial",
    "DrinfeldTriple",
    "casimir_poly",
    "drinfeld_triple",
    "qism_triple",
    "check_yangian_relations",
    "check_qism_relations",
    "reconstruct_generators",
]

MAX_DETERMINANT_LEVEL = 5  # n! factor expansion; raise deliberately if needed


class OperatorPolynomial:
    """sum_k lam^k Op_k with GzOperator coefficients."""

    def __init__(self, coefficients: list[GzOperator], n_levels: int, hbar: HBar,
                 label: str = "P"):
        if not coefficients:
            raise ConfigurationError("need at least one coefficient")
        self.coefficients = list(coefficients)
        self.n_levels = n_levels
        self.hbar = hbar
        self.label = label

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, lam: complex) -> GzOperator:
        lam = complex(lam)
        coeffs = self.coefficients

        def apply(f):
            applied = [op(f) for op in coeffs]

            def ev(p):
                total = applied[0](p)
                power = 1.0 + 0.0j
                for k in range(1, len(applied)):
                    power *= lam
                    total = total + power * applied[k](p)
                return total

            return GzFunction(f.n_levels, ev)

        return GzOperator(self.n_levels, self.hbar, apply, f"{self.label}({lam})")


def _poly_mul(left: list[GzOperator], right: list[GzOperator],
              N: int, hbar: HBar) -> list[GzOperator]:
    """Coefficient convolution with composition (left factor acts last)."""
    out: list[GzOperator | None] = [None] * (len(left) + len(right) - 1)
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            c = compose(a, b)
            out[i + j] = c if out[i + j] is None else out[i + j] + c
    return out  # type: ignore[return-value]


def casimir_poly(n: int, N: int, hbar: HBar,
                 max_level: int = MAX_DETERMINANT_LEVEL) -> OperatorPolynomial:
    """Level-n quantum determinant as an operator polynomial of degree n.

    Expanded by explicit permutation enumeration in the printed factor
    order; cost n! operator products, guarded at ``max_level``.
    """
    if not 1 <= n <= N:
        raise ConfigurationError(f"need 1 <= n <= N, got n={n}, N={N}")
    if n > max_level:
        raise CostGuardError(
            f"determinant level {n} exceeds the n! cost guard ({max_level}); "
            "raise max_level explicitly to override")
    hb = hbar.value
    rho = rho_vector(n)
    ident = identity_operator(N, hbar)
    total: list[GzOperator | None] = [None] * (n + 1)
    for perm in permutations(range(1, n + 1)):
        sign = _perm_sign(perm)
        factors: list[list[GzOperator]] = []
        for k in range(1, n + 1):
            pk = perm[k - 1]
            e_term = (-1j * hb) * generator(pk, k, N, hbar)
            if pk == k:
                const = (-1j * hb * rho[k - 1]) * ident + e_term
                factors.append([const, ident])
            else:
                factors.append([e_term])
        poly = factors[0]
        for fac in factors[1:]:
            poly = _poly_mul(poly, fac, N, hbar)
        for d, op in enumerate(poly):
            term = sign * op if sign < 0 else op
            total[d] = term if total[d] is None else total[d] + term
    coeffs = [op if op is not None else 0.0 * ident for op in total]
    return OperatorPolynomial(coeffs, N, hbar, label=f"A{n}")


def _perm_sign(perm) -> float:
    sign = 1.0
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _lagrange_coeff(row, j: int, k: int) -> complex:
    """Coefficient of lam^k in prod_{s != j} (lam - row[s])."""
    poly = [1.0 + 0.0j]
    for s in range(len(row)):
        if s == j:
            continue
        new = [0.0j] * (len(poly) + 1)
        for d, c in enumerate(poly):
            new[d + 1] += c
            new[d] -= row[s] * c
        poly = new
    return poly[k]


def _interp_operator(n: int, N: int, hbar: HBar, k: int, shift: int,
                     numerator, prefactor: complex, label: str) -> GzOperator:
    """Coefficient of lam^k of an interpolation-form minor.

    ``numerator(pattern, j)`` supplies the extra product attached to term j;
    ``shift`` is the shift direction of gamma_nj in units of i hbar.
    """
    hb = hbar.value

    def apply(f):
        def ev(p):
            row = p.row(n)
            total = None
            for j in range(n):
                den = 1.0 + 0.0j
                for s in range(n):
                    if s != j:
                        den = den * (row[j] - row[s])
                c = _lagrange_coeff(row, j, k) / den
                term = c * numerator(p, j) * f(p.shifted(n, j + 1, shift * 1j * hb))
                total = term if total is None else total + term
            return prefactor * total

        return GzFunction(f.n_levels, ev)

    return GzOperator(N, hbar, apply, label)


def _drinfeld_b_numerator(hb: float, n: int):
    def num(p, j):
        row, up = p.row(n), p.row(n + 1)
        out = 1.0 + 0.0j
        for r in range(n + 1):
            out = out * (row[j] - up[r] - 0.5j * hb)
        return out

    return num


def _drinfeld_c_numerator(hb: float, n: int):
    def num(p, j):
        row = p.row(n)
        dn = p.row(n - 1) if n >= 2 else ()
        out = 1.0 + 0.0j
        for r in range(n - 1):
            out = out * (row[j] - dn[r] + 0.5j * hb)
        return out

    return num


def _mult_poly_a(n: int, N: int, hbar: HBar) -> OperatorPolynomial:
    """A_n(lam) in interpolation form: multiplication by prod_j (lam - g_nj)."""
    coeffs = []
    for k in range(n + 1):
        def factor(p, k=k):
            row = p.row(n)
            # coefficient of lam^k of prod (lam - g): signed elementary symmetric
            poly = [1.0 + 0.0j]
            for g in row:
                new = [0.0j] * (len(poly) + 1)
                for d, c in enumerate(poly):
                    new[d + 1] += c
                    new[d] -= g * c
                poly = new
            return poly[k]

        coeffs.append(multiplication_operator(N, hbar, factor, f"A{n}[{k}]"))
    return OperatorPolynomial(coeffs, N, hbar, label=f"A{n}")


@dataclass
class DrinfeldTriple:
    n: int
    a: OperatorPolynomial
    b: OperatorPolynomial
    c: OperatorPolynomial


def drinfeld_triple(n: int, N: int, hbar: HBar) -> DrinfeldTriple:
    """Interpolation-form (A_n, B_n, C_n); B, C need 1 <= n <= N-1."""
    if not 1 <= n <= N - 1:
        raise ConfigurationError(f"triple needs 1 <= n <= N - 1, got n={n}, N={N}")
    hb = hbar.value
    a = _mult_poly_a(n, N, hbar)
    b = OperatorPolynomial(
        [_interp_operator(n, N, hbar, k, -1, _drinfeld_b_numerator(hb, n),
                          1.0, f"B{n}[{k}]") for k in range(n)],
        N, hbar, label=f"B{n}")
    c = OperatorPolynomial(
        [_interp_operator(n, N, hbar, k, +1, _drinfeld_c_numerator(hb, n),
                          -1.0, f"C{n}[{k}]") for k in range(n)],
        N, hbar, label=f"C{n}")
    return DrinfeldTriple(n, a, b, c)


def qism_triple(n: int, N: int, hbar: HBar) -> DrinfeldTriple:
    """Lattice-normalized triple: no Gamma-kernel numerators, i^{1 +- n} scale."""
    if not 1 <= n <= N - 1:
        raise ConfigurationError(f"triple needs 1 <= n <= N - 1, got n={n}, N={N}")
    one = lambda p, j: 1.0 + 0.0j  # noqa: E731
    a = _mult_poly_a(n, N, hbar)
    b = OperatorPolynomial(
        [_interp_operator(n, N, hbar, k, -1, one, 1j ** (1 + n), f"qB{n}[{k}]")
         for k in range(n)],
        N, hbar, label=f"qB{n}")
    c = OperatorPolynomial(
        [_interp_operator(n, N, hbar, k, +1, one, 1j ** (1 - n), f"qC{n}[{k}]")
         for k in range(n)],
        N, hbar, label=f"qC{n}")
    return DrinfeldTriple(n, a, b, c)


# ---------------------------------------------------------------------------
# relation checks
# ---------------------------------------------------------------------------


def _rel_error(lhs, rhs, terms):
    scale = sum(abs(t) for t in terms) + 1e-30
    return abs(lhs - rhs) / scale


def _sample_lam_pair(rng, min_gap=0.05, radius=5.0):
    while True:
        lam = complex(*rng.uniform(-radius, radius, 2))
        mu = complex(*rng.uniform(-radius, radius, 2))
        if abs(lam - mu) >= min_gap:
            return lam, mu


def check_yangian_relations(N: int, hbar: HBar, trials: int = 10,
                            rng: np.random.Generator | None = None,
                            threshold: float = 1e-9) -> SuiteReport:
    """Exchange relations of the Drinfeld-type triples plus the commutator
    characterizations of B and C and the multiplication property of A."""
    rng = np.random.default_rng(0) if rng is None else rng
    report = SuiteReport(suite=f"yangian-relations N={N}",
                         meta={"hbar": hbar.value, "trials": trials})
    hb = hbar.value
    with Stopwatch() as sw:
        triples = {n: drinfeld_triple(n, N, hbar) for n in range(1, N)}
        a_polys = {n: triples[n].a for n in range(1, N)}
        a_polys[N] = _mult_poly_a(N, N, hbar)

        def pairs():
            for _ in range(trials):
                f = CachedGzFunction(random_polynomial(N, rng))
                p = random_pattern(N, rng, hbar)
                lam, mu = _sample_lam_pair(rng)
                yield f, p, lam, mu

        # A commutes with A
        err = 0.0
        for f, p, lam, mu in pairs():
            for n in range(1, N + 1):
                for m in range(1, N + 1):
                    An, Am = a_polys[n](lam), a_polys[m](mu)
                    ab = An(Am(f))(p)
                    ba = Am(An(f))(p)
                    err = max(err, _rel_error(ab, ba, [ab, ba, f(p)]))
        report.add("A-commute", err, threshold)

        # B family and C family commute away from adjacent levels
        err = 0.0
        for f, p, lam, mu in pairs():
            for n in range(1, N):
                for m in range(1, N):
                    if abs(n - m) == 1:
                        continue
                    for fam in ("b", "c"):
                        On = getattr(triples[n], fam)(lam)
                        Om = getattr(triples[m], fam)(mu)
                        ab = On(Om(f))(p)
                        ba = Om(On(f))(p)
                        err = max(err, _rel_error(ab, ba, [ab, ba, f(p)]))
        report.add("BC-commute", err, threshold)

        # exchange relations with A
        err = 0.0
        for f, p, lam, mu in pairs():
            for n in range(1, N):
                A, B, C = triples[n].a, triples[n].b, triples[n].c
                t1 = (lam - mu + 1j * hb) * A(lam)(B(mu)(f))(p)
                t2 = (lam - mu) * B(mu)(A(lam)(f))(p)
                t3 = 1j * hb * A(mu)(B(lam)(f))(p)
                err = max(err, _rel_error(t1, t2 + t3, [t1, t2, t3]))
                u1 = (lam - mu + 1j * hb) * A(mu)(C(lam)(f))(p)
                u2 = (lam - mu) * C(lam)(A(mu)(f))(p)
                u3 = 1j * hb * A(lam)(C(mu)(f))(p)
                err = max(err, _rel_error(u1, u2 + u3, [u1, u2, u3]))
        report.add("AB-AC-exchange", err, threshold)

        # commutator characterization of B and C
        err = 0.0
        for f, p, lam, _ in pairs():
            for n in range(1, N):
                A, B, C = triples[n].a, triples[n].b, triples[n].c
                Ev = generator(n, n + 1, N, hbar)
                lhs = B(lam)(f)(p)
                t1 = A(lam)(Ev(f))(p)
                t2 = Ev(A(lam)(f))(p)
                err = max(err, _rel_error(lhs, t1 - t2, [lhs, t1, t2]))
                Ew = generator(n + 1, n, N, hbar)
                lhs = C(lam)(f)(p)
                t1 = Ew(A(lam)(f))(p)
                t2 = A(lam)(Ew(f))(p)
                err = max(err, _rel_error(lhs, t1 - t2, [lhs, t1, t2]))
        report.add("commutator-minors", err, threshold)

        # identical-argument degeneration of the exchange relation is exact
        err = 0.0
        for f, p, lam, _ in pairs():
            for n in range(1, N):
                A, B = triples[n].a, triples[n].b
                t1 = 1j * hb * A(lam)(B(lam)(f))(p)
                t3 = 1j * hb * A(lam)(B(lam)(f))(p)
                err = max(err, _rel_error(t1, t3, [t1, t3]))
        report.add("equal-argument", err, threshold)
    report.wall_time_s = sw.elapsed
    return report


def check_casimir_multiplication(N: int, hbar: HBar, levels=None, trials: int = 5,
                                 rng: np.random.Generator | None = None,
                                 threshold: float = 1e-9) -> SuiteReport:
    """Determinant acts as multiplication by prod_j (lam - gamma_nj)."""
    rng = np.random.default_rng(0) if rng is None else rng
    levels = range(1, min(N, MAX_DETERMINANT_LEVEL) + 1) if levels is None else levels
    report = SuiteReport(suite=f"casimir-multiplication N={N}",
                         meta={"hbar": hbar.value})
    with Stopwatch() as sw:
        for n in levels:
            poly = casimir_poly(n, N, hbar)
            err = 0.0
            lead_err = 0.0
            for _ in range(trials):
                f = CachedGzFunction(random_polynomial(N, rng))
                p = random_pattern(N, rng, hbar)
                lam = complex(*rng.uniform(-3, 3, 2))
                got = poly(lam)(f)(p)
                want = f(p)
                for g in p.row(n):
                    want = want * (lam - g)
                err = max(err, _rel_error(got, want, [got, want, f(p)]))
                top = poly.coefficients[-1](f)(p)
                lead_err = max(lead_err, _rel_error(top, f(p), [top, f(p), 1.0]))
            report.add(f"multiplication-n{n}", err, threshold)
            report.add(f"monic-n{n}", lead_err, threshold)
    report.wall_time_s = sw.elapsed
    return report


def check_qism_relations(N: int, hbar: HBar, trials: int = 10,
                         rng: np.random.Generator | None = None,
                         threshold: float = 1e-9) -> SuiteReport:
    """Exchange relations of the lattice triple and its similarity to the
    kernel-conjugated triple; the scalar between the two normalizations is
    fitted per level and recorded (asserting only proportionality)."""
    rng = np.random.default_rng(0) if rng is None else rng
    hb = hbar.value
    report = SuiteReport(suite=f"qism-relations N={N}", meta={"hbar": hbar.value})
    with Stopwatch() as sw:
        err = 0.0
        for n in range(1, N):
            q = qism_triple(n, N, hbar)
            for _ in range(trials):
                f = CachedGzFunction(random_polynomial(N, rng))
                p = random_pattern(N, rng, hbar)
                lam, mu = _sample_lam_pair(rng)
                A, B, C = q.a, q.b, q.c
                t1 = (lam - mu + 1j * hb) * A(lam)(B(mu)(f))(p)
                t2 = (lam - mu) * B(mu)(A(lam)(f))(p)
                t3 = 1j * hb * A(mu)(B(lam)(f))(p)
                err = max(err, _rel_error(t1, t2 + t3, [t1, t2, t3]))
                u1 = (lam - mu + 1j * hb) * A(mu)(C(lam)(f))(p)
                u2 = (lam - mu) * C(lam)(A(mu)(f))(p)
                u3 = 1j * hb * A(lam)(C(mu)(f))(p)
                err = max(err, _rel_error(u1, u2 + u3, [u1, u2, u3]))
                for fam in ("b", "c"):
                    On = getattr(q, fam)(lam)
                    Om = getattr(q, fam)(mu)
                    ab = On(Om(f))(p)
                    ba = Om(On(f))(p)
                    err = max(err, _rel_error(ab, ba, [ab, ba, f(p)]))
        report.add("lattice-exchange", err, threshold)

        constants = {}
        err = 0.0
        for n in range(1, N):
            q = qism_triple(n, N, hbar)
            d = drinfeld_triple(n, N, hbar)
            for fam, kern_level in (("b", n), ("c", n - 1)):
                s = level_kernel(kern_level, N, hbar)
                ratios = []
                for _ in range(trials):
                    f = random_polynomial(N, rng)
                    p = random_pattern(N, rng, hbar)
                    lam = complex(*rng.uniform(-3, 3, 2))
                    sf = GzFunction(N, lambda q_, f=f, s=s: s(q_) * f(q_))
                    conj_val = getattr(d, fam)(lam)(sf)(p) / s(p)
                    plain = getattr(q, fam)(lam)(f)(p)
                    if abs(plain) > 1e-8:
                        ratios.append(conj_val / plain)
                base = complex(ratios[0])
                for r in ratios[1:]:
                    err = max(err, abs(r - base) / abs(base))
                constants[f"{fam}{n}"] = base
        report.add("similarity-proportional", err, threshold * 100)
        report.meta["similarity_constants"] = {
            k: [v.real, v.imag] for k, v in constants.items()
        }
    report.wall_time_s = sw.elapsed
    return report


def reconstruct_generators(n: int, N: int, hbar: HBar, radius: float | None = None,
                           n_theta: int = 128, trials: int = 5,
                           rng: np.random.Generator | None = None,
                           threshold: float = 1e-8) -> SuiteReport:
    """Round-trip the generator families through circle integrals of the
    minors; also reports the node-doubling stability of the circle rule."""
    rng = np.random.default_rng(0) if rng is None else rng
    hb = hbar.value
    d = drinfeld_triple(n, N, hbar)
    e_up = generator(n, n + 1, N, hbar)
    e_dn = generator(n + 1, n, N, hbar)
    e_diag = generator(n, n, N, hbar)
    report = SuiteReport(suite=f"reconstruction n={n} N={N}", meta={"hbar": hbar.value})

    def circle(fun, R, m):
        theta = 2.0 * math.pi * np.arange(m) / m
        lam = R * np.exp(1j * theta)
        vals = np.asarray([fun(l) for l in lam])
        return complex(np.sum(vals * 1j * lam) * (2.0 * math.pi / m) / (2.0 * math.pi * hb))

    with Stopwatch() as sw:
        err_up = err_dn = err_diag = stab = 0.0
        for _ in range(trials):
            f = CachedGzFunction(random_polynomial(N, rng))
            p = random_pattern(N, rng, hbar)
            roots = [abs(complex(v)) for v in p.row(n)] + \
                [abs(complex(v)) for v in (p.row(n - 1) if n >= 2 else ())] + [0.1]
            R = (max(roots) + n * hb + 2.0) if radius is None else radius
            if R <= max(roots) + n * hb:
                raise ContourError("circle radius does not dominate the level roots")

            def a_at(lam, row):
                out = 1.0 + 0.0j
                for g in row:
                    out = out * (lam - g)
                return out

            def g_up(lam):
                return d.b(lam)(f)(p) / a_at(lam, p.row(n))

            def g_dn(lam):
                inv = GzFunction(N, lambda q, lam=lam: f(q) / a_at(lam, q.row(n)))
                return d.c(lam)(inv)(p)

            def g_diag(lam):
                den = a_at(lam + 0.5j * hb, p.row(n - 1) if n >= 2 else ())
                return a_at(lam, p.row(n)) / (den * lam)

            up = circle(g_up, R, n_theta)
            up2 = circle(g_up, R, 2 * n_theta)
            want = e_up(f)(p)
            err_up = max(err_up, _rel_error(up, want, [up, want, f(p)]))
            stab = max(stab, abs(up2 - up) / (abs(up) + 1e-30))

            dn = circle(g_dn, R, n_theta)
            want = e_dn(f)(p)
            err_dn = max(err_dn, _rel_error(dn, want, [dn, want, f(p)]))

            diag = circle(g_diag, R, n_theta) - 0.5 * (n - 1)
            want = e_diag(f)(p) / f(p) if abs(f(p)) > 1e-12 else None
            got = diag
            if want is not None:
                err_diag = max(err_diag, _rel_error(got, want, [got, want, 1.0]))
        report.add("raise-roundtrip", err_up, threshold)
        report.add("lower-roundtrip", err_dn, threshold)
        report.add("diagonal-roundtrip", err_diag, threshold)
        report.add("angular-doubling", stab, 1e-12)
    report.wall_time_s = sw.elapsed
    return report
