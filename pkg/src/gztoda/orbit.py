"""Darboux coordinates on the coadjoint orbit and the classical generators.

An orbit point is coordinatized by a real triangular array gamma (the top
row fixes the orbit, i.e. the spectrum) plus nonzero momenta-like variables
Q_nj, 1 <= j <= n <= N-1, avoiding the excluded set where same-level or
consecutive-level gammas coincide or some Q vanishes.  The matrix point is
rebuilt as u = g^{-1} diag(gamma_N) g with g = g_N ... g_2, where the n x n
corner f_n of g_n has entries

    (f_n)_{jk} = Q_{n-1,k}/(g_nj - g_{n-1,k})
                 * prod_r (g_nj - g_{n-1,r}) / prod_{s != j} (g_nj - g_ns),
    (f_n)_{jn} = prod_r (g_nj - g_{n-1,r}) / prod_{s != j} (g_nj - g_ns),

and the inverse map reads the gammas off the principal-minor roots of
T(lam) = lam I - u and the Qs off the column/row-swapped minors

    b_n(lam) = det_n(T(lam) S_{n,n+1}),   c_n(lam) = det_n(S_{n,n+1} T(lam)),
    Q_nj = a_{n+1}(g_nj)/b_n(g_nj) = -c_n(g_nj)/a_{n-1}(g_nj).

The canonical two-form is sum d gamma_nj ^ d log Q_nj; the induced bracket
used here is

    {f, g} = sum_nj Q_nj ( df/dQ_nj dg/dgamma_nj - df/dgamma_nj dg/dQ_nj ),

oriented so that {u_12, u_21} = u_11 - u_22 (the classical limit of the
quantum commutators; the opposite orientation flips every relation's sign).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GzPattern
from .errors import ConfigurationError, DegenerateInputError
from .report import Stopwatch, SuiteReport

__all__ = [
    "OrbitPoint",
    "random_orbit_point",
    "corner_matrix",
    "reconstruct_u",
    "minor_polys",
    "closed_form_b",
    "closed_form_c",
    "recover_coordinates",
    "classical_generators",
    "poisson_check",
    "contour_check",
]

_SEP = 1e-8  # coincidence tolerance defining the excluded set


@dataclass(frozen=True)
class OrbitPoint:
    """Real triangular gamma array plus nonzero Q array (levels 1..N-1)."""

    gamma: GzPattern
    q: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        N = self.gamma.n_levels
        q = tuple(tuple(float(v) for v in row) for row in self.q)
        if len(q) != N - 1 or any(len(q[n - 1]) != n for n in range(1, N)):
            raise ConfigurationError("Q must mirror the free rows of gamma")
        object.__setattr__(self, "q", q)
        for n in range(1, N + 1):
            row = [complex(v) for v in self.gamma.row(n)]
            if any(abs(v.imag) > 0 for v in row):
                raise ConfigurationError("orbit coordinates are real")
            for s in range(n):
                for p in range(s + 1, n):
                    if abs(row[s] - row[p]) < _SEP:
                        raise DegenerateInputError(
                            f"same-level coincidence at level {n}")
            if n < N:
                up = [complex(v) for v in self.gamma.row(n + 1)]
                for a in row:
                    for b in up:
                        if abs(a - b) < _SEP:
                            raise DegenerateInputError(
                                f"consecutive-level coincidence at level {n}")
        for row in q:
            for v in row:
                if abs(v) < _SEP:
                    raise DegenerateInputError("vanishing Q coordinate")

    @property
    def n_levels(self) -> int:
        return self.gamma.n_levels

    def gamma_row(self, n: int) -> np.ndarray:
        return np.asarray([float(np.real(v)) for v in self.gamma.row(n)])

    def q_row(self, n: int) -> np.ndarray:
        return np.asarray(self.q[n - 1])

    def replace(self, level: int, index: int, *, dgamma: float = 0.0,
                dq: float = 0.0) -> "OrbitPoint":
        rows = [list(map(float, map(np.real, r))) for r in self.gamma.rows]
        rows[level - 1][index - 1] += dgamma
        q = [list(r) for r in self.q]
        q[level - 1][index - 1] += dq
        return OrbitPoint(GzPattern([tuple(r) for r in rows]),
                          tuple(tuple(r) for r in q))


def random_orbit_point(N: int, rng: np.random.Generator,
                       spread: float = 2.0) -> OrbitPoint:
    """Sorted, well-separated gammas and |Q| in [0.5, 2] with random signs.

    Rows are jittered regular grids with alternating per-level offsets, which
    keeps same-level gaps >= ~0.5 and consecutive-level gaps >= ~0.1 (good
    Vandermonde conditioning for the round-trip checks)."""
    for _ in range(500):
        rows = []
        ok = True
        for n in range(1, N + 1):
            base = np.linspace(-spread, spread, n) if n > 1 else np.asarray([0.0])
            row = np.sort(base + 0.17 * (-1.0) ** n + rng.uniform(-0.1, 0.1, n))
            if n > 1 and np.min(np.diff(row)) < 0.3:
                ok = False
                break
            if rows:
                prev = np.asarray(rows[-1])
                if np.min(np.abs(row[:, None] - prev[None, :])) < 0.08:
                    ok = False
                    break
            rows.append(tuple(float(v) for v in row))
        if ok:
            break
    else:  # pragma: no cover
        raise ConfigurationError("failed to sample separated orbit gammas")
    q = tuple(
        tuple(float(rng.uniform(0.5, 2.0) * rng.choice((-1.0, 1.0))) for _ in range(n))
        for n in range(1, N)
    )
    return OrbitPoint(GzPattern(rows), q)


def corner_matrix(n: int, point: OrbitPoint) -> np.ndarray:
    """The n x n corner f_n of the factor g_n (f_1 = [1])."""
    if not 1 <= n <= point.n_levels:
        raise ConfigurationError(f"corner level {n} out of range")
    if n == 1:
        return np.ones((1, 1))
    gn = point.gamma_row(n)
    gd = point.gamma_row(n - 1)
    qd = point.q_row(n - 1)
    f = np.empty((n, n))
    for j in range(n):
        num = np.prod(gn[j] - gd)
        den = np.prod(np.delete(gn[j] - gn, j))
        base = num / den
        f[j, :n - 1] = qd * base / (gn[j] - gd)
        f[j, n - 1] = base
    return f


def _embed(f: np.ndarray, N: int) -> np.ndarray:
    g = np.eye(N)
    n = f.shape[0]
    g[:n, :n] = f
    return g


def reconstruct_u(point: OrbitPoint, check: bool = True) -> np.ndarray:
    """u = g^{-1} diag(gamma_top) g with g = g_N ... g_2.

    With ``check`` the intermediate conjugations are verified to leave each
    upper-left corner diagonal with the level gammas (the defining property
    of the corner factors)."""
    N = point.n_levels
    u = np.diag(point.gamma_row(N))
    for n in range(N, 1, -1):
        g = _embed(corner_matrix(n, point), N)
        u = np.linalg.solve(g, u @ g)
        if check:
            corner = u[:n - 1, :n - 1]
            want = np.diag(point.gamma_row(n - 1))
            if not np.allclose(corner, want, atol=1e-8 * max(1.0, np.abs(u).max())):
                raise DegenerateInputError(
                    f"corner condition failed at level {n - 1}")
    return u


def minor_polys(u: np.ndarray, n: int, lam: complex) -> tuple[complex, complex, complex]:
    """(a_n, b_n, c_n) at lam: principal, column-swapped and row-swapped
    n x n minors of T(lam) = lam I - u."""
    N = u.shape[0]
    if not 1 <= n <= N:
        raise ConfigurationError("minor order out of range")
    T = lam * np.eye(N, dtype=complex) - u
    a = np.linalg.det(T[:n, :n])
    if n < N:
        cols = list(range(n))
        cols[n - 1] = n
        b = np.linalg.det(T[np.ix_(range(n), cols)])
        c = np.linalg.det(T[np.ix_(cols, range(n))])
    else:
        b = c = complex("nan")
    return complex(a), complex(b), complex(c)


def closed_form_b(point: OrbitPoint, n: int, lam: complex) -> complex:
    """Interpolation form of b_n with Q^{-1} weights."""
    gn = point.gamma_row(n)
    gu = point.gamma_row(n + 1)
    qn = point.q_row(n)
    total = 0.0j
    for j in range(n):
        num = np.prod(gn[j] - gu)
        lag = np.prod(np.delete(lam - gn, j)) / np.prod(np.delete(gn[j] - gn, j))
        total += num * lag / qn[j]
    return complex(total)


def closed_form_c(point: OrbitPoint, n: int, lam: complex) -> complex:
    """Interpolation form of c_n with Q weights and overall minus sign."""
    gn = point.gamma_row(n)
    gd = point.gamma_row(n - 1) if n >= 2 else np.asarray([])
    qn = point.q_row(n)
    total = 0.0j
    for j in range(n):
        num = np.prod(gn[j] - gd) if n >= 2 else 1.0
        lag = np.prod(np.delete(lam - gn, j)) / np.prod(np.delete(gn[j] - gn, j))
        total += qn[j] * num * lag
    return complex(-total)


def recover_coordinates(u: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray], list[np.ndarray]]:
    """(gammas, q_from_b, q_from_c) read off the minors of u.

    Level gammas are the (sorted, real) eigenvalues of the principal corner
    blocks; the two Q formulas are returned separately so their agreement
    can be asserted."""
    N = u.shape[0]
    gammas = []
    for n in range(1, N + 1):
        ev = np.linalg.eigvals(u[:n, :n])
        if np.max(np.abs(ev.imag)) > 1e-9 * max(1.0, np.abs(ev).max()):
            raise DegenerateInputError("principal minor has non-real roots")
        gammas.append(np.sort(ev.real))
    q_b, q_c = [], []
    for n in range(1, N):
        qb = np.empty(n)
        qc = np.empty(n)
        for j in range(n):
            lam = gammas[n - 1][j]
            a_n, b_n, c_n = minor_polys(u, n, lam)
            a_up, _, _ = minor_polys(u, n + 1, lam)
            a_dn = minor_polys(u, n - 1, lam)[0] if n >= 2 else 1.0
            qb[j] = (a_up / b_n).real
            qc[j] = (-c_n / a_dn).real
        q_b.append(qb)
        q_c.append(qc)
    return gammas, q_b, q_c


def classical_generators(point: OrbitPoint) -> dict[str, np.ndarray]:
    """Closed forms of the diagonal and near-diagonal entries of u:

    u_nn     = sum gamma_n - sum gamma_{n-1},
    u_n,n+1  = -sum_j prod_r (g_nj - g_{n+1,r}) / prod_{s != j} (g_nj - g_ns) / Q_nj,
    u_n+1,n  =  sum_j prod_r (g_nj - g_{n-1,r}) / prod_{s != j} (g_nj - g_ns) * Q_nj.
    """
    N = point.n_levels
    diag = np.empty(N)
    for n in range(1, N + 1):
        below = point.gamma_row(n - 1).sum() if n >= 2 else 0.0
        diag[n - 1] = point.gamma_row(n).sum() - below
    upper = np.empty(N - 1)
    lower = np.empty(N - 1)
    for n in range(1, N):
        gn = point.gamma_row(n)
        gu = point.gamma_row(n + 1)
        gd = point.gamma_row(n - 1) if n >= 2 else np.asarray([])
        qn = point.q_row(n)
        up = 0.0
        lo = 0.0
        for j in range(n):
            den = np.prod(np.delete(gn[j] - gn, j))
            up += np.prod(gn[j] - gu) / den / qn[j]
            lo += (np.prod(gn[j] - gd) if n >= 2 else 1.0) / den * qn[j]
        upper[n - 1] = -up
        lower[n - 1] = lo
    return {"diagonal": diag, "upper": upper, "lower": lower}


def _entry_fn(a: int, b: int):
    def fn(pt: OrbitPoint) -> float:
        return float(reconstruct_u(pt, check=False)[a - 1, b - 1])

    return fn


def poisson_bracket(point: OrbitPoint, f, g, h_fd: float = 1e-6) -> float:
    """{f, g} = sum Q (df/dQ dg/dgamma - df/dgamma dg/dQ) by central
    differences in (gamma, Q)."""
    total = 0.0
    for n in range(1, point.n_levels):
        for j in range(1, n + 1):
            qv = point.q_row(n)[j - 1]
            hg = h_fd
            hq = h_fd * max(1.0, abs(qv))
            df_dg = (f(point.replace(n, j, dgamma=hg)) -
                     f(point.replace(n, j, dgamma=-hg))) / (2 * hg)
            dg_dg = (g(point.replace(n, j, dgamma=hg)) -
                     g(point.replace(n, j, dgamma=-hg))) / (2 * hg)
            df_dq = (f(point.replace(n, j, dq=hq)) -
                     f(point.replace(n, j, dq=-hq))) / (2 * hq)
            dg_dq = (g(point.replace(n, j, dq=hq)) -
                     g(point.replace(n, j, dq=-hq))) / (2 * hq)
            total += qv * (df_dq * dg_dg - df_dg * dg_dq)
    return total


def poisson_check(point: OrbitPoint, h_fd: float = 1e-6, n_pairs: int | None = None,
                  rng: np.random.Generator | None = None,
                  threshold: float = 1e-5) -> SuiteReport:
    """{u_ab, u_cd} = d_cb u_ad - d_ad u_cb by finite differences.

    Checks all index quadruples for small N (or a random sample of
    ``n_pairs``), plus the diagonal-family commutativity."""
    N = point.n_levels
    rng = np.random.default_rng(0) if rng is None else rng
    u = reconstruct_u(point, check=False)
    scale = np.abs(u).max() + 1.0
    quads = [(a, b, c, d)
             for a in range(1, N + 1) for b in range(1, N + 1)
             for c in range(1, N + 1) for d in range(1, N + 1)]
    if n_pairs is not None and len(quads) > n_pairs:
        idx = rng.choice(len(quads), size=n_pairs, replace=False)
        quads = [quads[i] for i in idx]
    report = SuiteReport(suite=f"poisson N={N}", meta={"h_fd": h_fd})
    with Stopwatch() as sw:
        err = 0.0
        derr = 0.0
        for a, b, c, d in quads:
            lhs = poisson_bracket(point, _entry_fn(a, b), _entry_fn(c, d), h_fd)
            rhs = 0.0
            if c == b:
                rhs += u[a - 1, d - 1]
            if a == d:
                rhs -= u[c - 1, b - 1]
            e = abs(lhs - rhs) / scale
            if a == b and c == d:
                derr = max(derr, e)
            err = max(err, e)
        report.add("matrix-bracket-grid", err, threshold)
        report.add("diagonal-family-commutes", derr, threshold)
    report.wall_time_s = sw.elapsed
    return report


def contour_check(point: OrbitPoint, n_theta: int = 256,
                  threshold: float = 1e-8) -> SuiteReport:
    """Classical residue formulas: counterclockwise circle integrals

        u_nn     = -(1/2 pi i) oint a_n/a_{n-1} dlam/lam,
        u_n,n+1  = -(1/2 pi i) oint b_n/a_n dlam,
        u_n+1,n  = -(1/2 pi i) oint c_n/a_n dlam,

    on |lam| = R enclosing all roots, against the matrix entries."""
    N = point.n_levels
    u = reconstruct_u(point, check=False)
    R = float(np.abs(u).max() * N + np.abs(point.gamma_row(N)).max() + 3.0)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    lams = R * np.exp(1j * theta)
    report = SuiteReport(suite=f"classical-contours N={N}", meta={"radius": R})
    scale = np.abs(u).max() + 1.0

    def circle(vals):
        return complex(np.sum(vals * 1j * lams) * (2.0 * math.pi / n_theta)
                       / (-2.0j * math.pi))

    with Stopwatch() as sw:
        err_d = err_u = err_l = 0.0
        for n in range(1, N + 1):
            a_n = np.asarray([minor_polys(u, n, l)[0] for l in lams])
            if n >= 2:
                a_dn = np.asarray([minor_polys(u, n - 1, l)[0] for l in lams])
            else:
                a_dn = np.ones_like(lams)
            got = circle(a_n / (a_dn * lams))
            err_d = max(err_d, abs(got - u[n - 1, n - 1]) / scale)
            if n < N:
                b_n = np.asarray([minor_polys(u, n, l)[1] for l in lams])
                c_n = np.asarray([minor_polys(u, n, l)[2] for l in lams])
                got = circle(b_n / a_n)
                err_u = max(err_u, abs(got - u[n - 1, n]) / scale)
                got = circle(c_n / a_n)
                err_l = max(err_l, abs(got - u[n, n - 1]) / scale)
        report.add("diagonal-contour", err_d, threshold)
        report.add("upper-contour", err_u, threshold)
        report.add("lower-contour", err_l, threshold)
    report.wall_time_s = sw.elapsed
    return report
