"""The gl(N) representation by difference operators on pattern functions.

Generators
----------
Diagonal generators multiply by level-sum differences,

    E_nn = (sum_j gamma_nj - sum_j gamma_{n-1,j}) / (i hbar),

super/sub-diagonal generators are one-step shift operators with rational
Vandermonde prefactors,

    E_{n,n+1} = -(i hbar)^{-1} sum_j
        prod_{r=1}^{n+1} (gamma_nj - gamma_{n+1,r} - i hbar/2)
        / prod_{s != j} (gamma_nj - gamma_ns) * [gamma_nj -> gamma_nj - i hbar],

    E_{n+1,n} = +(i hbar)^{-1} sum_j
        prod_{r=1}^{n-1} (gamma_nj - gamma_{n-1,r} + i hbar/2)
        / prod_{s != j} (gamma_nj - gamma_ns) * [gamma_nj -> gamma_nj + i hbar],

and distant generators are nested commutators E_jk = [E_jm, E_mk] with the
intermediate index m taken adjacent to j (any admissible m gives the same
operator; the test suite checks path independence pointwise).

Whittaker and Sutherland vectors
--------------------------------
w' = 1 and w = exp(-(pi/hbar) sum_n (n-1) sum_j gamma_nj) * prod_n s_n with
the two-level kernel

    s_n = prod_{k<=n, m<=n+1} hbar^{z_km} Gamma(z_km),
    z_km = (gamma_nk - gamma_{n+1,m}) / (i hbar) + 1/2,

satisfying E_{n,n+1} w = -(i/hbar) w and E_{n+1,n} w' = -(i/hbar) w'.  The
Sutherland vector uses kernels Gamma((gamma_nk - gamma_{n+1,m})/(2 i hbar)
+ 1/4) with half the exponential prefactor and is annihilated by every
E_{n,n+1} - E_{n+1,n}.  Both are computed in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CachedGzFunction,
    GzFunction,
    GzOperator,
    GzPattern,
    HBar,
    commutator,
    compose,
    multiplication_operator,
    pattern_as_longdouble,
    random_pattern,
    random_polynomial,
)
from .errors import ConfigurationError
from .report import Stopwatch, SuiteReport
from .backend import log_gamma_grid

__all__ = [
    "generator",
    "rho_vector",
    "WhittakerVector",
    "whittaker_vector",
    "SutherlandVector",
    "sutherland_vector",
    "check_gl_relations",
    "check_whittaker_eigen",
    "check_sutherland_condition",
]


def rho_vector(n: int) -> tuple[float, ...]:
    """Half-sum weights rho^(n)_k = (n - 2k + 1)/2, k = 1..n (they sum to 0)."""
    return tuple(0.5 * (n - 2 * k + 1) for k in range(1, n + 1))


def _row_sum(pattern: GzPattern, n: int):
    if n == 0:
        return 0.0j
    total = 0.0j
    for v in pattern.row(n):
        total = total + v
    return total


def _diagonal(n: int, N: int, hbar: HBar) -> GzOperator:
    def factor(p, n=n, hb=hbar.value):
        return (_row_sum(p, n) - _row_sum(p, n - 1)) / (1j * hb)

    return multiplication_operator(N, hbar, factor, f"E[{n},{n}]")


def _raising(n: int, N: int, hbar: HBar) -> GzOperator:
    """E_{n,n+1}: shifts gamma_nj down by i hbar."""
    hb = hbar.value

    half = 0.5j * hb
    step = -1j * hb
    pref = -1.0 / (1j * hb)

    def apply(f, n=n):
        fe = f.evaluator

        def ev(p):
            row_n = p.rows[n - 1]
            row_up = p.rows[n]
            total = 0.0j
            for j in range(n):
                gj = row_n[j]
                num = 1.0 + 0.0j
                for gu in row_up:
                    num = num * (gj - gu - half)
                for s, gs in enumerate(row_n):
                    if s != j:
                        num = num / (gj - gs)
                total = total + num * fe(p.shifted(n, j + 1, step))
            return pref * total

        return GzFunction(f.n_levels, ev)

    return GzOperator(N, hbar, apply, f"E[{n},{n + 1}]")


def _lowering(n: int, N: int, hbar: HBar) -> GzOperator:
    """E_{n+1,n}: shifts gamma_nj up by i hbar."""
    hb = hbar.value

    half = 0.5j * hb
    step = 1j * hb
    pref = 1.0 / (1j * hb)

    def apply(f, n=n):
        fe = f.evaluator

        def ev(p):
            row_n = p.rows[n - 1]
            row_dn = p.rows[n - 2] if n >= 2 else ()
            total = 0.0j
            for j in range(n):
                gj = row_n[j]
                num = 1.0 + 0.0j
                for gd in row_dn:
                    num = num * (gj - gd + half)
                for s, gs in enumerate(row_n):
                    if s != j:
                        num = num / (gj - gs)
                total = total + num * fe(p.shifted(n, j + 1, step))
            return pref * total

        return GzFunction(f.n_levels, ev)

    return GzOperator(N, hbar, apply, f"E[{n + 1},{n}]")


_GENERATOR_CACHE: dict = {}


def generator(j: int, k: int, N: int, hbar: HBar, via: int | None = None) -> GzOperator:
    """Generator E_jk acting on functions of an N-level pattern.

    ``via`` overrides the intermediate index of the composite recursion
    E_jk = [E_j,via, E_via,k] (must lie strictly between j and k); by
    default the index adjacent to j is used.  Construction is memoized so
    composite trees share subtree operator identities (which the
    application cache exploits).
    """
    if not (1 <= j <= N and 1 <= k <= N):
        raise ConfigurationError(f"generator index ({j},{k}) out of range for N={N}")
    key = (j, k, N, hbar.value, via)
    hit = _GENERATOR_CACHE.get(key)
    if hit is not None:
        return hit
    if j == k:
        op = _diagonal(j, N, hbar)
    elif k == j + 1:
        op = _raising(j, N, hbar)
    elif k == j - 1:
        op = _lowering(k, N, hbar)
    else:
        m = (j + 1 if j < k else j - 1) if via is None else via
        lo, hi = min(j, k), max(j, k)
        if not lo < m < hi:
            raise ConfigurationError(f"intermediate index {m} not between {j} and {k}")
        op = commutator(generator(j, m, N, hbar), generator(m, k, N, hbar))
        op.label = f"E[{j},{k}]"
    _GENERATOR_CACHE[key] = op
    return op


# ---------------------------------------------------------------------------
# Whittaker and Sutherland vectors
# ---------------------------------------------------------------------------


def _log_kernel_product(pattern: GzPattern, scale: float, offset: float, hb: float):
    """Sum over adjacent-level pairs of z*log(scale*hbar) + log Gamma(z) with
    z = (gamma_nk - gamma_{n+1,m}) / (scale * i * hbar) + offset.

    The power base scale*hbar is forced by the shift identity
    Gamma(z -+ 1/scale) / Gamma(z) ~ (scale * i * hbar)^{+-1/scale}: with any
    other base the simple-root eigen-equations fail by a constant.
    """
    N = pattern.n_levels
    total = None
    log_h = math.log(scale * hb)
    for n in range(1, N):
        row, up = pattern.row(n), pattern.row(n + 1)
        for k in range(n):
            for m in range(n + 1):
                z = (row[k] - up[m]) / (scale * 1j * hb) + offset
                z = np.asarray(z, dtype=np.complex128)
                term = z * log_h + log_gamma_grid(z)
                total = term if total is None else total + term
    return total if total is not None else 0.0j


def _exp_prefactor_log(pattern: GzPattern, denom: float):
    """-(pi/denom) sum_{n} (n-1) sum_j gamma_nj over the free rows."""
    total = 0.0j
    for n in range(2, pattern.n_levels):
        total = total + (n - 1) * _row_sum(pattern, n)
    return -(math.pi / denom) * total


def level_kernel(n: int, N: int, hbar: HBar) -> GzFunction:
    """The two-level Gamma kernel s_n(gamma_n, gamma_{n+1}) as a function,

        s_n = prod_{k<=n, m<=n+1} hbar^{z_km} Gamma(z_km),
        z_km = (gamma_nk - gamma_{n+1,m})/(i hbar) + 1/2,

    with s_0 = 1.  Used by the Whittaker vector and by the similarity
    transform between the two monodromy normalizations."""
    if n == 0:
        return GzFunction(N, lambda p: 1.0 + 0.0j, label="s0")
    hb = hbar.value
    log_h = math.log(hb)

    def ev(p):
        row, up = p.row(n), p.row(n + 1)
        total = None
        for k in range(n):
            for m in range(n + 1):
                z = np.asarray((row[k] - up[m]) / (1j * hb) + 0.5, dtype=np.complex128)
                term = z * log_h + log_gamma_grid(z)
                total = term if total is None else total + term
        val = np.exp(total)
        return complex(val) if np.ndim(val) == 0 else val

    return GzFunction(N, ev, label=f"s{n}")


@dataclass(frozen=True)
class WhittakerVector:
    kind: str
    n_levels: int
    hbar: HBar
    top_row: tuple
    function: GzFunction


def whittaker_vector(kind: str, N: int, hbar: HBar, gamma_top) -> WhittakerVector:
    """Whittaker vector of the given kind, ``"w"`` or ``"w_prime"``.

    ``w_prime`` is the constant function 1.  ``w`` is the Gamma-kernel
    product with exponential prefactor, evaluated in log space; the fixed
    top row must have pairwise distinct entries.
    """
    top = tuple(complex(v) for v in gamma_top)
    if len(top) != N:
        raise ConfigurationError(f"gamma_top must have {N} entries")
    for a in range(N):
        for b in range(a + 1, N):
            if top[a] == top[b]:
                raise ConfigurationError("top-row entries must be pairwise distinct")
    if kind == "w_prime":
        fn = GzFunction(N, lambda p: 1.0 + 0.0j, label="w'", top_row=top)
        return WhittakerVector(kind, N, hbar, top, fn)
    if kind != "w":
        raise ConfigurationError(f"unknown Whittaker kind {kind!r}")
    hb = hbar.value

    def ev(p):
        logval = _exp_prefactor_log(p, hb) + _log_kernel_product(p, 1.0, 0.5, hb)
        val = np.exp(logval)
        return complex(val) if np.ndim(val) == 0 else val

    fn = GzFunction(N, ev, label="w", top_row=top)
    return WhittakerVector(kind, N, hbar, top, fn)


@dataclass(frozen=True)
class SutherlandVector:
    n_levels: int
    hbar: HBar
    top_row: tuple
    function: GzFunction


def sutherland_vector(N: int, hbar: HBar, gamma_top) -> SutherlandVector:
    """Spherical-type vector annihilated by every E_{n,n+1} - E_{n+1,n}."""
    top = tuple(complex(v) for v in gamma_top)
    if len(top) != N:
        raise ConfigurationError(f"gamma_top must have {N} entries")
    hb = hbar.value

    def ev(p):
        logval = _exp_prefactor_log(p, 2.0 * hb) + _log_kernel_product(p, 2.0, 0.25, hb)
        val = np.exp(logval)
        return complex(val) if np.ndim(val) == 0 else val

    fn = GzFunction(N, ev, label="v", top_row=top)
    return SutherlandVector(N, hbar, top, fn)


# ---------------------------------------------------------------------------
# Relation suites
# ---------------------------------------------------------------------------


def _pattern_with_top(N, rng, hbar, top_row=None):
    return random_pattern(N, rng, hbar, top_row=top_row)


def _rel_error(lhs, rhs, scale_terms):
    scale = sum(abs(t) for t in scale_terms) + 1e-30
    return abs(lhs - rhs) / scale


def _pair_error(a_op, b_op, rhs_ops, rhs_signs, f, p):
    """Error of [a, b] f(p) = sum_i sign_i rhs_i f(p), scale-aware."""
    ab = a_op(b_op(f))(p)
    ba = b_op(a_op(f))(p)
    rhs = 0.0j
    terms = [ab, ba]
    for s, op in zip(rhs_signs, rhs_ops):
        v = op(f)(p)
        rhs = rhs + s * v
        terms.append(v)
    terms.append(f(p))
    return _rel_error(ab - ba, rhs, terms)


def check_gl_relations(N: int, hbar: HBar, trials: int = 20,
                       rng: np.random.Generator | None = None,
                       threshold: float = 1e-10) -> SuiteReport:
    """Pointwise verification of the defining gl(N) commutation relations.

    Covers the Chevalley relations between diagonal and simple-root
    generators, the Serre relations, and the full commutator grid
    [E_jk, E_lm] = E_jm d_lk - E_lk d_jm with composite generators.

    Each applied generator E(f) is memoized per trial, so the N^4 grid
    reuses inner evaluations across instances; the whole N=5 grid at 20
    trials runs in seconds.
    """
    if N < 2:
        raise ConfigurationError("relations need N >= 2")
    rng = np.random.default_rng(0) if rng is None else rng
    report = SuiteReport(suite=f"gl-relations N={N}", meta={"hbar": hbar.value, "trials": trials})
    with Stopwatch() as sw:
        E = {}
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                E[(j, k)] = generator(j, k, N, hbar)

        trials_data = []
        for _ in range(trials):
            f = CachedGzFunction(random_polynomial(N, rng))
            p = _pattern_with_top(N, rng, hbar)
            applied = {key: CachedGzFunction(op(f)) for key, op in E.items()}
            trials_data.append((f, p, applied))

        comm_memo: dict = {}

        def comm(a_key, b_key, f, p, applied):
            # [E_b, E_a] reuses [E_a, E_b] with the sides swapped
            hit = comm_memo.get((id(f), b_key, a_key))
            if hit is not None:
                return hit[1], hit[0]
            ab = E[a_key](applied[b_key])(p)
            ba = E[b_key](applied[a_key])(p)
            comm_memo[(id(f), a_key, b_key)] = (ab, ba)
            return ab, ba

        # lazy long-double mirrors: residuals near the threshold are
        # re-measured in extended precision to subtract double roundoff
        # (deep composite chains amplify eps by the Vandermonde condition)
        ld_ctx: dict = {}

        def refined_error(ti, a_key, b_key, rhs_keys, rhs_signs):
            ctx = ld_ctx.get(ti)
            if ctx is None:
                f, p, _ = trials_data[ti]
                base = f._base if isinstance(f, CachedGzFunction) else f
                ctx = (CachedGzFunction(base), pattern_as_longdouble(p), {})
                ld_ctx[ti] = ctx
            f_ld, p_ld, applied_ld = ctx

            def app(key):
                g = applied_ld.get(key)
                if g is None:
                    g = CachedGzFunction(E[key](f_ld))
                    applied_ld[key] = g
                return g

            ab = E[a_key](app(b_key))(p_ld)
            ba = E[b_key](app(a_key))(p_ld)
            rhs = 0.0j
            terms = [ab, ba, f_ld(p_ld)]
            for s, k in zip(rhs_signs, rhs_keys):
                v = app(k)(p_ld)
                rhs = rhs + s * v
                terms.append(v)
            return float(_rel_error(ab - ba, rhs, terms))

        # Chevalley relations
        err = 0.0
        for ti, (f, p, applied) in enumerate(trials_data):
            fp = f(p)
            for n in range(1, N + 1):
                for m in range(1, N):
                    d = (1.0 if n == m else 0.0) - (1.0 if n == m + 1 else 0.0)
                    for key, sgn in (((m, m + 1), d), ((m + 1, m), -d)):
                        ab, ba = comm((n, n), key, f, p, applied)
                        rhs = sgn * applied[key](p)
                        e = _rel_error(ab - ba, rhs, [ab, ba, rhs, fp])
                        if e > 0.25 * threshold:
                            e = refined_error(ti, (n, n), key, [key], [sgn])
                        err = max(err, e)
            for n in range(1, N):
                for m in range(1, N):
                    d = 1.0 if n == m else 0.0
                    ab, ba = comm((n, n + 1), (m + 1, m), f, p, applied)
                    rhs = d * (applied[(n, n)](p) - applied[(n + 1, n + 1)](p))
                    e = _rel_error(ab - ba, rhs, [ab, ba, rhs, fp])
                    if e > 0.25 * threshold:
                        e = refined_error(ti, (n, n + 1), (m + 1, m),
                                          [(n, n), (n + 1, n + 1)], [d, -d])
                    err = max(err, e)
        report.add("chevalley", err, threshold)

        # Serre relations: nested commutators of simple generators vanish
        err = 0.0
        for n in range(1, N - 1):
            nests = [
                (E[(n, n + 1)], E[(n, n + 1)], E[(n + 1, n + 2)]),
                (E[(n + 1, n + 2)], E[(n + 1, n + 2)], E[(n, n + 1)]),
                (E[(n + 1, n)], E[(n + 1, n)], E[(n + 2, n + 1)]),
                (E[(n + 2, n + 1)], E[(n + 2, n + 1)], E[(n + 1, n)]),
            ]
            for a, b, c in nests:
                inner = commutator(b, c)
                outer = commutator(a, inner)
                for f, p, _ in trials_data:
                    lhs = outer(f)(p)
                    scale = [a(inner(f))(p), inner(a(f))(p), f(p), 1.0]
                    err = max(err, _rel_error(lhs, 0.0, scale))
        report.add("serre", err, threshold)

        # Full grid with composite generators
        err = 0.0
        for ti, (f, p, applied) in enumerate(trials_data):
            fp = f(p)
            for j in range(1, N + 1):
                for k in range(1, N + 1):
                    for l in range(1, N + 1):
                        for m in range(1, N + 1):
                            ab, ba = comm((j, k), (l, m), f, p, applied)
                            rhs = 0.0j
                            terms = [ab, ba, fp]
                            rhs_keys, rhs_signs = [], []
                            if l == k:
                                rhs_keys.append((j, m))
                                rhs_signs.append(1.0)
                            if j == m:
                                rhs_keys.append((l, k))
                                rhs_signs.append(-1.0)
                            for s, key in zip(rhs_signs, rhs_keys):
                                v = applied[key](p)
                                rhs += s * v
                                terms.append(v)
                            e = _rel_error(ab - ba, rhs, terms)
                            if e > 0.25 * threshold:
                                e = refined_error(ti, (j, k), (l, m),
                                                  rhs_keys, rhs_signs)
                            err = max(err, e)
        report.add("full-grid", err, threshold)
    report.wall_time_s = sw.elapsed
    return report


def check_composite_paths(N: int, hbar: HBar, trials: int = 10,
                          rng: np.random.Generator | None = None,
                          threshold: float = 1e-10) -> SuiteReport:
    """Composite E_jk built through different intermediate indices agree."""
    rng = np.random.default_rng(0) if rng is None else rng
    report = SuiteReport(suite=f"composite-paths N={N}", meta={"hbar": hbar.value})
    with Stopwatch() as sw:
        err = 0.0
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                if abs(j - k) < 2:
                    continue
                lo, hi = min(j, k), max(j, k)
                default = generator(j, k, N, hbar)
                for via in range(lo + 1, hi):
                    alt = generator(j, k, N, hbar, via=via)
                    for _ in range(trials):
                        f = CachedGzFunction(random_polynomial(N, rng))
                        p = _pattern_with_top(N, rng, hbar)
                        a = default(f)(p)
                        b = alt(f)(p)
                        err = max(err, _rel_error(a, b, [a, b, f(p), 1.0]))
        report.add("path-independence", err, threshold)
    report.wall_time_s = sw.elapsed
    return report


def check_whittaker_eigen(kind: str, N: int, hbar: HBar, trials: int = 20,
                          rng: np.random.Generator | None = None,
                          threshold: float = 1e-10,
                          gamma_top=None) -> SuiteReport:
    """Simple-root eigen-equations of the Whittaker vectors.

    ``w_prime``: E_{n+1,n} w' = -(i/hbar) w'; ``w``: E_{n,n+1} w = -(i/hbar) w.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    if gamma_top is None:
        gamma_top = tuple(np.linspace(-1.1, 1.3, N))
    vec = whittaker_vector(kind, N, hbar, gamma_top)
    chi = -1j / hbar.value
    report = SuiteReport(suite=f"whittaker-eigen {kind} N={N}",
                         meta={"hbar": hbar.value, "gamma_top": [str(g) for g in vec.top_row]})
    with Stopwatch() as sw:
        for n in range(1, N):
            op = generator(n + 1, n, N, hbar) if kind == "w_prime" \
                else generator(n, n + 1, N, hbar)
            err = 0.0
            for _ in range(trials):
                p = _pattern_with_top(N, rng, hbar, top_row=vec.top_row)
                lhs = op(vec.function)(p)
                rhs = chi * vec.function(p)
                err = max(err, _rel_error(lhs, rhs, [lhs, rhs]))
            report.add(f"eigen-n{n}", err, threshold)
    report.wall_time_s = sw.elapsed
    return report


def check_sutherland_condition(N: int, hbar: HBar, trials: int = 20,
                               rng: np.random.Generator | None = None,
                               threshold: float = 1e-10,
                               gamma_top=None) -> SuiteReport:
    """(E_{n,n+1} - E_{n+1,n}) annihilates the Sutherland vector."""
    rng = np.random.default_rng(0) if rng is None else rng
    if gamma_top is None:
        gamma_top = tuple(np.linspace(-1.2, 1.0, N))
    vec = sutherland_vector(N, hbar, gamma_top)
    report = SuiteReport(suite=f"sutherland-condition N={N}", meta={"hbar": hbar.value})
    with Stopwatch() as sw:
        for n in range(1, N):
            raise_op = generator(n, n + 1, N, hbar)
            lower_op = generator(n + 1, n, N, hbar)
            err = 0.0
            for _ in range(trials):
                p = _pattern_with_top(N, rng, hbar, top_row=vec.top_row)
                a = raise_op(vec.function)(p)
                b = lower_op(vec.function)(p)
                err = max(err, _rel_error(a, b, [a, b]))
            report.add(f"annihilation-n{n}", err, threshold)
    report.wall_time_s = sw.elapsed
    return report
