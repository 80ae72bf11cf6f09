"""Gelfand-Zetlin patterns, the function space they act on, and the operator calculus.

A pattern is a triangular array ``gamma[n][j]`` (1 <= j <= n <= N) of complex
values; the top row is a fixed spectral label and the lower N-1 rows are free
variables.  Functions on patterns are plain callables wrapped in
:class:`GzFunction`; operators are function transformers wrapped in
:class:`GzOperator`.  All identity checking in this package is pointwise:
operators are compared by applying both sides to test functions at random
off-singular points.

Entries may be numpy arrays (broadcasting evaluators), which is what the
quadrature engines rely on; scalar entries get finiteness validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigurationError, SingularityError

Entry = complex  # or np.ndarray in broadcast evaluation


@dataclass(frozen=True)
class HBar:
    """Positive deformation parameter; every operator closure captures one."""

    value: float = 1.0

    def __post_init__(self):
        v = float(self.value)
        if not (v > 0.0 and np.isfinite(v)):
            raise ConfigurationError(f"hbar must be positive and finite, got {self.value}")
        object.__setattr__(self, "value", v)


class GzPattern:
    """Immutable triangular array; ``row(n)`` is 1-indexed and has n entries."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        for n, r in enumerate(rows, start=1):
            if len(r) != n:
                raise ConfigurationError(f"row {n} must have {n} entries, got {len(r)}")
            for v in r:
                if np.isscalar(v) and not np.all(np.isfinite(complex(v))):
                    raise ConfigurationError(f"non-finite entry in row {n}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    @property
    def n_levels(self) -> int:
        return len(self.rows)

    def row(self, n: int):
        return self.rows[n - 1]

    def entry(self, n: int, j: int):
        return self.rows[n - 1][j - 1]

    def shifted(self, n: int, j: int, delta) -> "GzPattern":
        """New pattern with ``delta`` added to entry (n, j)."""
        rows = self.rows
        r = rows[n - 1]
        newrow = r[:j - 1] + (r[j - 1] + delta,) + r[j:]
        p = object.__new__(GzPattern)
        object.__setattr__(p, "rows", rows[:n - 1] + (newrow,) + rows[n:])
        object.__setattr__(p, "_hash", None)
        return p

    def free_values(self):
        """Entries of the lower N-1 rows, level by level."""
        out = []
        for r in self.rows[:-1]:
            out.extend(r)
        return out

    def __eq__(self, other):
        return isinstance(other, GzPattern) and self.rows == other.rows

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.rows)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"GzPattern({self.rows!r})"


def free_variable_order(n_levels: int) -> list[tuple[int, int]]:
    """Canonical (level, index) ordering of the free variables."""
    return [(n, j) for n in range(1, n_levels) for j in range(1, n + 1)]


def pattern_as_longdouble(pattern: GzPattern) -> GzPattern:
    """Copy with extended-precision scalar entries.

    Deeply composed shift operators lose ~6-7 digits of the double mantissa
    to Vandermonde cancellation; relation residuals near a tight threshold
    are re-measured on a long-double pattern (all closure arithmetic
    promotes through numpy scalar types)."""
    rows = tuple(tuple(np.clongdouble(v) for v in r) for r in pattern.rows)
    p = object.__new__(GzPattern)
    object.__setattr__(p, "rows", rows)
    object.__setattr__(p, "_hash", None)
    return p


class GzFunction:
    """A function of the free rows of a pattern.

    The evaluator receives the full :class:`GzPattern` (free rows plus the
    fixed top row) and must be deterministic and broadcast-friendly.
    """

    __slots__ = ("n_levels", "evaluator", "label", "top_row")

    def __init__(self, n_levels: int, evaluator: Callable[[GzPattern], Entry],
                 label: str = "f", top_row=None):
        self.n_levels = int(n_levels)
        self.evaluator = evaluator
        self.label = label
        self.top_row = None if top_row is None else tuple(top_row)

    def __call__(self, pattern: GzPattern):
        return self.evaluator(pattern)

    def __repr__(self):
        return f"<GzFunction {self.label} N={self.n_levels}>"


class CachedGzFunction(GzFunction):
    """Memoizing wrapper keyed on the pattern rows (scalar entries only).

    Relation suites evaluate deeply composed operators whose leaves revisit
    the same integer-shifted points; caching the wrapped function makes the
    full gl(N) relation grid cheap.
    """

    __slots__ = ("_base", "_cache")

    def __init__(self, base: GzFunction):
        self._base = base
        self._cache: dict = {}
        super().__init__(base.n_levels, self._eval, label=f"cached({base.label})",
                         top_row=base.top_row)

    def _eval(self, pattern: GzPattern):
        hit = self._cache.get(pattern)
        if hit is None:
            hit = self._base(pattern)
            self._cache[pattern] = hit
        return hit


_APPLY_CACHE: dict | None = None


class applied_cache:
    """Context memoizing every operator application by (operator, function).

    Inside the context, ``op(f)`` returns one shared, point-cached function
    per pair, so relation suites that revisit the same composite subtrees
    (E_25 inside E_15, and so on) collapse to single evaluations.  Strong
    references to both members of each pair keep the id-based keys valid.
    """

    def __enter__(self):
        global _APPLY_CACHE
        self._prev = _APPLY_CACHE
        _APPLY_CACHE = {}
        return _APPLY_CACHE

    def __exit__(self, *exc):
        global _APPLY_CACHE
        _APPLY_CACHE = self._prev
        return False


class GzOperator:
    """Linear transformer of :class:`GzFunction` values.

    ``apply_fn(f) -> GzFunction`` must act linearly; linearity is asserted
    numerically in the test suite rather than by construction.
    """

    __slots__ = ("n_levels", "hbar", "apply_fn", "label")

    def __init__(self, n_levels: int, hbar: HBar, apply_fn, label: str = "op"):
        self.n_levels = int(n_levels)
        self.hbar = hbar
        self.apply_fn = apply_fn
        self.label = label

    def __call__(self, f: GzFunction) -> GzFunction:
        if f.n_levels != self.n_levels:
            raise ConfigurationError(
                f"operator on N={self.n_levels} applied to function on N={f.n_levels}"
            )
        cache = _APPLY_CACHE
        if cache is None:
            out = self.apply_fn(f)
            out.label = f"{self.label}[{f.label}]"
            return out
        key = (id(self), id(f))
        hit = cache.get(key)
        if hit is not None:
            return hit[2]
        out = CachedGzFunction(self.apply_fn(f))
        cache[key] = (self, f, out)
        return out

    def __add__(self, other: "GzOperator") -> "GzOperator":
        _check_compatible(self, other)

        def apply(f, a=self, b=other):
            fa, fb = a(f), b(f)
            return GzFunction(f.n_levels, lambda p: fa(p) + fb(p))

        return GzOperator(self.n_levels, self.hbar, apply, f"({self.label}+{other.label})")

    def __sub__(self, other: "GzOperator") -> "GzOperator":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "GzOperator":
        c = complex(scalar)

        def apply(f, a=self):
            fa = a(f)
            return GzFunction(f.n_levels, lambda p: c * fa(p))

        return GzOperator(self.n_levels, self.hbar, apply, f"({scalar}*{self.label})")

    def __repr__(self):
        return f"<GzOperator {self.label} N={self.n_levels}>"


def _check_compatible(a: GzOperator, b: GzOperator) -> None:
    if a.n_levels != b.n_levels or a.hbar.value != b.hbar.value:
        raise ConfigurationError(
            f"operators disagree: (N={a.n_levels}, hbar={a.hbar.value}) vs "
            f"(N={b.n_levels}, hbar={b.hbar.value})"
        )


def identity_operator(n_levels: int, hbar: HBar) -> GzOperator:
    return GzOperator(n_levels, hbar, lambda f: GzFunction(f.n_levels, f.evaluator), "Id")


def zero_operator(n_levels: int, hbar: HBar) -> GzOperator:
    return GzOperator(n_levels, hbar, lambda f: GzFunction(f.n_levels, lambda p: 0.0j), "0")


def multiplication_operator(n_levels: int, hbar: HBar, factor, label: str = "mult") -> GzOperator:
    """Operator multiplying by ``factor(pattern)``."""

    def apply(f):
        return GzFunction(f.n_levels, lambda p: factor(p) * f(p))

    return GzOperator(n_levels, hbar, apply, label)


def compose(a: GzOperator, b: GzOperator) -> GzOperator:
    """(a o b)(f) = a(b(f))."""
    _check_compatible(a, b)

    def apply(f):
        return a(b(f))

    return GzOperator(a.n_levels, a.hbar, apply, f"({a.label}o{b.label})")


def commutator(a: GzOperator, b: GzOperator) -> GzOperator:
    """a o b - b o a."""
    return compose(a, b) - compose(b, a)


def eval_shifted(f: GzFunction, pattern: GzPattern,
                 shifts: Mapping[tuple[int, int], int], hbar: HBar):
    """Evaluate f with entry (n, j) moved to gamma_nj + shifts[(n, j)] * i*hbar.

    Shift -1 realizes exp(-i hbar d/d gamma); only free rows (n < N) may be
    shifted.  Raises :class:`SingularityError` when the shifted point lands
    exactly on a same-level coincidence.
    """
    p = pattern
    for (n, j), k in shifts.items():
        if not 1 <= n < pattern.n_levels:
            raise ConfigurationError(f"shift level {n} is not a free row")
        if not 1 <= j <= n:
            raise ConfigurationError(f"shift index ({n},{j}) out of range")
        if k:
            p = p.shifted(n, j, 1j * hbar.value * k)
    for n in range(1, p.n_levels):
        row = p.row(n)
        if all(np.isscalar(v) for v in row):
            for s in range(len(row)):
                for t in range(s + 1, len(row)):
                    if complex(row[s]) == complex(row[t]):
                        raise SingularityError(
                            f"shifted point has gamma_{n}{s+1} == gamma_{n}{t+1}"
                        )
    return f(p)


class PatternPolynomial(GzFunction):
    """Multivariate polynomial in the free variables, stored as (coeffs, exponents)."""

    __slots__ = ("coefficients", "exponents", "_order")

    def __init__(self, n_levels: int, coefficients, exponents, label: str = "poly"):
        self.coefficients = np.asarray(coefficients, dtype=np.complex128)
        self.exponents = np.asarray(exponents, dtype=np.int64)
        self._order = free_variable_order(n_levels)
        if self.exponents.shape != (self.coefficients.size, len(self._order)):
            raise ConfigurationError("exponent table shape mismatch")
        super().__init__(n_levels, self._eval, label=label)

    def _eval(self, pattern: GzPattern):
        vals = [pattern.entry(n, j) for (n, j) in self._order]
        if all(np.isscalar(v) for v in vals):
            # no complex() cast: extended-precision scalars must propagate
            total = 0.0j
            for c, row in zip(self.coefficients, self.exponents):
                m = c
                for v, e in zip(vals, row):
                    if e:
                        m = m * v ** int(e)
                total = total + m
            return total
        total = None
        for c, row in zip(self.coefficients, self.exponents):
            m = c * np.ones(1, dtype=np.complex128)
            for v, e in zip(vals, row):
                if e:
                    m = m * np.asarray(v) ** int(e)
            total = m if total is None else total + m
        return total


def random_polynomial(n_levels: int, rng: np.random.Generator,
                      max_degree: int = 4, n_terms: int = 8) -> PatternPolynomial:
    """Random complex-coefficient polynomial of total degree <= max_degree."""
    n_vars = len(free_variable_order(n_levels))
    exps = []
    seen = set()
    guard = 0
    while len(exps) < n_terms and guard < 50 * n_terms:
        guard += 1
        row = rng.integers(0, max_degree + 1, size=n_vars)
        while row.sum() > max_degree:
            k = int(rng.integers(0, n_vars))
            if row[k] > 0:
                row[k] -= 1
        key = tuple(int(e) for e in row)
        if key not in seen:
            seen.add(key)
            exps.append(key)
    coeffs = rng.normal(size=len(exps)) + 1j * rng.normal(size=len(exps))
    return PatternPolynomial(n_levels, coeffs, np.asarray(exps), label="rand-poly")


def random_pattern(n_levels: int, rng: np.random.Generator, hbar: HBar | None = None,
                   top_row=None, re_scale: float = 3.0, im_scale: float = 1.0,
                   min_separation: float = 0.25) -> GzPattern:
    """Random pattern with |Re| <= re_scale, |Im| <= im_scale and pairwise
    same-level separation >= min_separation (conditions the Vandermonde
    denominators in the shift operators; deep composite chains lose ~6
    digits to cancellation already at separation 0.1)."""
    rows = []
    for n in range(1, n_levels + 1):
        if n == n_levels and top_row is not None:
            rows.append(tuple(complex(v) for v in top_row))
            continue
        for _ in range(1000):
            cand = rng.uniform(-re_scale, re_scale, n) + 1j * rng.uniform(-im_scale, im_scale, n)
            ok = all(
                abs(cand[s] - cand[t]) >= min_separation
                for s in range(n) for t in range(s + 1, n)
            )
            if ok:
                rows.append(tuple(cand))
                break
        else:  # pragma: no cover
            raise ConfigurationError("could not sample a separated pattern row")
    return GzPattern(rows)
