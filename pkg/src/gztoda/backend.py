"""Kernel backend selection: numba-jitted loops or pure-numpy vectorization.

The quadrature engines spend nearly all their time filling complex log-gamma
grids, so that kernel exists twice:

* ``numba`` -- :func:`gztoda._lanczos.log_gamma_scalar` compiled with
  ``@njit`` and applied in a ``prange`` loop;
* ``numpy`` -- the same Lanczos formula vectorized with numpy masks.

The active backend is chosen by the ``GZTODA_BACKEND`` environment variable
(``"numba"`` or ``"numpy"``); the default is numba when it imports, numpy
otherwise.  ``GZTODA_WORKERS`` (or :func:`set_workers`) bounds the numba
thread count.  Both paths reduce with ordinary ordered numpy sums, so results
do not depend on the worker count.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _lanczos
from .errors import ConfigurationError

BACKEND_ENV = "GZTODA_BACKEND"
WORKERS_ENV = "GZTODA_WORKERS"

try:  # pragma: no cover - exercised via test_backends
    import numba

    # TBB/OpenMP probing is noisy in minimal containers; workqueue is enough
    numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_active: str | None = None

if HAVE_NUMBA:
    _lg_scalar_jit = numba.njit("complex128(complex128)", cache=True)(
        _lanczos.log_gamma_scalar
    )

    @numba.njit("complex128[:](complex128[:])", parallel=True, cache=True)
    def _lg_flat_numba(z):  # pragma: no cover - compiled
        out = np.empty_like(z)
        for i in numba.prange(z.shape[0]):
            out[i] = _lg_scalar_jit(z[i])
        return out

    @numba.njit("complex128[:,:](complex128[:], complex128[:,:])",
                parallel=True, cache=True)
    def _pair_contract_numba(a, kt):  # pragma: no cover - compiled
        # kt is K transposed: kt[k, j];  T[k, l] = sum_j a[j] kt[k, j] kt[l, j]
        m = kt.shape[0]
        n = kt.shape[1]
        out = np.empty((m, m), dtype=np.complex128)
        for k in numba.prange(m):
            row = a * kt[k]
            for l in range(m):
                acc = 0.0 + 0.0j
                for j in range(n):
                    acc += row[j] * kt[l, j]
                out[k, l] = acc
        return out


_C = np.asarray(_lanczos.LANCZOS_COEFFS)


def _log_sin_pi_numpy(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    small = np.abs(z.imag) < 12.0
    if small.any():
        with np.errstate(divide="ignore", invalid="ignore"):
            # the lattice zeros are pole positions, overwritten by the caller
            out[small] = np.log(np.sin(np.pi * z[small]))
    big = ~small
    if big.any():
        w = np.where(z[big].imag > 0.0, z[big], np.conj(z[big]))
        s = (
            -1j * np.pi * w
            + complex(-math.log(2.0), 0.5 * np.pi)
            + np.log1p(-np.exp(2j * np.pi * w))
        )
        out[big] = np.where(z[big].imag > 0.0, s, np.conj(s))
    return out


def _lg_flat_numpy(z: np.ndarray) -> np.ndarray:
    refl = z.real < 0.5
    zz = np.where(refl, 1.0 - z, z) - 1.0
    acc = np.full_like(z, _C[0])
    for i in range(1, 9):
        acc += _C[i] / (zz + i)
    t = zz + _lanczos.LANCZOS_G + 0.5
    out = 0.9189385332046727417803297364056176 + (zz + 0.5) * np.log(t) - t + np.log(acc)
    if refl.any():
        out[refl] = (
            1.1447298858494001741434273513530587
            - _log_sin_pi_numpy(z[refl])
            - out[refl]
        )
    poles = (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.floor(z.real))
    if poles.any():
        out[poles] = complex(np.inf, 0.0)
    return out


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def active_backend() -> str:
    """Resolve the backend currently in force."""
    global _active
    if _active is None:
        want = os.environ.get(BACKEND_ENV, "").strip().lower()
        if want:
            set_backend(want)
        else:
            _active = "numba" if HAVE_NUMBA else "numpy"
    return _active


def set_backend(name: str) -> None:
    """Force a backend (mainly for tests and benchmarks)."""
    global _active
    name = name.lower()
    if name not in ("numba", "numpy"):
        raise ConfigurationError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ConfigurationError("numba backend requested but numba is not importable")
    _active = name


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV, "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def set_workers(n: int) -> None:
    """Bound the numba thread pool; no-op on the numpy path."""
    if HAVE_NUMBA:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def log_gamma_grid(z: np.ndarray) -> np.ndarray:
    """Elementwise principal log-gamma on an arbitrary-shape complex array.

    Poles map to ``+inf`` (so ``exp(-log_gamma_grid(...))`` is an exact zero
    for reciprocal factors); nothing raises here.
    """
    z = np.asarray(z, dtype=np.complex128)
    shape = z.shape
    flat = np.ascontiguousarray(z).reshape(-1)
    if active_backend() == "numba":
        return _lg_flat_numba(flat).reshape(shape)
    return _lg_flat_numpy(flat).reshape(shape)


def pair_contract(a: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """T[k, l] = sum_j a[j] kernel[j, k] kernel[j, l].

    The inner contraction of the two-level product-grid quadrature.  The
    numba path sums each output element in fixed j order (bit-stable for any
    thread count); the numpy path delegates to matmul.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    kernel = np.ascontiguousarray(kernel, dtype=np.complex128)
    if active_backend() == "numba":
        kt = np.ascontiguousarray(kernel.T)
        return _pair_contract_numba(a, kt)
    return (kernel * a[:, None]).T @ kernel
