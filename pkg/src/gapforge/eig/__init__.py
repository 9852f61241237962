"""Dense symmetric eigendecomposition and eigenvalue grouping.

The Jacobi kernel is compiled with Cython when available.  Set
``GAPFORGE_KERNEL=python`` to force the numpy fallback, ``compiled`` to
require the extension.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _jacobi_py

try:
    from . import _jacobi as _jacobi_c
except ImportError:  # extension not built
    _jacobi_c = None

DEFAULT_TOL = 1e-9


def _pick_backend() -> str:
    choice = os.environ.get("GAPFORGE_KERNEL", "auto").lower()
    if choice == "python":
        return "python"
    if choice == "compiled":
        if _jacobi_c is None:
            raise ImportError("GAPFORGE_KERNEL=compiled but gapforge.eig._jacobi is not built")
        return "compiled"
    return "compiled" if _jacobi_c is not None else "python"


BACKEND = _pick_backend()


class EigenError(ValueError):
    pass


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int


@dataclass(frozen=True)
class Spectrum:
    """Grouped eigenvalues: ascending ``values`` with ``multiplicities``."""

    values: tuple[float, ...]
    multiplicities: tuple[int, ...]
    tolerance: float = DEFAULT_TOL

    def __len__(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> np.ndarray:
        return np.repeat(np.asarray(self.values, dtype=float), self.multiplicities)

    def items(self):
        return zip(self.values, self.multiplicities)

    def without(self, targets: Sequence[float], atol: float = DEFAULT_TOL) -> "Spectrum":
        """Drop groups lying within ``atol`` of any target value."""
        keep = [(v, m) for v, m in self.items()
                if all(abs(v - t) > atol for t in targets)]
        return Spectrum(tuple(v for v, _ in keep), tuple(m for _, m in keep), self.tolerance)

    def multiplicity_of(self, value: float, atol: float = DEFAULT_TOL) -> int:
        return sum(m for v, m in self.items() if abs(v - value) <= atol)


def _as_array(m) -> np.ndarray:
    arr = getattr(m, "entries", m)
    return np.asarray(arr, dtype=float)


def eigensolve_symmetric(m, backend: str | None = None) -> EigenResult:
    """Ascending eigenvalues and orthonormal eigenvectors (columns).

    Output is deterministic: ties keep solver order and each eigenvector is
    signed so its largest-magnitude entry is positive.
    """
    a = _as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise EigenError(f"square matrix required, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise EigenError("empty matrix")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > 1e-10 * scale:
        raise EigenError("matrix is not symmetric")
    if not np.all(np.isfinite(a)):
        raise EigenError("matrix has non-finite entries")
    a = 0.5 * (a + a.T)

    backend = backend or BACKEND
    if backend == "compiled":
        if _jacobi_c is None:
            raise EigenError("compiled kernel unavailable")
        d, v, sweeps = _jacobi_c.jacobi(np.ascontiguousarray(a))
    elif backend == "python":
        d, v, sweeps = _jacobi_py.jacobi(a)
    else:
        raise EigenError(f"unknown backend {backend!r}")

    order = np.argsort(d, kind="stable")
    d = np.asarray(d)[order]
    v = np.asarray(v)[:, order]
    pivots = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivots, np.arange(n)])
    signs[signs == 0] = 1.0
    return EigenResult(d, v * signs, int(sweeps))


def eigvals(m, backend: str | None = None) -> np.ndarray:
    return eigensolve_symmetric(m, backend).values


def group_spectrum(raw: Sequence[float], tol: float = DEFAULT_TOL) -> Spectrum:
    """Chain-group sorted eigenvalues whose gap is ``<= tol * max(1, |value|)``."""
    if tol <= 0:
        raise EigenError("grouping tolerance must be positive")
    raw = np.asarray(raw, dtype=float)
    if raw.size == 0:
        return Spectrum((), (), tol)
    if np.any(np.diff(raw) < 0):
        raise EigenError("raw eigenvalues must be sorted ascending")
    groups: list[list[float]] = [[raw[0]]]
    for prev, x in zip(raw[:-1], raw[1:]):
        if x - prev <= tol * max(1.0, abs(prev), abs(x)):
            groups[-1].append(x)
        else:
            groups.append([x])
    return Spectrum(tuple(float(np.mean(g)) for g in groups),
                    tuple(len(g) for g in groups), tol)


def spectrum_of(m, tol: float = DEFAULT_TOL, backend: str | None = None) -> Spectrum:
    return group_spectrum(eigvals(m, backend), tol)
