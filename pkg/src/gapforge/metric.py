"""Spectra of equilateral metric graphs with Kirchhoff vertex conditions.

Away from the Dirichlet set ``{(j pi / l0)^2 : j >= 1}``, ``lam`` is a metric
eigenvalue exactly when ``1 - cos(l0 sqrt(lam))`` is an eigenvalue of the
normalized discrete Laplacian.  We solve that relation in closed form,
branch by branch.

Length scaling multiplies every eigenvalue by ``tau**-2``.  Reports keep
their unscaled data together with an exact rational scale factor, so chained
rescalings agree bit-for-bit with a single rescaling by the product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .eig import Spectrum

EXCEPTIONAL_ATOL = 1e-9


def _scaled(x: float, factor: Fraction) -> float:
    if factor == 1:
        return x
    return float(Fraction(x) / (factor * factor))


@dataclass(frozen=True)
class MetricEigenvalue:
    value: float
    mu: float
    branch: int
    multiplicity: int


@dataclass(frozen=True)
class GapInterval:
    lower: float
    upper: float
    factor: Fraction = field(default=Fraction(1), repr=False)

    def __post_init__(self):
        if not self.upper > self.lower:
            raise ValueError(f"gap needs upper > lower, got ({self.lower}, {self.upper})")

    @property
    def a(self) -> float:
        return _scaled(self.lower, self.factor)

    @property
    def b(self) -> float:
        return _scaled(self.upper, self.factor)

    @property
    def width(self) -> float:
        return self.b - self.a

    def contains(self, x: float) -> bool:
        return self.a < x < self.b

    def as_tuple(self) -> tuple[float, float]:
        return (self.a, self.b)


@dataclass(frozen=True)
class MetricSpectrumReport:
    """Eigenvalues of an equilateral metric graph in the window ``[0, window]``.

    ``eigenvalues`` lists the nonzero ones off the Dirichlet set, each with
    the discrete eigenvalue ``mu`` and branch index it came from; the
    Dirichlet points in the window are listed separately, multiplicity
    unresolved.
    """

    base_length: float
    base_window: float
    base_eigenvalues: tuple[MetricEigenvalue, ...]
    base_exceptional: tuple[float, ...]
    zero_mode: int = 1
    factor: Fraction = Fraction(1)

    @property
    def edge_length(self) -> float:
        return float(Fraction(self.base_length) * self.factor)

    @property
    def window(self) -> float:
        return _scaled(self.base_window, self.factor)

    @property
    def eigenvalues(self) -> tuple[MetricEigenvalue, ...]:
        if self.factor == 1:
            return self.base_eigenvalues
        return tuple(replace(e, value=_scaled(e.value, self.factor))
                     for e in self.base_eigenvalues)

    @property
    def exceptional_points(self) -> tuple[float, ...]:
        return tuple(_scaled(x, self.factor) for x in self.base_exceptional)

    def values(self, with_multiplicity: bool = True) -> np.ndarray:
        eigs = self.eigenvalues
        if with_multiplicity:
            return np.repeat([e.value for e in eigs], [e.multiplicity for e in eigs])
        return np.array([e.value for e in eigs])


def _branch_phase(theta: float, branch: int) -> float:
    # branch 0: theta, 1: 2pi - theta, 2: 2pi + theta, 3: 4pi - theta, ...
    j = (branch + 1) // 2
    return 2.0 * math.pi * j + (theta if branch % 2 == 0 else -theta)


def dirichlet_points(edge_length: float, window: float) -> tuple[float, ...]:
    out = []
    j = 1
    while (j * math.pi / edge_length) ** 2 <= window:
        out.append((j * math.pi / edge_length) ** 2)
        j += 1
    return tuple(out)


def metric_spectrum(discrete: Spectrum, edge_length: float, window: float,
                    mu_atol: float = 1e-9) -> MetricSpectrumReport:
    """Metric-graph eigenvalues in ``[0, window]`` from a discrete Laplacian spectrum.

    Each discrete eigenvalue ``mu`` yields ``l0 sqrt(lam) = +-arccos(1 - mu) + 2 pi m``;
    multiplicity is inherited from ``mu`` on every branch.
    """
    if edge_length <= 0 or window <= 0:
        raise ValueError("edge length and window must be positive")
    exceptional = dirichlet_points(edge_length, window)
    phase_max = edge_length * math.sqrt(window) + 2.0 * math.pi
    found: list[MetricEigenvalue] = []
    for mu, mult in discrete.items():
        if mu < -mu_atol or mu > 2.0 + mu_atol:
            raise ValueError(f"discrete eigenvalue {mu} outside [0, 2]")
        mu = min(max(mu, 0.0), 2.0)
        theta = math.acos(1.0 - mu)
        branch = 0
        while True:
            phase = _branch_phase(theta, branch)
            if phase > phase_max:
                break
            lam = (phase / edge_length) ** 2
            if phase > 0 and lam <= window and not _near_any(lam, exceptional):
                if not _is_dirichlet_phase(phase):
                    found.append(MetricEigenvalue(lam, mu, branch, mult))
            branch += 1
    found.sort(key=lambda e: (e.value, e.branch, e.mu))
    return MetricSpectrumReport(float(edge_length), float(window), tuple(found), exceptional)


def _is_dirichlet_phase(phase: float) -> bool:
    ratio = phase / math.pi
    return abs(ratio - round(ratio)) <= EXCEPTIONAL_ATOL and round(ratio) >= 1


def _near_any(lam: float, points: Sequence[float]) -> bool:
    return any(abs(lam - p) <= EXCEPTIONAL_ATOL * max(1.0, p) for p in points)


def ramanujan_metric_gap(k: int, edge_length: float = 1.0) -> GapInterval:
    """The bottom gap ``(0, h_k / l0^2)`` with ``h_k = arccos^2(1 - 2 sqrt(k-1)/k)``."""
    if k < 3:
        raise ValueError("degree must be at least 3")
    if edge_length <= 0:
        raise ValueError("edge length must be positive")
    h = math.acos(1.0 - 2.0 * math.sqrt(k - 1) / k) ** 2
    return GapInterval(0.0, h / edge_length ** 2)


def certified_ramanujan_gap(k: int, edge_length: float = 1.0) -> GapInterval:
    """Bottom gap implied by ``mu >= 1 - 2 sqrt(k-1)/k``: ``arccos^2(2 sqrt(k-1)/k) / l0^2``.

    This is the largest interval ``(0, b)`` free of metric spectrum for every
    k-regular Ramanujan graph; it is smaller than :func:`ramanujan_metric_gap`.
    """
    if k < 3:
        raise ValueError("degree must be at least 3")
    if edge_length <= 0:
        raise ValueError("edge length must be positive")
    h = math.acos(2.0 * math.sqrt(k - 1) / k) ** 2
    return GapInterval(0.0, h / edge_length ** 2)


def scale_lengths(obj, tau: float):
    """Rescale all edge lengths by ``tau``: eigenvalues get multiplied by ``tau**-2``.

    Accepts a :class:`MetricSpectrumReport`, a :class:`GapInterval`, a float
    or a sequence of floats.
    """
    if not tau > 0:
        raise ValueError("scale factor must be positive")
    t = Fraction(tau)
    if isinstance(obj, MetricSpectrumReport):
        return replace(obj, factor=obj.factor * t)
    if isinstance(obj, GapInterval):
        return replace(obj, factor=obj.factor * t)
    if np.isscalar(obj):
        return _scaled(float(obj), t)
    return np.array([_scaled(float(x), t) for x in obj])


def find_gaps(report: MetricSpectrumReport, min_width: float = 0.0) -> list[GapInterval]:
    """Maximal open intervals in ``[0, window]`` free of eigenvalues and Dirichlet points."""
    points = sorted({0.0, *report.values(with_multiplicity=False).tolist(),
                     *report.exceptional_points})
    window = report.window
    bounds = [p for p in points if p <= window] + [window]
    gaps = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        if b > a and b - a >= min_width:
            gaps.append(GapInterval(a, b))
    return gaps
