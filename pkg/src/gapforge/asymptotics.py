"""Asymptotic regimes for shrinking graph-like manifolds.

Two parametrizations are covered:

* a single manifold whose edge length follows the radius, ``l = eps**gamma``;
* a family over graphs with ``nu`` vertices, ``eps = nu**-alpha`` and
  ``l = nu**-beta``.

All outputs are exponents.  The hidden constants of the two-sided estimates
are not estimated.  Convention: for ``gamma`` regimes an exponent ``x``
means ``~ eps**x``; for ``(alpha, beta)`` regimes it means ``~ nu**x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Branch:
    quantity: str
    branch: str
    exponent: float | None


# ----------------------------------------------------------------------------
# single manifold, l = eps**gamma

@dataclass(frozen=True)
class GammaRegimeReport:
    gamma: float
    n: int
    function_behavior: str
    function_exponent: float
    form_divergence_exponent: float | None
    volume_exponent: float
    valid: dict
    branches: tuple[Branch, ...]
    boundaries: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["branches"] = [b.__dict__ for b in self.branches]
        d["boundaries"] = list(self.boundaries)
        return d


def classify_gamma(gamma: float, n: int) -> GammaRegimeReport:
    """Function, exact-form and volume exponents (in eps) for ``l = eps**gamma``."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    branches: list[Branch] = []
    boundaries: list[str] = []

    if -0.25 < gamma < 0.5:
        behaviour, f_exp = "converges-with-rate", -2.0 * gamma
        branches.append(Branch("function", "-1/4 < gamma < 1/2: eigenvalue ~ eps^(-2 gamma)", f_exp))
    else:
        behaviour, f_exp = "bounded-by-eps^1/2", 0.5
        branches.append(Branch("function", "gamma <= -1/4 or gamma >= 1/2: bound eps^(1/2)", f_exp))
    if gamma == -0.25:
        boundaries.append("gamma = -1/4")
        branches.append(Branch("function", "boundary: rate branch", -2.0 * gamma))

    if gamma < 1:
        form = -2.0
        branches.append(Branch("form", "gamma <= 1: eps^-2", form))
    elif gamma < 2:
        form = -4.0 + 2.0 * gamma
        branches.append(Branch("form", "1 <= gamma < 2: eps^(-4 + 2 gamma)", form))
    else:
        form = None
        branches.append(Branch("form", "gamma >= 2: divergence not guaranteed", None))
    if gamma == 1:
        boundaries.append("gamma = 1")
        branches.append(Branch("form", "boundary: gamma <= 1 branch", -2.0))

    if gamma < 1:
        vol = n - 1 + gamma
        branches.append(Branch("volume", "gamma <= 1: edge term eps^(n-1+gamma)", vol))
    else:
        vol = float(n)
        branches.append(Branch("volume", "gamma >= 1: vertex term eps^n", vol))
    if gamma == 1:
        branches.append(Branch("volume", "boundary: edge term branch", n - 1 + gamma))

    valid = {
        "function_closeness": gamma < 0.5,
        "function_dominates_error": gamma > -0.25,
        "form_divergence": gamma < 2,
        "edge_ratio_bounded": gamma <= 1,
    }
    return GammaRegimeReport(gamma, n, behaviour, f_exp, form, float(vol), valid,
                             tuple(branches), tuple(boundaries))


# ----------------------------------------------------------------------------
# families, eps = nu**-alpha, l = nu**-beta

def function_converges(alpha, beta):
    return np.maximum(beta, 0.0) < alpha / 2.0


def function_rate_region(alpha, beta):
    """Where the function eigenvalue follows the metric graph, ``~ nu**(2 beta)``."""
    beta = np.asarray(beta, dtype=float)
    return ((beta >= -alpha / 2.0) & (beta >= 0)) | ((beta >= -alpha / 4.0) & (beta <= 0))


def function_eigenvalue_exponent(alpha, beta):
    return np.where(function_rate_region(alpha, beta), 2.0 * np.asarray(beta, float),
                    -np.asarray(alpha, float) / 2.0)


def form_exponent(alpha, beta):
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    return np.where(alpha >= beta, 2.0 * alpha - 1.0, 4.0 * alpha - 2.0 * beta - 1.0)


def volume_exponent(alpha, beta, n):
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    return np.where(alpha >= beta, -(n - 1) * alpha - beta + 1.0, -n * alpha + 1.0)


def rescaled_function_exponent(alpha, beta, n):
    return 2.0 / n - 2.0 * (1.0 - 1.0 / n) * (np.asarray(alpha, float) - np.asarray(beta, float))


def rescaled_form_exponent(alpha, beta, n):
    """Form exponent after rescaling to unit volume: form + (2/n) * volume.

    On ``alpha >= beta`` this is ``2 (alpha - beta + 1)/n - 1``.
    """
    return form_exponent(alpha, beta) + 2.0 / n * volume_exponent(alpha, beta, n)


def ramanujan_gap_exponent(alpha, beta):
    return np.minimum(2.0 * np.asarray(beta, float), 2.0 * np.asarray(alpha, float) - 1.0)


def region_flags(alpha, beta, n: int) -> dict[str, np.ndarray]:
    """Boolean region predicates, vectorized over ``alpha`` and ``beta``."""
    alpha = np.asarray(alpha, float)
    beta = np.asarray(beta, float)
    conv = function_converges(alpha, beta)
    f_exp = function_eigenvalue_exponent(alpha, beta)
    forms = form_exponent(alpha, beta) > 0
    strict_rate = ((beta > -alpha / 2) & (beta >= 0)) | ((beta > -alpha / 4) & (beta <= 0))
    return {
        "function_converges": conv,
        "function_rate": function_rate_region(alpha, beta),
        "forms_diverge": forms,
        "all_diverge": (alpha > 0.5) & (beta >= 0) & (beta < alpha / 2),
        "forms_diverge_functions_vanish": forms & (f_exp < 0),
        "function_converges_forms_diverge": conv & forms,
        "volume_shrinks": volume_exponent(alpha, beta, n) < 0,
        "rescaled_function_diverges": conv & strict_rate
                                      & (rescaled_function_exponent(alpha, beta, n) > 0),
        "rescaled_form_diverges": (n >= 3) & (alpha >= beta)
                                  & (rescaled_form_exponent(alpha, beta, n) > 0),
    }


@dataclass(frozen=True)
class AlphaBetaRegimeReport:
    alpha: float
    beta: float
    n: int
    function_converges: bool
    function_eigenvalue_exponent: float
    function_branch: str
    form_exponent: float
    form_branch: str
    form_diverges: bool
    volume_exponent: float
    rescaled_function_exponent: float
    rescaled_form_exponent: float
    gap_exponent: float
    regions: dict
    branches: tuple[Branch, ...]
    boundaries: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["branches"] = [b.__dict__ for b in self.branches]
        d["boundaries"] = list(self.boundaries)
        return d


def classify_alpha_beta(alpha: float, beta: float, n: int) -> AlphaBetaRegimeReport:
    """Evaluate every family exponent at ``(alpha, beta)``.

    At a branch boundary both branch values are listed in ``branches`` and the
    boundary is named in ``boundaries``.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    a, b = float(alpha), float(beta)
    branches: list[Branch] = []
    boundaries: list[str] = []

    rate = bool(function_rate_region(a, b))
    f_exp = float(function_eigenvalue_exponent(a, b))
    f_branch = "rate: ~ nu^(2 beta) lambda_j(X0)" if rate else "bound-only: <~ nu^(-alpha/2)"
    branches.append(Branch("function", f_branch, f_exp))
    if b == -a / 4 or b == -a / 2:
        boundaries.append("function rate boundary")
        branches.append(Branch("function", "boundary: bound-only branch", -a / 2))
    if max(b, 0.0) == a / 2:
        boundaries.append("max(beta, 0) = alpha/2 (closeness boundary)")

    form = float(form_exponent(a, b))
    form_branch = "alpha >= beta: nu^(2 alpha - 1)" if a >= b else \
        "alpha <= beta: nu^(4 alpha - 2 beta - 1)"
    branches.append(Branch("form", form_branch, form))
    vol = float(volume_exponent(a, b, n))
    branches.append(Branch("volume", "alpha >= beta: nu^(-(n-1) alpha - beta + 1)" if a >= b
                           else "alpha <= beta: nu^(-n alpha + 1)", vol))
    if a == b:
        boundaries.append("alpha = beta")
        branches.append(Branch("form", "boundary: alpha <= beta branch", 4 * a - 2 * b - 1))
        branches.append(Branch("volume", "boundary: alpha <= beta branch", -n * a + 1))
    if a == 0.5 and b <= a:
        boundaries.append("alpha = 1/2 (form divergence boundary)")

    rf = float(rescaled_function_exponent(a, b, n))
    rform = float(rescaled_form_exponent(a, b, n))
    branches.append(Branch("rescaled function", "unit volume: 2/n - 2(1 - 1/n)(alpha - beta)", rf))
    branches.append(Branch("rescaled form", "unit volume: form + (2/n) volume", rform))
    flags = {k: bool(v) for k, v in region_flags(a, b, n).items()}
    return AlphaBetaRegimeReport(
        alpha=a, beta=b, n=n,
        function_converges=flags["function_converges"],
        function_eigenvalue_exponent=f_exp,
        function_branch=f_branch,
        form_exponent=form,
        form_branch=form_branch,
        form_diverges=form > 0,
        volume_exponent=vol,
        rescaled_function_exponent=rf,
        rescaled_form_exponent=rform,
        gap_exponent=float(ramanujan_gap_exponent(a, b)),
        regions=flags,
        branches=tuple(branches),
        boundaries=tuple(boundaries),
    )


# ----------------------------------------------------------------------------
# diagram

# Half-plane ``a*alpha + b*beta < c`` (closed when ``strict`` is False).
HalfPlane = tuple[float, float, float]


def region_pieces(n: int) -> dict[str, list[list[HalfPlane]]]:
    """Each named region as a union of convex pieces, each an intersection of half-planes."""
    r = 1.0 / (n - 1)
    pieces = {
        "function_converges": [[(-1, 0, 0), (-1, 2, 0)]],
        "forms_diverge": [[(-1, 0, -0.5), (-1, 1, 0)], [(-4, 2, -1), (1, -1, 0)]],
        "all_diverge": [[(-1, 0, -0.5), (0, -1, 0), (-1, 2, 0)]],
        "forms_diverge_functions_vanish": [[(-1, 0, -0.5), (0, 1, 0)]],
        "function_converges_forms_diverge": [[(-1, 0, -0.5), (-1, 2, 0)]],
        "rescaled_function_diverges": [[(-1, 2, 0), (-1, -4, 0), (1, -1, r)]],
    }
    if n >= 3:
        pieces["rescaled_form_diverges"] = [[(-1, 1, -(n / 2 - 1)), (-1, 1, 0)]]
    return pieces


def _clip(poly: list[tuple[float, float]], hp: HalfPlane) -> list[tuple[float, float]]:
    a, b, c = hp
    out = []
    for i, p in enumerate(poly):
        q = poly[(i + 1) % len(poly)]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def region_polygons(n: int, alpha_range=(0.0, 3.0), beta_range=(-1.0, 2.0)):
    box = [(alpha_range[0], beta_range[0]), (alpha_range[1], beta_range[0]),
           (alpha_range[1], beta_range[1]), (alpha_range[0], beta_range[1])]
    out = {}
    for name, pieces in region_pieces(n).items():
        polys = []
        for piece in pieces:
            poly = box
            for hp in piece:
                poly = _clip(poly, hp)
                if not poly:
                    break
            if len(poly) >= 3:
                polys.append(poly)
        out[name] = polys
    return out


@dataclass(frozen=True)
class BoundaryLine:
    name: str
    # a*alpha + b*beta = c, restricted to the side conditions
    coefficients: tuple[float, float, float]
    points: tuple[tuple[float, float], ...]
    style: str = "solid"


def _segment_in_box(a, b, c, alpha_range, beta_range, extra=()):
    """Clip the line ``a x + b y = c`` to the box and the half-planes ``extra``."""
    norm = a * a + b * b
    p0 = (a * c / norm, b * c / norm)
    dx, dy = -b, a
    lo, hi = -math.inf, math.inf
    constraints = [(-1, 0, -alpha_range[0]), (1, 0, alpha_range[1]),
                   (0, -1, -beta_range[0]), (0, 1, beta_range[1]), *extra]
    for ca, cb, cc in constraints:
        f0 = ca * p0[0] + cb * p0[1] - cc
        df = ca * dx + cb * dy
        if df == 0:
            if f0 > 0:
                return ()
            continue
        t = -f0 / df
        if df > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        if lo > hi:
            return ()
    return ((p0[0] + lo * dx, p0[1] + lo * dy), (p0[0] + hi * dx, p0[1] + hi * dy))


def boundary_lines(n: int, alpha_range=(0.0, 3.0), beta_range=(-1.0, 2.0)) -> list[BoundaryLine]:
    """Analytic region boundaries, clipped to the plotting box."""
    specs = [
        ("closeness max(beta,0) = alpha/2", (-1, 2, 0), [(0, -1, 0)], "solid"),
        ("function rate beta = -alpha/4", (1, 4, 0), [(0, 1, 0)], "solid"),
        ("form divergence alpha = 1/2", (1, 0, 0.5), [(-1, 1, 0)], "solid"),
        ("form divergence 4 alpha - 2 beta - 1 = 0", (4, -2, 1), [(1, -1, 0)], "solid"),
        ("branch alpha = beta", (1, -1, 0), [], "thin"),
        (f"rescaled function beta = alpha - 1/{n - 1}", (1, -1, 1.0 / (n - 1)), [], "dashed"),
        ("volume constant (alpha >= beta)", (n - 1, 1, 1), [(-1, 1, 0)], "dotted"),
        ("volume constant (alpha <= beta)", (n, 0, 1), [(1, -1, 0)], "dotted"),
    ]
    if n >= 3:
        specs.append((f"rescaled form beta = alpha - {n / 2 - 1:g}",
                      (1, -1, n / 2 - 1), [(-1, 1, 0)], "dashed"))
    lines = []
    for name, (a, b, c), extra, style in specs:
        seg = _segment_in_box(a, b, c, alpha_range, beta_range, extra)
        if seg and seg[0] != seg[1]:
            lines.append(BoundaryLine(name, (float(a), float(b), float(c)), seg, style))
    return lines


@dataclass(frozen=True)
class RegimeDiagram:
    n: int
    alphas: np.ndarray
    betas: np.ndarray
    flags: dict
    lines: list
    polygons: dict
    alpha_range: tuple = (0.0, 3.0)
    beta_range: tuple = (-1.0, 2.0)


def regime_diagram(n: int, resolution: int = 200, alpha_range=(0.0, 3.0),
                   beta_range=(-1.0, 2.0)) -> RegimeDiagram:
    """Region raster at cell centres plus exact boundary lines and region polygons."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    da = (alpha_range[1] - alpha_range[0]) / resolution
    db = (beta_range[1] - beta_range[0]) / resolution
    alphas = alpha_range[0] + da * (np.arange(resolution) + 0.5)
    betas = beta_range[0] + db * (np.arange(resolution) + 0.5)
    A, B = np.meshgrid(alphas, betas, indexing="ij")
    return RegimeDiagram(n, alphas, betas, region_flags(A, B, n),
                         boundary_lines(n, alpha_range, beta_range),
                         region_polygons(n, alpha_range, beta_range),
                         tuple(alpha_range), tuple(beta_range))


# ----------------------------------------------------------------------------
# certificates

class HypothesisViolation(ValueError):
    """Parameters fall outside the hypotheses of the requested statement."""

    def __init__(self, kind: str, failed: list[str]):
        self.kind = kind
        self.failed = failed
        super().__init__(f"{kind}: hypotheses violated: {'; '.join(failed)}")


@dataclass(frozen=True)
class Certificate:
    kind: str
    params: dict
    checklist: dict
    exponents: dict
    boundary: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["boundary"] = list(self.boundary)
        return d


def _check(checks: list[tuple[str, bool]], kind: str) -> dict:
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise HypothesisViolation(kind, failed)
    return {name: True for name, _ in checks}


def divergence_certificate(kind: str, alpha: float, beta: float, n: int = 3,
                           k: int | None = None) -> Certificate:
    """Check the hypotheses of a divergence statement and report its exponents.

    ``kind`` is one of ``prop-ramanujan-gap`` (common Hodge gap over Ramanujan
    families), ``cor-function-divergence`` (unit-volume function eigenvalue
    diverges) or ``prp-form-divergence`` (unit-volume exact form eigenvalue
    diverges while functions decay).  Raises :class:`HypothesisViolation`
    listing every failed inequality.
    """
    a, b = float(alpha), float(beta)
    params = {"alpha": a, "beta": b, "n": n}
    boundary: list[str] = []
    if kind == "prop-ramanujan-gap":
        params["k"] = k
        checklist = _check([
            ("k >= 3", k is not None and k >= 3),
            ("n >= 2", n >= 2),
            ("alpha > 1/2", a > 0.5),
            ("beta >= 0", b >= 0),
            ("beta < alpha/2", b < a / 2),
        ], kind)
        from .metric import ramanujan_metric_gap
        exps = {
            "gap_exponent": float(ramanujan_gap_exponent(a, b)),
            "volume_exponent": float(volume_exponent(a, b, n)),
            "form_exponent": float(form_exponent(a, b)),
            "h_k": ramanujan_metric_gap(k).b,
        }
        if b == 0:
            boundary.append("beta = 0: common gap (0, h) of fixed size")
    elif kind == "cor-function-divergence":
        r = 1.0 / (n - 1)
        # closed triangle (0,0), (4,-1)/(5(n-1)), (2,1)/(n-1); edges flagged
        checklist = _check([
            ("n >= 2", n >= 2),
            ("alpha > 0", a > 0),
            ("beta <= alpha/2", b <= a / 2 + 1e-15),
            ("beta >= -alpha/4", b >= -a / 4 - 1e-15),
            ("beta > alpha - 1/(n-1)", b > a - r),
        ], kind)
        if math.isclose(b, a / 2, abs_tol=1e-15):
            boundary.append("beta = alpha/2: closeness holds only in the limit")
        if math.isclose(b, -a / 4, abs_tol=1e-15):
            boundary.append("beta = -alpha/4")
        exps = {"rescaled_function_exponent": float(rescaled_function_exponent(a, b, n)),
                "volume_exponent": float(volume_exponent(a, b, n))}
    elif kind == "prp-form-divergence":
        checklist = _check([
            ("n >= 3", n >= 3),
            ("alpha > 0", a > 0),
            ("alpha >= beta", a >= b),
            ("beta < alpha - (n/2 - 1)", b < a - (n / 2 - 1)),
        ], kind)
        exps = {"rescaled_form_exponent": float(rescaled_form_exponent(a, b, n)),
                "rescaled_function_exponent": float(rescaled_function_exponent(a, b, n)),
                "volume_exponent": float(volume_exponent(a, b, n))}
        exps["function_decays"] = exps["rescaled_function_exponent"] < 0
    else:
        raise ValueError(f"unknown certificate kind {kind!r}")
    return Certificate(kind, params, checklist, exps, tuple(boundary))
