import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from gapforge.asymptotics import (HypothesisViolation, boundary_lines, classify_alpha_beta,
                                  classify_gamma, divergence_certificate, form_exponent,
                                  region_flags, region_pieces, regime_diagram,
                                  rescaled_form_exponent, rescaled_function_exponent,
                                  volume_exponent)
from gapforge.svg import render_regimes


def test_gamma_examples():
    r = classify_gamma(0.0, 3)
    assert (r.function_exponent, r.form_divergence_exponent, r.volume_exponent) == (0.0, -2.0, 2.0)
    assert r.function_behavior == "converges-with-rate"
    r = classify_gamma(1.5, 3)
    assert r.form_divergence_exponent == -1.0 and r.volume_exponent == 3.0
    r = classify_gamma(2.0, 3)
    assert r.form_divergence_exponent is None and not r.valid["form_divergence"]
    r = classify_gamma(0.5, 3)
    assert r.function_behavior == "bounded-by-eps^1/2" and r.function_exponent == 0.5
    assert classify_gamma(-0.3, 3).function_behavior == "bounded-by-eps^1/2"
    with pytest.raises(ValueError):
        classify_gamma(0.0, 1)


def test_gamma_boundaries_list_both_branches():
    r = classify_gamma(1.0, 3)
    vols = [b.exponent for b in r.branches if b.quantity == "volume"]
    forms = [b.exponent for b in r.branches if b.quantity == "form"]
    assert sorted(vols) == [3.0, 3.0] and forms == [-2.0, -2.0]
    assert "gamma = 1" in r.boundaries
    r = classify_gamma(-0.25, 2)
    funcs = sorted(b.exponent for b in r.branches if b.quantity == "function")
    assert funcs == [0.5, 0.5] and r.boundaries


def test_alpha_beta_examples():
    r = classify_alpha_beta(1.0, 0.0, 3)
    assert r.function_converges and r.form_exponent == 1.0 and r.form_diverges
    assert r.volume_exponent == -1.0 and r.gap_exponent == 0.0
    assert r.function_eigenvalue_exponent == 0.0
    # rescaled function exponent tends to 2/n near the origin
    assert classify_alpha_beta(1e-9, 0.0, 2).rescaled_function_exponent == pytest.approx(1.0)
    assert classify_alpha_beta(1.0, 0.2, 3).rescaled_form_exponent == pytest.approx(0.2)
    with pytest.raises(ValueError):
        classify_alpha_beta(0.0, 0.0, 3)


def test_region_point_from_example():
    r = classify_alpha_beta(0.6, 0.1, 3)
    assert r.regions["function_converges"] and r.regions["forms_diverge"]
    assert r.regions["function_converges_forms_diverge"]
    # beta > 0, so function eigenvalues do not tend to 0: this point is in the all-diverge area
    assert r.regions["all_diverge"]
    assert not r.regions["forms_diverge_functions_vanish"]
    assert classify_alpha_beta(0.6, -0.1, 3).regions["forms_diverge_functions_vanish"]


def test_boundary_lists_both_branches():
    r = classify_alpha_beta(0.7, 0.7, 3)
    forms = [b.exponent for b in r.branches if b.quantity == "form"]
    assert len(forms) == 2 and forms[0] == forms[1]
    assert "alpha = beta" in r.boundaries
    assert classify_alpha_beta(1.0, -0.25, 3).boundaries


def test_branch_continuity_exact():
    rng = np.random.default_rng(8)
    for a in rng.uniform(0, 3, 1000):
        assert (2 * a - 1) - (4 * a - 2 * a - 1) == 0
        assert form_exponent(a, a) == 2 * a - 1
    g = classify_gamma(1.0, 3)
    assert len({b.exponent for b in g.branches if b.quantity == "volume"}) == 1


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 3.0), st.floats(-1.0, 2.0), st.integers(2, 5))
def test_consistent_with_gamma_substitution(alpha, beta, n):
    gamma = beta / alpha
    assume(min(abs(gamma - t) for t in (-0.25, 0.5, 1.0, 2.0)) > 1e-9)
    ab = classify_alpha_beta(alpha, beta, n)
    g = classify_gamma(gamma, n)
    # eps-part of the family form exponent (the family adds 1/|E| ~ nu^-1)
    eps_part = ab.form_exponent + 1.0
    if g.form_divergence_exponent is None:
        assert eps_part <= 1e-12
    else:
        assert eps_part == pytest.approx(-alpha * g.form_divergence_exponent, abs=1e-12)
        assert eps_part > 0
    assert ab.volume_exponent - 1.0 == pytest.approx(-alpha * g.volume_exponent, abs=1e-12)
    if g.function_behavior == "converges-with-rate":
        assert ab.function_eigenvalue_exponent == pytest.approx(-alpha * g.function_exponent,
                                                                abs=1e-12)
        assert ab.function_converges


def test_rescaled_divergences_disjoint():
    alphas = np.linspace(0, 3, 202)[1:-1]
    betas = np.linspace(-1, 2, 202)[1:-1]
    A, B = np.meshgrid(alphas, betas, indexing="ij")
    f = region_flags(A, B, 3)
    assert A.size == 200 * 200
    assert not np.any(f["rescaled_function_diverges"] & f["rescaled_form_diverges"])
    assert f["rescaled_function_diverges"].any() and f["rescaled_form_diverges"].any()


def test_rescaled_form_on_alpha_ge_beta():
    for a, b, n in ((1.0, 0.2, 3), (2.0, -0.5, 4), (0.5, 0.5, 3)):
        assert rescaled_form_exponent(a, b, n) == pytest.approx(2 * (a - b + 1) / n - 1)
    assert rescaled_function_exponent(0.1, 0.05, 2) == pytest.approx(0.95)


PREDICATE_FOR_LINE = {
    "closeness": lambda a, b, n: region_flags(a, b, n)["function_converges"],
    "function rate": lambda a, b, n: region_flags(a, b, n)["function_rate"],
    "form divergence": lambda a, b, n: region_flags(a, b, n)["forms_diverge"],
    "rescaled function": lambda a, b, n: rescaled_function_exponent(a, b, n) > 0,
    "rescaled form": lambda a, b, n: region_flags(a, b, n)["rescaled_form_diverges"],
    "volume constant": lambda a, b, n: region_flags(a, b, n)["volume_shrinks"],
}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_boundary_lines_separate_predicates(n):
    lines = boundary_lines(n)
    names = [ln.name for ln in lines]
    assert any(f"beta = alpha - 1/{n - 1}" in s for s in names)
    for ln in lines:
        key = next((k for k in PREDICATE_FOR_LINE if ln.name.startswith(k)), None)
        if key is None:
            continue
        a, b, c = ln.coefficients
        for (p0, p1) in [ln.points]:
            assert a * p0[0] + b * p0[1] == pytest.approx(c, abs=1e-12)
            assert a * p1[0] + b * p1[1] == pytest.approx(c, abs=1e-12)
        normal = np.array([a, b]) / math.hypot(a, b)
        for t in np.linspace(0.05, 0.95, 19):
            x = np.array(ln.points[0]) + t * (np.array(ln.points[1]) - np.array(ln.points[0]))
            lo, hi = x - 1e-6 * normal, x + 1e-6 * normal
            if lo[0] <= 0 or hi[0] <= 0:
                continue
            pred = PREDICATE_FOR_LINE[key]
            assert bool(pred(*lo, n)) != bool(pred(*hi, n)), (ln.name, x)


def test_volume_line_through_points():
    ln = next(x for x in boundary_lines(3) if x.name == "volume constant (alpha >= beta)")
    for p in ln.points:
        assert 2 * p[0] + p[1] == pytest.approx(1.0)
        assert volume_exponent(p[0], p[1], 3) == pytest.approx(0.0, abs=1e-12)


def _inside(poly, pt):
    x, y = pt
    inside = False
    for i in range(len(poly)):
        (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % len(poly)]
        if (y1 > y) != (y2 > y):
            if x < x1 + (y - y1) * (x2 - x1) / (y2 - y1):
                inside = not inside
    return inside


@pytest.mark.parametrize("n", [2, 3, 4])
def test_polygons_match_raster(n):
    d = regime_diagram(n, 61)
    for name, pieces in region_pieces(n).items():
        flags = d.flags[name]
        lines = [hp for piece in pieces for hp in piece]
        for i, a in enumerate(d.alphas):
            for j, b in enumerate(d.betas):
                # membership on a boundary line is a strictness convention; skip it
                if any(abs(p * a + q * b - c) < 1e-9 for p, q, c in lines):
                    continue
                poly_hit = any(_inside(p, (a, b)) for p in d.polygons[name])
                assert poly_hit == bool(flags[i, j]), (name, a, b)


def test_regime_diagram_shape():
    d = regime_diagram(3, 200)
    assert d.flags["forms_diverge"].shape == (200, 200)
    assert d.alphas[0] > 0 and d.alphas[-1] < 3
    with pytest.raises(ValueError):
        regime_diagram(1)


def test_certificates():
    c = divergence_certificate("prop-ramanujan-gap", 0.6, 0.0, n=3, k=3)
    assert c.exponents["gap_exponent"] == 0.0
    assert c.exponents["volume_exponent"] == pytest.approx(-0.2)
    c = divergence_certificate("cor-function-divergence", 0.1, 0.05, n=2)
    assert c.exponents["rescaled_function_exponent"] == pytest.approx(0.95)
    assert c.boundary  # on beta = alpha/2
    c = divergence_certificate("prp-form-divergence", 1.0, 0.2, n=3)
    assert c.exponents["rescaled_form_exponent"] == pytest.approx(0.2)
    assert c.exponents["function_decays"]
    assert all(c.checklist.values())


def test_certificate_refusals():
    with pytest.raises(HypothesisViolation) as exc:
        divergence_certificate("prop-ramanujan-gap", 0.4, 0.3, n=3, k=3)
    assert set(exc.value.failed) == {"alpha > 1/2", "beta < alpha/2"}
    with pytest.raises(HypothesisViolation, match="k >= 3"):
        divergence_certificate("prop-ramanujan-gap", 1.0, 0.1, n=3, k=2)
    with pytest.raises(HypothesisViolation, match="alpha - 1/"):
        divergence_certificate("cor-function-divergence", 2.0, 0.0, n=3)
    with pytest.raises(HypothesisViolation, match="n >= 3"):
        divergence_certificate("prp-form-divergence", 1.0, 0.2, n=2)
    with pytest.raises(ValueError, match="unknown"):
        divergence_certificate("theorem-x", 1.0, 0.0)


def test_svg_render():
    d = regime_diagram(3, 50)
    text = render_regimes(d, point=(1.0, 0.0))
    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    classes = {p.get("class") for p in root.iter(f"{ns}polygon")}
    assert {"all_diverge", "forms_diverge_functions_vanish"} <= classes
    assert len(list(root.iter(f"{ns}polyline"))) == len(d.lines)
    labels = {" ".join(t.text for t in el.iter(f"{ns}tspan")) for el in root.iter(f"{ns}text")}
    assert "all eigenvalues diverge" in labels
    assert render_regimes(d) == render_regimes(regime_diagram(3, 50))
