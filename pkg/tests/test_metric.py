import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapforge.constructions import complete_graph, cycle_graph, petersen_graph, path_graph
from gapforge.eig import Spectrum
from gapforge.metric import (GapInterval, certified_ramanujan_gap, dirichlet_points, find_gaps,
                             metric_spectrum, ramanujan_metric_gap, scale_lengths)
from gapforge.spectra import unit_laplacian_spectrum

# frozen from independent closed forms
H3 = 2.2909066943715297            # arccos(1 - 2 sqrt(2)/3) ** 2
H3_CERTIFIED = 0.115489125027329   # arccos(2 sqrt(2)/3) ** 2
K4_LAMBDA1 = 3.650519363459398     # arccos(-1/3) ** 2
PETERSEN_LAMBDA1 = 1.515261087144  # arccos(1/3) ** 2


def cycle_oracle(n: int, window: float) -> list[tuple[float, int]]:
    """Circle of length n: (2 pi m / n)^2, multiplicity 2, minus the Dirichlet set."""
    out = []
    m = 1
    while (2 * math.pi * m / n) ** 2 <= window:
        if m % n:
            out.append(((2 * math.pi * m / n) ** 2, 2))
        m += 1
    return out


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_cycle_oracle(n):
    rep = metric_spectrum(unit_laplacian_spectrum(cycle_graph(n)), 1.0, 60.0)
    got = [(e.value, e.multiplicity) for e in rep.eigenvalues]
    want = cycle_oracle(n, 60.0)
    assert [m for _, m in got] == [m for _, m in want]
    assert max(abs(a - b) for (a, _), (b, _) in zip(got, want)) <= 1e-8
    assert rep.exceptional_points == dirichlet_points(1.0, 60.0)
    assert rep.zero_mode == 1


def test_first_eigenvalues():
    c5 = metric_spectrum(unit_laplacian_spectrum(cycle_graph(5)), 1.0, 10.0)
    assert c5.eigenvalues[0].value == pytest.approx((2 * math.pi / 5) ** 2, abs=1e-9)
    assert c5.eigenvalues[0].value == pytest.approx(1.579136704174, abs=1e-9)
    k4 = metric_spectrum(unit_laplacian_spectrum(complete_graph(4)), 1.0, 10.0)
    assert k4.eigenvalues[0].value == pytest.approx(K4_LAMBDA1, abs=1e-9)
    pet = metric_spectrum(unit_laplacian_spectrum(petersen_graph()), 1.0, 10.0)
    assert pet.eigenvalues[0].value == pytest.approx(PETERSEN_LAMBDA1, abs=1e-9)
    assert pet.eigenvalues[0].multiplicity == 5


def test_zero_mu_branches_all_dirichlet():
    rep = metric_spectrum(Spectrum((0.0,), (1,)), 1.0, 200.0)
    assert rep.eigenvalues == ()
    assert len(rep.exceptional_points) == 4


def test_round_trip_and_exclusion():
    for g in (complete_graph(5), petersen_graph(), cycle_graph(6), path_graph(4)):
        for length in (0.7, 1.0, 2.3):
            spec = unit_laplacian_spectrum(g)
            rep = metric_spectrum(spec, length, 80.0)
            values = [e.value for e in rep.eigenvalues]
            assert values == sorted(values)
            for e in rep.eigenvalues:
                assert abs(1 - math.cos(length * math.sqrt(e.value)) - e.mu) <= 1e-9
                assert all(abs(e.value - p) > 1e-9 for p in rep.exceptional_points)
                assert e.multiplicity == spec.multiplicity_of(e.mu)


def test_mu_out_of_range():
    with pytest.raises(ValueError):
        metric_spectrum(Spectrum((0.0, 2.5), (1, 1)), 1.0, 10.0)
    with pytest.raises(ValueError):
        metric_spectrum(Spectrum((0.0,), (1,)), 0.0, 10.0)


def test_ramanujan_gap_values():
    assert ramanujan_metric_gap(3).b == pytest.approx(H3, abs=1e-12)
    assert ramanujan_metric_gap(3, 2.0).b == pytest.approx(H3 / 4, abs=1e-12)
    assert ramanujan_metric_gap(3, 2.0).b == pytest.approx(0.572726673593, abs=1e-9)
    assert certified_ramanujan_gap(3).b == pytest.approx(H3_CERTIFIED, abs=1e-12)
    with pytest.raises(ValueError):
        ramanujan_metric_gap(2)
    with pytest.raises(ValueError):
        certified_ramanujan_gap(3, -1.0)


@pytest.mark.parametrize("k", [3, 4, 5, 7])
def test_certified_gap_is_tight_lower_edge(k):
    # a Ramanujan spectrum with mu exactly at the threshold edge puts lambda_1 at the gap end
    mu_edge = 1 - 2 * math.sqrt(k - 1) / k
    rep = metric_spectrum(Spectrum((0.0, mu_edge), (1, 1)), 1.0, 10.0)
    assert rep.eigenvalues[0].value == pytest.approx(certified_ramanujan_gap(k).b, rel=1e-12)
    assert certified_ramanujan_gap(k).b < ramanujan_metric_gap(k).b


def test_find_gaps():
    rep = metric_spectrum(unit_laplacian_spectrum(complete_graph(4)), 1.0, 12.0)
    gaps = find_gaps(rep)
    assert gaps[0].as_tuple() == (0.0, pytest.approx(K4_LAMBDA1, abs=1e-9))
    for gap in gaps:
        assert not any(gap.contains(x) for x in rep.values())
        assert not any(gap.contains(x) for x in rep.exceptional_points)
    assert gaps[-1].b == 12.0
    assert find_gaps(rep, min_width=100.0) == []


def test_gap_interval():
    with pytest.raises(ValueError):
        GapInterval(1.0, 1.0)
    g = GapInterval(0.0, 4.0)
    assert g.width == 4.0 and g.contains(2.0) and not g.contains(4.0)


def test_scale_lengths_basic():
    assert scale_lengths(4.0, 2.0) == 1.0
    assert scale_lengths(3.0, 1.0) == 3.0
    np.testing.assert_array_equal(scale_lengths([4.0, 16.0], 2.0), [1.0, 4.0])
    with pytest.raises(ValueError):
        scale_lengths(1.0, 0.0)
    gap = scale_lengths(ramanujan_metric_gap(3), 2.0)
    assert gap.b == pytest.approx(ramanujan_metric_gap(3, 2.0).b, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(0.05, 20.0), st.floats(0.1, 10.0))
def test_scale_lengths_composes_exactly(t1, t2, x):
    exact = Fraction(t1) * Fraction(t2)
    # bare floats are rounded at each step; reports and gaps carry the factor exactly
    assert scale_lengths(scale_lengths(x, t2), t1) == pytest.approx(
        scale_lengths(x, exact), rel=4e-16)
    gap = ramanujan_metric_gap(3)
    assert scale_lengths(scale_lengths(gap, t2), t1).b == scale_lengths(gap, exact).b
    rep = metric_spectrum(unit_laplacian_spectrum(cycle_graph(5)), 1.0, 50.0)
    a = scale_lengths(scale_lengths(rep, t2), t1)
    b = scale_lengths(rep, exact)
    assert a.eigenvalues == b.eigenvalues
    assert a.exceptional_points == b.exceptional_points
    assert a.window == b.window
    if t1 * t2 == exact:
        assert scale_lengths(rep, t1 * t2).eigenvalues == a.eigenvalues


@pytest.mark.parametrize("g", [cycle_graph(5), complete_graph(4), petersen_graph()],
                         ids=["C5", "K4", "petersen"])
def test_length_change_matches_scaling(g):
    spec = unit_laplacian_spectrum(g)
    base = scale_lengths(metric_spectrum(spec, 1.0, 60.0), 2.0)
    direct = metric_spectrum(spec, 2.0, 15.0)
    assert base.window == 15.0
    assert len(base.eigenvalues) == len(direct.eigenvalues)
    for a, b in zip(base.eigenvalues, direct.eigenvalues):
        assert abs(a.value - b.value) <= 1e-9 and a.multiplicity == b.multiplicity
    np.testing.assert_allclose(base.exceptional_points, direct.exceptional_points, atol=1e-9)
