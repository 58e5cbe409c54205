import math

import pytest

import qzw


@pytest.fixture(scope="module")
def ref():
    return qzw.reference_params()


def test_reference_params(ref):
    assert ref.admissible
    assert ref.kernel_regime


def test_boundary_functions_match_mpmath(ref):
    assert qzw.F(0, "+1", ref) == pytest.approx(0.022852592536538586, rel=1e-10)
    assert qzw.F(1, "-3", ref) == pytest.approx(0.1005824465290333, rel=1e-10)
    assert qzw.h(0, ref) == pytest.approx(0.0034799429136701559, rel=1e-10)
    assert qzw.h(2, ref) == pytest.approx(85.12949240275939, rel=1e-10)


def test_kernel_and_correlations(ref):
    k = qzw.BoundaryKernel(ref)
    assert k("+0", "+0") == pytest.approx(0.00023070305668984876, rel=1e-8)
    assert k("+0", "-2") == pytest.approx(0.0013004755525952195, rel=1e-10)
    m = k.matrix(["+0", "+2", "-1"])
    assert m.shape == (3, 3)
    assert m[0, 1] == pytest.approx(m[1, 0], rel=1e-12)
    rho = k.correlation(["+0", "-1"])
    assert 0.0 <= rho <= 1.0


def test_link_row_is_stochastic():
    lat = qzw.Lattice(0.5, -1.0, 1.0)
    rows, tail = qzw.link_row(["+0", "-1", "+3"], lat)
    mass = sum(p for _, p in rows)
    assert all(len(c.split(",")) == 2 for c, _ in rows)
    assert 1.0 - tail - 1e-10 <= mass <= 1.0 + 1e-10


def test_finite_ensemble(ref):
    e = qzw.Ensemble(ref, 2)
    assert e.size == 2
    w = e.weight(["+0", "-1"])
    assert 0.0 < w < 1.0
    assert e.kernel("+0", "+1") == pytest.approx(e.kernel("+1", "+0"), rel=1e-12)


def test_inadmissible_raises():
    lat = qzw.Lattice()
    p = qzw.Params(1 + 1j, 1 - 1j, 1 + 1j, 1 - 1j, lat)
    assert not p.admissible
    with pytest.raises(qzw.Error):
        qzw.Ensemble(p, 2)


def test_acceptance_subset():
    rows = qzw.run_acceptance([3, 7])
    assert [r["id"] for r in rows] == [3, 7]
    assert all(r["passed"] for r in rows)
    assert all(math.isfinite(r["measured"]) for r in rows)
