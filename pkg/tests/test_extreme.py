import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qchansim import fixtures
from qchansim.channels import apply, as_choi, identity_channel, validate
from qchansim.extreme import (
    Decomposition17,
    ExtremeParams,
    NonUnitAxis,
    axis_from_plane,
    axis_from_spherical,
    axis_to_spherical,
    build_extreme,
    build_mixture,
    circuit_angles,
    kraus_pair,
    rotation,
    wrap_2pi,
    wrap_pi,
)
from qchansim.noise_presets import NoiseKind, make_noise
from qchansim.numerics import X, Y, Z

PI = math.pi
angles = st.floats(0.0, 2 * PI)
signed = st.floats(-10.0, 10.0)
axes = st.tuples(st.floats(0, PI), st.floats(-PI, PI)).map(lambda t: tuple(axis_from_spherical(*t)))


def extreme_params():
    return st.builds(ExtremeParams.make, angles, angles, signed, signed, axes, axes)


def test_rotation_examples():
    assert np.allclose(rotation((0.6, 0.0, 0.8), 0.0), np.eye(2))
    g = 0.37
    assert np.allclose(rotation((0, 1, 0), 2 * g), np.eye(2) * math.cos(g) - 1j * Y * math.sin(g), atol=1e-12)
    assert np.allclose(rotation((0, 1, 0), PI), -1j * Y, atol=1e-12)


def test_rotation_rejects_non_unit_axis():
    with pytest.raises(NonUnitAxis):
        rotation((1.0, 1.0, 0.0), 1.0)


@given(axes, signed)
def test_rotation_is_unitary_and_matches_formula(axis, two_theta):
    u = rotation(axis, two_theta)
    assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-12
    t = two_theta / 2
    rs = axis[0] * X + axis[1] * Y + axis[2] * Z
    assert np.abs(u - (math.cos(t) * np.eye(2) - 1j * math.sin(t) * rs)).max() < 1e-12


def test_kraus_pair_examples():
    k0, k1 = kraus_pair(0.0, 0.0)
    assert np.allclose(k0, np.eye(2)) and np.allclose(k1, 0)
    k0, k1 = kraus_pair(PI, 0.0)
    assert np.allclose(k0, Z) and np.allclose(k1, 0)
    k0, k1 = kraus_pair(PI / 3, 0.0)
    assert np.allclose(k0, np.diag([1, 0.5]))
    assert np.allclose(k1, [[0, math.sqrt(3) / 2], [0, 0]])


@given(angles, angles)
def test_kraus_pair_complete(a, b):
    k0, k1 = kraus_pair(a, b)
    assert np.abs(k0.conj().T @ k0 + k1.conj().T @ k1 - np.eye(2)).max() < 1e-15


def test_circuit_angle_examples():
    g = circuit_angles(0.0, 0.0)
    assert (g.gamma1, g.gamma2) == pytest.approx((PI / 4, -PI / 4))
    g = circuit_angles(PI / 3, 0.0)
    assert (g.gamma1, g.gamma2) == pytest.approx((PI / 12, -PI / 12))
    g = circuit_angles(PI, 0.0)
    assert (g.gamma1, g.gamma2) == pytest.approx((-PI / 4, PI / 4))


@given(angles, angles)
def test_circuit_angle_relations(a, b):
    g = circuit_angles(a, b)
    assert abs(wrap_pi(g.gamma1 - 0.5 * (b - a + PI / 2))) < 1e-12
    assert abs(wrap_pi(g.gamma2 - 0.5 * (b + a - PI / 2))) < 1e-12
    assert -PI < g.gamma1 <= PI and -PI < g.gamma2 <= PI


def test_build_extreme_identity():
    j = as_choi(build_extreme(ExtremeParams())).matrix
    assert np.allclose(j, as_choi(identity_channel()).matrix)


def test_build_extreme_yz_channel():
    e = ExtremeParams.make(PI / 4, PI / 4, delta=PI / 2, m_axis=(0, 1, 0))
    rng = np.random.default_rng(0)
    for _ in range(5):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho = a @ a.conj().T
        assert np.allclose(apply(build_extreme(e), rho), (Y @ rho @ Y + Z @ rho @ Z) / 2)


def test_table2_extremes_are_cptp():
    d = fixtures.table2_decomposition()
    for e in (d.e1, d.e2):
        r = validate(build_extreme(e), tol=1e-12)
        assert r.psd and r.trace_preserving


@given(extreme_params())
def test_build_extreme_trace_preserving(e):
    assert validate(build_extreme(e)).tp_violation < 1e-12


def test_build_extreme_trace_preserving_bulk():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100_000 // 20):
        th = rng.uniform(0, PI, 2)
        ph = rng.uniform(-PI, PI, 2)
        e = ExtremeParams.make(
            *rng.uniform(0, 2 * PI, 2), *rng.uniform(-PI, PI, 2),
            axis_from_spherical(th[0], ph[0]), axis_from_spherical(th[1], ph[1]),
        )
        m0, m1 = build_extreme(e).ops
        worst = max(worst, np.abs(m0.conj().T @ m0 + m1.conj().T @ m1 - np.eye(2)).max())
    assert worst < 1e-12


@given(signed, signed, axes, axes)
def test_unitary_fixed_point(delta, phi, m, n):
    e = ExtremeParams.make(0.0, 0.0, delta, phi, m, n)
    m0, m1 = build_extreme(e).ops
    assert np.allclose(m1, 0, atol=1e-15)
    assert np.allclose(m0, rotation(n, 2 * e.phi) @ rotation(m, 2 * e.delta), atol=1e-12)


def test_build_mixture_examples():
    ident = ExtremeParams()
    assert np.allclose(build_mixture(Decomposition17(ident, ident, 0.3)).matrix, as_choi(identity_channel()).matrix)
    pf = Decomposition17(ident, ExtremeParams.make(PI, 0.0), 0.5)
    assert np.allclose(build_mixture(pf).matrix, as_choi(make_noise(NoiseKind.PHASE_FLIP, 0.5)).matrix)


def test_build_mixture_printed_depolarizing_row():
    row = fixtures.noise_rows("depolarizing")[-1]
    assert row["lambda"] == 1
    e1 = ExtremeParams.make(row["e1"]["alpha"] * PI, row["e1"]["beta"] * PI)
    e2 = ExtremeParams.make(PI / 4, PI / 4, delta=PI / 2, m_axis=(0, 1, 0))
    d = Decomposition17(e1, e2, fixtures.printed_p("depolarizing", row))
    assert d.p == pytest.approx(1 / 3)
    assert np.allclose(build_mixture(d).matrix, as_choi(make_noise(NoiseKind.DEPOLARIZING, 1.0)).matrix)


@given(extreme_params(), extreme_params(), st.floats(0, 1))
def test_mixture_is_segment(e1, e2, p):
    j = build_mixture(Decomposition17(e1, e2, p)).matrix
    j1 = build_mixture(Decomposition17(e1, e2, 1.0)).matrix
    j0 = build_mixture(Decomposition17(e1, e2, 0.0)).matrix
    assert np.array_equal(j, p * j1 + (1 - p) * j0)


def test_from_times():
    e = ExtremeParams()
    assert Decomposition17.from_times(e, e, 60, 40).p == pytest.approx(0.6)
    with pytest.raises(ValueError):
        Decomposition17.from_times(e, e, 0, 0)


def test_param_validation():
    with pytest.raises(ValueError):
        ExtremeParams(alpha=7.0)
    with pytest.raises(NonUnitAxis):
        ExtremeParams(m_axis=(0.5, 0.5, 0.5))
    with pytest.raises(ValueError):
        Decomposition17(ExtremeParams(), ExtremeParams(), 1.5)


def test_axis_from_plane_branches():
    assert np.allclose(axis_from_plane(0.6, 0.0), [0.6, 0, 0.8])
    assert np.allclose(axis_from_plane(0.6, 0.0, sign=-1), [0.6, 0, -0.8])
    v = axis_from_plane(0.9768, 0.2148)  # printed rounding slightly outside the disc
    assert np.linalg.norm(v) == pytest.approx(1)
    with pytest.raises(NonUnitAxis):
        axis_from_plane(0.9, 0.9)


@given(axes)
def test_spherical_round_trip(axis):
    assert np.allclose(axis_from_spherical(*axis_to_spherical(axis)), axis, atol=1e-12)


@given(extreme_params(), extreme_params(), st.floats(0, 1))
def test_json_round_trip(e1, e2, p):
    d = Decomposition17(e1, e2, p)
    back = Decomposition17.from_json(d.to_json())
    assert np.abs(build_mixture(back).matrix - build_mixture(d).matrix).max() < 1e-12


def test_json_without_third_components_uses_positive_branch():
    doc = {"m1": 0.6, "m2": 0.0, "n1": 0.0, "n2": 0.0, "alpha": 0.1, "beta": 0.2, "delta": 0.3, "varphi": 0.4}
    e = ExtremeParams.from_json(doc)
    assert e.m_axis[2] == pytest.approx(0.8)
    assert e.n_axis == pytest.approx((0, 0, 1))


@given(st.floats(-100, 100))
def test_wrapping(a):
    w = wrap_pi(a)
    assert -PI < w <= PI
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    v = wrap_2pi(a)
    assert 0 <= v < 2 * PI
    assert math.isclose(math.sin(v), math.sin(a), abs_tol=1e-9)
