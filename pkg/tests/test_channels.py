import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_state
from qchansim import fixtures
from qchansim.channels import (
    AllZeroWeights,
    Choi,
    Kraus,
    PauliChi,
    apply,
    as_chi,
    as_choi,
    channel_from_json,
    channel_to_json,
    chi_to_choi,
    choi_to_chi,
    choi_to_kraus,
    compose,
    identity_channel,
    kraus_to_choi,
    mix,
    unitary_channel,
    validate,
)
from qchansim.noise_presets import NoiseKind, make_noise
from qchansim.numerics import NotPSD, Y, Z, ket, projector
from qchansim.randomgen import random_channel

seeds = st.integers(0, 2**63)

# Choi of the identity: |0,0> + |1,1> outer product (row-major vec of I)
PHI_PLUS = np.array([[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]], dtype=complex)
PHI_MINUS = np.array([[1, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 1]], dtype=complex)


def test_identity_choi():
    assert np.allclose(kraus_to_choi(identity_channel()).matrix, PHI_PLUS)


def test_z_channel_choi():
    assert np.allclose(kraus_to_choi(unitary_channel(Z)).matrix, PHI_MINUS)


def test_amplitude_damping_choi_diagonal():
    # J[2a+i, 2a+i] = E(|i><i|)[a, a]; AD sends |1><1| to 0.36|0><0| + 0.64|1><1|
    j = kraus_to_choi(make_noise(NoiseKind.AMPLITUDE_DAMPING, 0.36)).matrix
    assert np.allclose(np.diag(j).real, [1, 0.36, 0, 0.64])
    assert j[0, 3] == pytest.approx(0.8)


def test_choi_convention_blocks():
    # output is the first factor: block (a, b) of J is E(|i><j|)[a, b] over (i, j)
    ch = random_channel(99)
    j = kraus_to_choi(ch).matrix
    for i in range(2):
        for k in range(2):
            unit = np.zeros((2, 2))
            unit[i, k] = 1
            out = sum(op @ unit @ op.conj().T for op in ch.ops)
            assert np.allclose(j[i::2, k::2], out)


def test_choi_to_kraus_identity():
    k = choi_to_kraus(Choi(PHI_PLUS))
    assert len(k) == 1
    op = k.ops[0]
    assert np.allclose(op / op[0, 0], np.eye(2))
    assert abs(op[0, 0]) == pytest.approx(1)


@pytest.mark.parametrize("name", fixtures.TABLE1_NAMES)
def test_choi_to_kraus_printed_matrices(name):
    j = fixtures.table1_target(name)
    k = choi_to_kraus(j)
    assert 1 <= len(k) <= 4
    assert np.abs(kraus_to_choi(k).matrix - j.matrix).max() < 1e-8


def test_choi_to_kraus_depolarizing_weights():
    k = choi_to_kraus(as_choi(make_noise(NoiseKind.DEPOLARIZING, 0.75)))
    assert len(k) == 4
    w = [np.trace(op.conj().T @ op).real / 2 for op in k.ops]
    assert np.allclose(w, 0.25)


def test_choi_to_kraus_rejects_non_psd():
    with pytest.raises(NotPSD):
        choi_to_kraus(Choi(np.diag([1.0, 1, 0, -0.1])))


def test_chi_examples():
    assert np.allclose(as_chi(identity_channel()).matrix, np.diag([1, 0, 0, 0]))
    lam = 0.3
    assert np.allclose(
        as_chi(make_noise(NoiseKind.DEPOLARIZING, lam)).matrix,
        np.diag([1 - lam, lam / 3, lam / 3, lam / 3]),
    )
    assert np.allclose(as_chi(make_noise(NoiseKind.PHASE_FLIP, 0.36)).matrix, np.diag([0.64, 0, 0, 0.36]))


def test_chi_matches_pauli_sum():
    # independent oracle: E(rho) = sum chi_ij P_i rho P_j
    ch = random_channel(5)
    chi = as_chi(ch)
    rho = random_state(np.random.default_rng(1))
    assert np.allclose(apply(PauliChi(chi.matrix), rho), apply(ch, rho), atol=1e-12)


@given(seeds)
def test_chi_choi_bijection(seed):
    j = as_choi(random_channel(seed))
    assert np.abs(chi_to_choi(choi_to_chi(j)).matrix - j.matrix).max() < 1e-10
    chi = choi_to_chi(j)
    assert np.trace(chi.matrix).real == pytest.approx(1, abs=1e-10)


def test_apply_examples():
    h, v = projector(ket("H")), projector(ket("V"))
    assert np.allclose(apply(identity_channel(), h), h)
    assert np.allclose(apply(make_noise(NoiseKind.AMPLITUDE_DAMPING, 1.0), v), h)
    out = apply(make_noise(NoiseKind.DEPOLARIZING, 1.0), h)
    assert np.trace(out).real == pytest.approx(1)
    assert np.allclose([np.trace(p @ out).real for p in (np.array([[0, 1], [1, 0]]), Y, Z)], [0, 0, -1 / 3])


@given(seeds)
def test_apply_agrees_across_representations(seed):
    k = random_channel(seed)
    rho = random_state(np.random.default_rng(seed % 2**32))
    outs = [apply(rep, rho) for rep in (k, as_choi(k), as_chi(k))]
    for out in outs[1:]:
        assert np.abs(out - outs[0]).max() < 1e-9
    assert np.trace(outs[0]).real <= 1 + 1e-9
    assert np.linalg.eigvalsh(outs[0]).min() > -1e-9


@given(seeds)
def test_kraus_choi_round_trip(seed):
    j = as_choi(random_channel(seed)).matrix
    j2 = kraus_to_choi(choi_to_kraus(Choi(j))).matrix
    j3 = kraus_to_choi(choi_to_kraus(Choi(j2))).matrix
    assert np.abs(j2 - j).max() < 1e-8
    assert np.abs(j3 - j).max() < 1e-8


def test_round_trip_thousand_channels():
    worst = 0.0
    for seed in range(1000):
        j = as_choi(random_channel(seed)).matrix
        worst = max(worst, np.abs(kraus_to_choi(choi_to_kraus(Choi(j))).matrix - j).max())
    assert worst < 1e-8


def test_mix_examples():
    ident = identity_channel()
    assert np.allclose(mix([(0.5, ident), (0.5, ident)]).matrix, PHI_PLUS)
    pf = mix([(0.64, ident), (0.36, unitary_channel(Z))])
    assert np.allclose(pf.matrix, as_choi(make_noise(NoiseKind.PHASE_FLIP, 0.36)).matrix)
    a, b = random_channel(1), random_channel(2)
    assert np.allclose(mix([(60, a), (40, b)]).matrix, mix([(0.6, a), (0.4, b)]).matrix, atol=1e-15)


def test_mix_errors():
    with pytest.raises(AllZeroWeights):
        mix([(0.0, identity_channel())])
    with pytest.raises(AllZeroWeights):
        mix([])
    with pytest.raises(ValueError):
        mix([(-1.0, identity_channel()), (2.0, identity_channel())])


@given(st.floats(0.01, 10), st.floats(0.01, 10), seeds)
def test_mix_is_linear(w1, w2, seed):
    a, b = random_channel(seed), random_channel(seed + 1)
    ja, jb = as_choi(a).matrix, as_choi(b).matrix
    expected = (w1 * ja + w2 * jb) / (w1 + w2)
    assert np.abs(mix([(w1, a), (w2, b)]).matrix - expected).max() < 1e-15


def test_validate_identity():
    r = validate(identity_channel())
    assert r.hermitian and r.psd and r.trace_preserving and r.trace_nonincreasing
    assert r.worst_violation < 1e-12 and r.tp_violation < 1e-12


def test_validate_weak_measurement_operator():
    r = validate(Kraus((np.diag([1.0, np.sqrt(0.2)]),)))
    assert r.trace_nonincreasing and not r.trace_preserving
    assert r.tp_violation == pytest.approx(0.8)


def test_validate_printed_c2():
    raw = fixtures.printed_choi("C2")
    r = validate(Choi(raw), tol=5e-4)
    assert r.hermitian and r.psd
    assert np.trace(raw).real == pytest.approx(2, abs=2e-4)


@pytest.mark.parametrize("name", fixtures.TABLE1_NAMES)
def test_printed_matrices_structure(name):
    j = fixtures.printed_choi(name)
    assert np.abs(j - j.conj().T).max() < 5e-4
    assert np.linalg.eigvalsh(0.5 * (j + j.conj().T)).min() > -5e-4
    d = np.diag(j).real
    assert d[0] + d[2] == pytest.approx(1, abs=5e-4)
    assert d[1] + d[3] == pytest.approx(1, abs=5e-4)


def test_validate_flags_non_cp():
    r = validate(Choi(np.diag([1.0, 1.0, 1.0, -0.5])))
    assert not r.psd
    assert r.min_eigenvalue == pytest.approx(-0.5)
    assert r.worst_violation >= 0.5


def test_compose_matches_sequential_apply():
    a, b = random_channel(7), random_channel(8)
    rho = random_state(np.random.default_rng(0))
    c = compose(a, b)
    assert len(c) <= 4
    assert np.allclose(apply(c, rho), apply(a, apply(b, rho)))


def test_kraus_validation():
    with pytest.raises(ValueError):
        Kraus(())
    with pytest.raises(ValueError):
        Kraus((np.eye(3),))
    with pytest.raises(ValueError):
        Kraus((np.array([[np.nan, 0], [0, 1]]),))
    k = identity_channel()
    with pytest.raises(ValueError):
        k.ops[0][0, 0] = 2


@pytest.mark.parametrize("make", [lambda: random_channel(4), lambda: as_choi(random_channel(4)), lambda: as_chi(random_channel(4))])
def test_json_round_trip(make):
    ch = make()
    doc = json.loads(json.dumps(channel_to_json(ch)))
    back = channel_from_json(doc)
    assert type(back) is type(ch)
    assert np.array_equal(as_choi(back).matrix, as_choi(ch).matrix)


def test_json_rejects_bad_documents():
    with pytest.raises(ValueError):
        channel_from_json({"data": []})
    with pytest.raises(ValueError):
        channel_from_json({"repr": "liouville", "data": []})
