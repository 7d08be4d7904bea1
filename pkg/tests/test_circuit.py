import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import real_mi
from trinecap import optics
from trinecap.circuit import (
    EquivalenceError,
    GateStep,
    build_collective_circuit,
    circuit_channel,
    circuit_distribution,
    collective_gates,
    separable_crossover,
    separable_decoder_channel,
    separable_information,
    verify_circuit_equivalence,
)
from trinecap.pwcode import SINGLET, decoding_basis, pair_channel
from trinecap.qstate import StateVector, q_gate, rotation_y


def test_gate_pattern():
    gates = collective_gates()
    assert len(gates) == 5
    assert all(g.kind == "controlled" for g in gates)
    assert np.allclose(gates[0].unitary.matrix, q_gate(np.pi).matrix)
    assert gates[1].control_value == 0
    assert gates[1].angle == pytest.approx(2 * np.arcsin(decoding_basis().s))


def test_circuit_maps_basis_to_standard_basis():
    u = build_collective_circuit().matrix
    for y, v in enumerate(decoding_basis().vectors):
        assert abs(abs((u @ v.amplitudes)[y]) - 1) < 1e-12
    assert abs(abs((u @ SINGLET.amplitudes)[3]) - 1) < 1e-12


def test_controlled_gate_rejects_same_qubit():
    with pytest.raises(ValueError):
        GateStep(0, rotation_y(1.0), control=0)


def test_circuit_channel_equals_analytic():
    assert np.max(np.abs(circuit_channel().matrix - pair_channel().matrix)) < 1e-12


def test_equivalence_passes():
    assert verify_circuit_equivalence().max_discrepancy < 1e-12


def test_equivalence_flags_misaligned_rotator():
    with pytest.raises(EquivalenceError) as err:
        verify_circuit_equivalence(phi_a_deg=optics.PHI_A_DEG + 1.0)
    assert err.value.report.max_discrepancy > 1e-3


def _states(seed, n):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, 4))
    return [StateVector.normalized(row) for row in z]


@settings(max_examples=10)
@given(st.integers(0, 2**32 - 1))
def test_optical_and_gate_decoders_agree_on_random_states(seed):
    u = build_collective_circuit()
    for s in _states(seed, 10):
        assert np.allclose(optics.detector_distribution(s), circuit_distribution(s, u), atol=1e-10)


def test_hundred_random_states():
    u = build_collective_circuit()
    worst = max(
        np.max(np.abs(optics.detector_distribution(s) - circuit_distribution(s, u))) for s in _states(1, 100)
    )
    assert worst < 1e-10


def test_separable_letter_values():
    assert separable_crossover() == pytest.approx((1 - np.sqrt(0.75)) / 2, abs=1e-12)
    per, pair = separable_information()
    assert per == pytest.approx(0.6454211, abs=1e-6)
    assert pair == pytest.approx(2 * per, abs=1e-12)


def test_random_product_measurements_below_twice_c1(c1_result):
    rng = np.random.default_rng(5)
    from trinecap.pwcode import codewords

    psi = np.array([cw.amplitudes.real for cw in codewords()])
    best = 0.0
    for _ in range(1000):
        a, b = rng.uniform(0, np.pi, 2)
        ua = np.array([[np.cos(a), np.sin(a)], [-np.sin(a), np.cos(a)]])
        ub = np.array([[np.cos(b), np.sin(b)], [-np.sin(b), np.cos(b)]])
        w = np.abs(psi @ np.kron(ua, ub).T) ** 2
        p = rng.dirichlet(np.ones(3))
        best = max(best, real_mi(p, w))
    assert best <= 2 * c1_result.value + 1e-9


def test_separable_decoder_is_product():
    w = separable_decoder_channel().matrix
    assert w.shape == (4, 4)
    assert np.allclose(w.sum(axis=1), 1)
