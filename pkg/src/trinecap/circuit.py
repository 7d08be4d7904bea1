"""Gate-level collective decoder for the pair code, the separable decoder,
and cross-checks between the gate, optical and analytic descriptions.

Qubit 0 is the first letter (polarization), qubit 1 the second (location);
basis index is ``2*q0 + q1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import optics
from .measure import ChannelModel, LetterEnsemble, channel_matrix, helstrom_error, mutual_information
from .pwcode import SINGLET, channel_for_states, codewords, decoding_basis
from .qstate import PovmSet, StateVector, UnitaryOp, q_gate, rotation_y, trine_state

POLARIZATION, LOCATION = 0, 1
EQUIVALENCE_TOL = 1e-10

# Standard-basis index read out for each outcome after the collective circuit.
OUTCOME_INDEX = {0: 0, 1: 1, 2: 2}
NO_COUNT_INDEX = 3


@dataclass(frozen=True, eq=False)
class GateStep:
    target: int
    unitary: UnitaryOp
    control: Optional[int] = None
    control_value: int = 1
    angle: float = 0.0
    name: str = ""

    def __post_init__(self):
        if self.target not in (0, 1):
            raise ValueError("target must be qubit 0 or 1")
        if self.control is not None and self.control == self.target:
            raise ValueError("control and target must differ")
        if self.control_value not in (0, 1):
            raise ValueError("control_value must be 0 or 1")

    @property
    def kind(self) -> str:
        return "single-qubit" if self.control is None else "controlled"

    def matrix(self) -> np.ndarray:
        u = self.unitary.matrix
        if self.control is None:
            return np.kron(u, np.eye(2)) if self.target == 0 else np.kron(np.eye(2), u)
        proj = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
        out = np.zeros((4, 4), dtype=complex)
        for b in (0, 1):
            op = u if b == self.control_value else np.eye(2)
            if self.control == 0:
                out += np.kron(proj[b], op)
            else:
                out += np.kron(op, proj[b])
        return out


def compose(gates: Sequence[GateStep]) -> UnitaryOp:
    """Product of the gates, first gate applied first."""
    u = np.eye(4, dtype=complex)
    for g in gates:
        u = g.matrix() @ u
    return UnitaryOp(u)


def _pair_indices(target: int, control: int, control_value: int):
    """Basis indices (target=0, target=1) inside the controlled subspace."""
    idx = []
    for t in (0, 1):
        bits = [0, 0]
        bits[target], bits[control] = t, control_value
        idx.append(2 * bits[0] + bits[1])
    return idx


def _solved_rotation(columns: np.ndarray, column: int, target: int, control: int, control_value: int,
                     name: str) -> GateStep:
    """Controlled R_y that moves ``columns[:, column]`` off the target=1 index."""
    i, j = _pair_indices(target, control, control_value)
    a, b = columns[i, column].real, columns[j, column].real
    phi = 2 * np.arctan2(-b, a)
    return GateStep(target, rotation_y(phi), control, control_value, phi, name)


def collective_gates() -> list:
    """Five controlled gates taking the decoding basis to the standard basis.

    The gate pattern is fixed; each rotation angle is solved so that, after
    the gate, one chosen decoding vector has no weight on one basis state.
    Decoding vector ``y`` ends on basis index ``y``, the singlet on index 3.
    The second gate is the open-control rotation by gamma. Gates 3 and 5
    share control and target and could be fused; they are kept apart to
    keep the outcome relabelling visible.
    """
    cols = np.column_stack([v.amplitudes for v in decoding_basis().vectors] + [SINGLET.amplitudes])
    gates = [GateStep(LOCATION, q_gate(np.pi), POLARIZATION, 1, np.pi, "cnot")]

    def push(g):
        nonlocal cols
        gates.append(g)
        cols = g.matrix() @ cols

    cols = gates[0].matrix() @ cols
    # Pi_00 is now c|00> - s|10>: rotate it onto |00>.
    push(_solved_rotation(cols, 0, POLARIZATION, LOCATION, 0, "gamma"))
    # Singlet onto |01>, leaving the symmetric combination on |11>.
    push(_solved_rotation(cols, 3, POLARIZATION, LOCATION, 1, "split"))
    # Balanced mix of |10> and |11>: Pi_22 onto |10>.
    push(_solved_rotation(cols, 2, LOCATION, POLARIZATION, 1, "mix"))
    # Pi_11 from |11> to |01>, pushing the singlet to |11>.
    push(_solved_rotation(cols, 1, POLARIZATION, LOCATION, 1, "relabel"))
    return gates


def build_collective_circuit() -> UnitaryOp:
    return compose(collective_gates())


def circuit_distribution(state: StateVector, unitary: UnitaryOp | None = None) -> np.ndarray:
    """Outcome probabilities (y=0, 1, 2, no-count) after the circuit."""
    u = unitary or build_collective_circuit()
    probs = np.abs(u.matrix @ state.amplitudes) ** 2
    return np.array([probs[OUTCOME_INDEX[y]] for y in range(3)] + [probs[NO_COUNT_INDEX]])


def circuit_channel(states: Sequence[StateVector] | None = None) -> ChannelModel:
    u = build_collective_circuit()
    rows = [circuit_distribution(s, u)[:3] for s in (states or codewords())]
    w = np.array(rows)
    return ChannelModel(w / w.sum(axis=1, keepdims=True), ("00", "11", "22"), ("00", "11", "22"))


# -- separable decoding ----------------------------------------------------------


def helstrom_basis(a: StateVector, b: StateVector) -> PovmSet:
    """Optimal projective measurement for two real qubit states at equal priors."""
    ta = np.arctan2(a.amplitudes[1].real, a.amplitudes[0].real)
    tb = np.arctan2(b.amplitudes[1].real, b.amplitudes[0].real)
    # Flip b onto the same half-plane so the bisector is well defined.
    if np.cos(tb - ta) < 0:
        tb += np.pi
    mid = (ta + tb) / 2
    sign = 1.0 if np.sin(tb - ta) >= 0 else -1.0
    t0 = mid - sign * np.pi / 4
    vecs = [np.array([np.cos(t0), np.sin(t0)]), np.array([np.cos(t0 + sign * np.pi / 2), np.sin(t0 + sign * np.pi / 2)])]
    return PovmSet.from_vectors(vecs)


def separable_letter_channel() -> ChannelModel:
    """Binary channel of one letter: letters 0 and 1 read by their Helstrom basis."""
    a, b = trine_state(0), trine_state(1)
    return channel_matrix(LetterEnsemble.uniform([a, b]), helstrom_basis(a, b))


def separable_decoder_channel() -> ChannelModel:
    """Two letters, each measured on its own: the product of two letter channels.

    Inputs and outputs are ordered ``00, 01, 10, 11`` over the binary sub-alphabet.
    """
    w = separable_letter_channel().matrix
    labels = ("00", "01", "10", "11")
    return ChannelModel(np.kron(w, w), labels, labels)


def separable_crossover() -> float:
    return helstrom_error(trine_state(0), trine_state(1), 0.5)


def separable_information() -> tuple:
    """(per-letter bits, two-letter bits) at uniform priors."""
    per = mutual_information(np.full(2, 0.5), separable_letter_channel())
    pair = mutual_information(np.full(4, 0.25), separable_decoder_channel())
    return per, pair


# -- equivalence -------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    max_discrepancy: float
    worst: tuple
    tolerance: float = EQUIVALENCE_TOL

    @property
    def ok(self) -> bool:
        return self.max_discrepancy <= self.tolerance


class EquivalenceError(AssertionError):
    def __init__(self, report: EquivalenceReport):
        x, y, delta = report.worst
        super().__init__(f"decoders disagree: worst entry P({y}|{x}) off by {delta:.3e}")
        self.report = report


def verify_circuit_equivalence(phi_a_deg: float = optics.PHI_A_DEG, phi_b_deg: float = optics.PHI_B_DEG,
                               tol: float = EQUIVALENCE_TOL) -> EquivalenceReport:
    """Compare gate circuit, optical decoder and analytic channel entrywise.

    Raises :class:`EquivalenceError` (carrying the report) when any entry of
    the three 3x3 channels disagrees by more than ``tol``.
    """
    analytic = channel_for_states(codewords()).matrix
    gate = circuit_channel().matrix
    optical = np.array([
        optics.decode_optical(cw, phi_a_deg=phi_a_deg, phi_b_deg=phi_b_deg) for cw in codewords()
    ])
    worst = (0, 0, 0.0)
    for other in (gate, optical):
        diff = np.abs(other - analytic)
        x, y = np.unravel_index(np.argmax(diff), diff.shape)
        if diff[x, y] > worst[2]:
            worst = (int(x), int(y), float(diff[x, y]))
    report = EquivalenceReport(worst[2], worst, tol)
    if not report.ok:
        raise EquivalenceError(report)
    return report

