"""The length-two repeated-letter code over the trine and its collective
decoding basis.

Codewords are ``|psi_x>|psi_x>`` for x in {0, 1, 2}. The decoder is the
orthonormal triad in their span whose overlaps with the codewords are
``c`` on the diagonal and ``s/sqrt(2)`` off it, with
``c = cos(gamma/2) = (sqrt2 + 1)/sqrt6`` and ``s = sin(gamma/2) = (sqrt2 - 1)/sqrt6``.

Off-diagonal overlaps are positive. The codeword Gram matrix has +1/4
off the diagonal, and with negative off-diagonal coefficients no
orthonormal triad can reproduce it (it would need ``-sqrt2*c*s + s^2/2``,
about -0.221).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .measure import ChannelModel, LetterEnsemble, channel_matrix, mutual_information, optimize_c1
from .qstate import PovmSet, StateVector, tensor_product, trine_state, trine_states

SQRT2 = np.sqrt(2.0)
SQRT6 = np.sqrt(6.0)
C = (SQRT2 + 1) / SQRT6
S = (SQRT2 - 1) / SQRT6
GAMMA = 2 * np.arcsin(S)
SYMMETRY_AXIS = np.ones(3) / np.sqrt(3.0)

# Singlet: orthogonal to every symmetric two-qubit state, so it never fires for a codeword.
SINGLET = StateVector(np.array([0.0, 1.0, -1.0, 0.0]) / SQRT2)


def codeword(x: int) -> StateVector:
    """Two-letter codeword ``|Psi_xx> = |psi_x> (x) |psi_x>``."""
    letter = trine_state(x)
    return tensor_product(letter, letter)


def codewords() -> tuple:
    return tuple(codeword(x) for x in range(3))


def expansion_matrix() -> np.ndarray:
    """Coefficients of each codeword (rows) over the decoding vectors (columns)."""
    off = S / SQRT2
    return np.full((3, 3), off) + (C - off) * np.eye(3)


@dataclass(frozen=True, eq=False)
class DecodingBasis:
    vectors: tuple
    c: float = C
    s: float = S
    gamma: float = GAMMA

    def matrix(self) -> np.ndarray:
        """Decoding vectors as rows of a 3x4 array."""
        return np.array([v.amplitudes for v in self.vectors])

    def povm(self) -> PovmSet:
        """Complete measurement: the three decoding projectors plus the singlet."""
        return PovmSet.from_vectors(list(self.vectors) + [SINGLET], labels=("00", "11", "22", "none"))


def decoding_basis() -> DecodingBasis:
    """Invert the expansion ``Psi = M Pi`` on the codeword set."""
    psi = np.array([cw.amplitudes for cw in codewords()])
    pi = np.linalg.solve(expansion_matrix(), psi)
    return DecodingBasis(tuple(StateVector(row) for row in pi))


def channel_for_states(states: Sequence[StateVector], basis: DecodingBasis | None = None) -> ChannelModel:
    """3x3 channel induced by measuring ``states`` in the decoding basis.

    The singlet outcome is dropped; for states inside the symmetric subspace
    its probability is zero.
    """
    basis = basis or decoding_basis()
    full = channel_matrix(LetterEnsemble.uniform(states), basis.povm()).matrix
    if np.max(full[:, 3]) > 1e-10:
        raise ValueError("input states leave the codeword span")
    w = full[:, :3]
    return ChannelModel(w / w.sum(axis=1, keepdims=True), ("00", "11", "22"), ("00", "11", "22"))


def pair_channel() -> ChannelModel:
    return channel_for_states(codewords())


@dataclass(frozen=True)
class GainRecord:
    i2: float
    per_letter: float
    c1: float
    gain: float


def superadditive_gain(c1: float | None = None, seed: int = 0) -> GainRecord:
    """Pair-code information against twice the single-letter capacity.

    ``c1`` is computed with :func:`optimize_c1` unless supplied.
    """
    i2 = mutual_information(np.full(3, 1 / 3), pair_channel())
    if c1 is None:
        c1 = optimize_c1(trine_states(), seed=seed).value
    return GainRecord(i2, i2 / 2, c1, i2 / 2 - c1)


@dataclass(frozen=True, eq=False)
class RealTrineFrame:
    """Codewords and decoder axes as real 3-vectors in the decoder frame."""

    codeword_coords: np.ndarray
    decoder_axes: np.ndarray
    symmetry_axis: np.ndarray


def real_trine_frame() -> RealTrineFrame:
    return RealTrineFrame(expansion_matrix(), np.eye(3), SYMMETRY_AXIS.copy())


def axis_rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    """Right-handed rotation about a unit axis (Rodrigues)."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * kx + (1 - np.cos(angle)) * kx @ kx


def rotated_codewords(offset: float) -> tuple:
    """Codewords turned by ``offset`` radians about the frame's symmetry axis.

    The rotation acts inside the codeword span; the singlet direction is
    untouched.
    """
    if not np.isfinite(offset):
        raise ValueError("offset must be finite")
    frame = real_trine_frame()
    coords = frame.codeword_coords @ axis_rotation(frame.symmetry_axis, offset).T
    pi = decoding_basis().matrix()
    return tuple(StateVector.normalized(row) for row in coords @ pi)


def rotated_channel(offset: float) -> ChannelModel:
    return channel_for_states(rotated_codewords(offset))


def ideal_sweep(offsets: Sequence[float]) -> list:
    """(offset, bits) pairs for uniform priors through the rotated channel."""
    uniform = np.full(3, 1 / 3)
    return [(float(d), mutual_information(uniform, rotated_channel(d))) for d in offsets]
