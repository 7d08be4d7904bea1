"""Dense complex linear algebra for qubit and two-qubit states.

Everything here is at most 4-dimensional, so plain numpy arrays are used
throughout. Values are immutable: arrays are copied on construction and
flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
COMPLETENESS_TOL = 1e-10

SQRT3 = np.sqrt(3.0)

# Trine amplitudes in the {|0>, |1>} basis, signs as printed in the source.
_TRINE = (
    (1.0, 0.0),
    (-0.5, -SQRT3 / 2),
    (-0.5, SQRT3 / 2),
)


def _frozen(a, dtype=complex) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state. ``amplitudes`` is a read-only complex array."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1-d sequence")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex]) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def allclose(self, other: "StateVector", atol: float = 1e-12) -> bool:
        return self.dim == other.dim and np.allclose(self.amplitudes, other.amplitudes, atol=atol, rtol=0)

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"StateVector({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("unitary must be a square matrix")
        err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if err > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (max |U^dag U - I| = {err:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, state: StateVector) -> StateVector:
        if state.dim != self.dim:
            raise ValueError(f"dimension mismatch: operator {self.dim}, state {state.dim}")
        return StateVector.normalized(self.matrix @ state.amplitudes)

    def __matmul__(self, other: "UnitaryOp") -> "UnitaryOp":
        return UnitaryOp(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class PovmSet:
    """A measurement: positive elements summing to the identity."""

    elements: tuple
    labels: tuple = ()

    def __post_init__(self):
        elems = tuple(_frozen(e) for e in self.elements)
        if not elems:
            raise ValueError("a POVM needs at least one element")
        dim = elems[0].shape[0]
        for i, e in enumerate(elems):
            if e.shape != (dim, dim):
                raise ValueError(f"element {i} has shape {e.shape}, expected {(dim, dim)}")
            if np.max(np.abs(e - e.conj().T)) > HERMITIAN_TOL:
                raise ValueError(f"element {i} is not Hermitian")
            if np.linalg.eigvalsh(e).min() < -PSD_TOL:
                raise ValueError(f"element {i} is not positive semidefinite")
        total = sum(elems)
        err = np.max(np.abs(total - np.eye(dim)))
        if err > COMPLETENESS_TOL:
            raise ValueError(f"elements do not sum to identity (max deviation {err:.3e})")
        labels = tuple(self.labels) if self.labels else tuple(range(len(elems)))
        if len(labels) != len(elems):
            raise ValueError("one label per element required")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_vectors(cls, vectors, weights=None, labels=()) -> "PovmSet":
        """Rank-one POVM ``{w_i |v_i><v_i|}``."""
        vecs = [np.asarray(getattr(v, "amplitudes", v), dtype=complex) for v in vectors]
        if weights is None:
            weights = np.ones(len(vecs))
        return cls(tuple(w * np.outer(v, v.conj()) for w, v in zip(weights, vecs)), labels)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def probabilities(self, rho: np.ndarray) -> np.ndarray:
        """Outcome distribution ``Tr(Pi_y rho)`` for a density matrix."""
        return np.array([np.trace(e @ rho).real for e in self.elements])


def trine_state(x: int) -> StateVector:
    """Letter state ``|psi_x>`` of the ternary symmetric set, x in {0, 1, 2}."""
    if x not in (0, 1, 2):
        raise ValueError(f"letter index must be 0, 1 or 2, got {x!r}")
    return StateVector(_TRINE[x])


def trine_states() -> tuple:
    return tuple(trine_state(x) for x in range(3))


def basis_state(index: int, dim: int = 2) -> StateVector:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    amps = np.zeros(dim)
    amps[index] = 1.0
    return StateVector(amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    # np.kron puts the first factor on the slow index, i.e. |a>|b> -> a_i b_j at 2*i + j.
    return StateVector.normalized(np.kron(a.amplitudes, b.amplitudes))


def rotation_y(angle: float) -> UnitaryOp:
    """Half-angle y rotation ``[[cos a/2, -sin a/2], [sin a/2, cos a/2]]``.

    With this convention ``rotation_y(2*pi)`` is ``-I``; only ``4*pi`` returns
    the identity.
    """
    if not np.isfinite(angle):
        raise ValueError("rotation angle must be finite")
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return UnitaryOp(np.array([[c, -s], [s, c]]))


PAULI_X = UnitaryOp(np.array([[0, 1], [1, 0]]))
PAULI_Z = UnitaryOp(np.array([[1, 0], [0, -1]]))
IDENTITY_2 = UnitaryOp(np.eye(2))


def q_gate(angle: float) -> UnitaryOp:
    """``Q(phi) = R_y(phi) sigma_z``, a real reflection. ``Q(pi)`` is sigma_x."""
    return rotation_y(angle) @ PAULI_Z


def density(state: StateVector) -> np.ndarray:
    return state.projector()
