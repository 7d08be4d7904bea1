"""Jones-calculus model of the single-photon encoder and collective decoder.

A photon carries the first letter in polarization (H=0, V=1) and the second
in its path (A=0, B=1). The four modes are ordered H_A, H_B, V_A, V_B, which
is the two-qubit basis ``|pol, path>``.

Sign conventions: a PBS transmits H and reflects V, and the reflected beam
picks up the usual mirror sign (V -> -V). Arm A of the encoder has a fold
mirror after its waveplate. With these, ENCODER_ANGLES_DEG reproduces
the codewords exactly.

The decoder uses two polarization rotators, ``phi_A = -gamma/2`` in arm A and
``phi_B = -45 deg`` in arm B, then fixed waveplates at 45 and 22.5 deg. A
rotator by phi is a HWP at 0 followed by a HWP at phi/2.

Angles are degrees at the public interface, radians inside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .pwcode import GAMMA
from .qstate import StateVector

MODES = ("H_A", "H_B", "V_A", "V_B")
PATH_OF_MODE = np.array([0, 1, 0, 1])

ENCODER_ANGLES_DEG = {
    0: (0.0, 0.0, 0.0),
    1: (30.0, -30.0, -15.0),
    2: (30.0, 30.0, 15.0),
}
PHI_A_DEG = -np.degrees(GAMMA) / 2
PHI_B_DEG = -45.0

# Output mode of the decoder -> APD index; mode 1 (H in port B) has no detector.
DETECTOR_OF_MODE = {3: 0, 2: 1, 0: 2}
NO_COUNT_MODE = 1

OpticalState = StateVector


@dataclass(frozen=True)
class OpticalElement:
    kind: str  # HWP, PBS, rotator, mirror, APD
    parameter: float = 0.0  # radians
    path: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("HWP", "PBS", "rotator", "mirror", "APD"):
            raise ValueError(f"unknown optical element {self.kind!r}")

    def transfer(self, extinction: float = 1.0) -> np.ndarray:
        if self.kind == "PBS":
            return pbs_transfer(extinction)
        if self.kind == "APD":
            return np.eye(4)
        jones = {
            "HWP": lambda: hwp_jones(self.parameter),
            "rotator": lambda: rotator_jones(self.parameter),
            "mirror": lambda: MIRROR,
        }[self.kind]()
        return on_path(jones, self.path)


def hwp_jones(theta: float) -> np.ndarray:
    c, s = np.cos(2 * theta), np.sin(2 * theta)
    return np.array([[c, s], [s, -c]])


MIRROR = hwp_jones(0.0)


def rotator_jones(phi: float) -> np.ndarray:
    return hwp_jones(phi / 2) @ hwp_jones(0.0)


def on_path(jones: np.ndarray, path: int) -> np.ndarray:
    m = np.eye(4)
    idx = [path, 2 + path]
    m[np.ix_(idx, idx)] = jones
    return m


def pbs_transfer(extinction: float = 1.0) -> np.ndarray:
    """Two-port PBS. H goes straight through, V crosses with a sign flip.

    ``extinction`` < 1 leaks amplitude ``sqrt(1 - extinction)`` into the
    wrong port for both polarizations.
    """
    if not 0 <= extinction <= 1:
        raise ValueError("extinction must lie in [0, 1]")
    t, e = np.sqrt(extinction), np.sqrt(1 - extinction)
    m = np.zeros((4, 4))
    m[np.ix_([0, 1], [0, 1])] = [[t, -e], [e, t]]
    m[np.ix_([2, 3], [2, 3])] = [[e, -t], [-t, -e]]
    return m


def encoder_elements(angles_deg) -> list:
    t0, t1, t2 = np.radians(angles_deg)
    return [
        OpticalElement("HWP", t0, 0),
        OpticalElement("PBS"),
        OpticalElement("HWP", t1, 0),
        OpticalElement("mirror", 0.0, 0),
        OpticalElement("HWP", t2, 1),
    ]


def encode_optical(x: int, angles_deg=None) -> OpticalState:
    """Drive the encoder with an H photon in arm A.

    ``angles_deg`` defaults to the table entry for letter ``x``.
    """
    if x not in ENCODER_ANGLES_DEG:
        raise ValueError(f"unknown letter {x!r}")
    angles = ENCODER_ANGLES_DEG[x] if angles_deg is None else angles_deg
    amps = np.array([1.0, 0.0, 0.0, 0.0])
    for el in encoder_elements(angles):
        amps = el.transfer() @ amps
    return StateVector.normalized(amps)


def decoder_elements(phi_a_deg: float = PHI_A_DEG, phi_b_deg: float = PHI_B_DEG) -> list:
    return [
        OpticalElement("PBS"),
        OpticalElement("rotator", np.radians(phi_a_deg), 0),
        OpticalElement("rotator", np.radians(phi_b_deg), 1),
        OpticalElement("HWP", np.radians(45.0), 0),
        OpticalElement("PBS"),
        OpticalElement("HWP", np.radians(22.5), 0),
        OpticalElement("APD"),
    ]


def dephase_paths(rho: np.ndarray, visibility: float) -> np.ndarray:
    """Scale coherences between arm A and arm B by the visibility."""
    same = PATH_OF_MODE[:, None] == PATH_OF_MODE[None, :]
    return rho * np.where(same, 1.0, visibility)


def detector_distribution(state: StateVector, phi_a_deg: float = PHI_A_DEG, phi_b_deg: float = PHI_B_DEG,
                          pbs_extinction: float = 1.0, visibility: float = 1.0) -> np.ndarray:
    """Probabilities (APD0, APD1, APD2, no-count) for one photon.

    Arms lose coherence with each other, by a factor of ``visibility``,
    each time a PBS recombines them.
    """
    if state.dim != 4:
        raise ValueError("decoder input must be a 4-mode state")
    if not 0 <= visibility <= 1:
        raise ValueError("visibility must lie in [0, 1]")
    rho = state.projector()
    for el in decoder_elements(phi_a_deg, phi_b_deg):
        if el.kind == "PBS":
            rho = dephase_paths(rho, visibility)
        t = el.transfer(pbs_extinction)
        rho = t @ rho @ t.conj().T
    mode_probs = np.clip(np.diag(rho).real, 0.0, None)
    out = np.zeros(4)
    for mode, apd in DETECTOR_OF_MODE.items():
        out[apd] = mode_probs[mode]
    out[3] = mode_probs[NO_COUNT_MODE]
    return out


def decode_optical(state: StateVector, phi_a_deg: float = PHI_A_DEG, phi_b_deg: float = PHI_B_DEG,
                   pbs_extinction: float = 1.0, visibility: float = 1.0) -> np.ndarray:
    """Click probabilities of APD0..APD2. They sum to one only when nothing
    reaches the unmonitored port."""
    return detector_distribution(state, phi_a_deg, phi_b_deg, pbs_extinction, visibility)[:3]
