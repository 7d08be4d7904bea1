"""Channel matrices, mutual information, discrimination bounds and the
single-letter capacity optimizers.

All information quantities are in bits. The capacity search works over
rank-one POVMs with real measurement vectors, which is enough for ensembles
of real qubit states.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar, nnls

from .qstate import PovmSet, StateVector, inner_product, trine_states

log = logging.getLogger(__name__)

ROW_TOL = 1e-10
PRIOR_TOL = 1e-12
CONVERGENCE_TOL = 1e-6
WEIGHT_RESIDUAL_TOL = 1e-10

# Infeasible POVM angles score below any achievable mutual information.
_INFEASIBLE = -1.0


@dataclass(frozen=True, eq=False)
class LetterEnsemble:
    states: tuple
    priors: np.ndarray

    def __post_init__(self):
        states = tuple(self.states)
        priors = np.array(self.priors, dtype=float)
        if len(states) != priors.size:
            raise ValueError("need exactly one prior per state")
        if len({s.dim for s in states}) != 1:
            raise ValueError("all letter states must share a dimension")
        _check_priors(priors)
        priors.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)

    @classmethod
    def uniform(cls, states: Sequence[StateVector]) -> "LetterEnsemble":
        states = tuple(states)
        return cls(states, np.full(len(states), 1.0 / len(states)))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def gram(self) -> np.ndarray:
        return np.array([[inner_product(a, b) for b in self.states] for a in self.states])


def trine_ensemble() -> LetterEnsemble:
    return LetterEnsemble.uniform(trine_states())


@dataclass(frozen=True, eq=False)
class ChannelModel:
    """Conditional probabilities ``matrix[x, y] = P(y|x)``."""

    matrix: np.ndarray
    input_labels: tuple = ()
    output_labels: tuple = ()

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2:
            raise ValueError("channel matrix must be 2-d")
        if m.min() < -ROW_TOL:
            raise ValueError("channel matrix has negative entries")
        rows = m.sum(axis=1)
        if np.max(np.abs(rows - 1)) > ROW_TOL:
            raise ValueError(f"channel rows must sum to 1 (got {rows})")
        m = np.clip(m, 0.0, None)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "input_labels", tuple(self.input_labels) or tuple(range(m.shape[0])))
        object.__setattr__(self, "output_labels", tuple(self.output_labels) or tuple(range(m.shape[1])))

    @property
    def shape(self):
        return self.matrix.shape


@dataclass(frozen=True, eq=False)
class CapacityResult:
    value: float
    optimal_priors: np.ndarray
    optimal_povm: PovmSet
    iterations: int
    povm_angles: np.ndarray = field(default_factory=lambda: np.zeros(0))
    converged: bool = True


def _check_priors(priors: np.ndarray) -> None:
    if priors.ndim != 1 or priors.size == 0:
        raise ValueError("priors must be a non-empty 1-d sequence")
    if priors.min() < 0:
        raise ValueError("priors must be non-negative")
    if abs(priors.sum() - 1) > PRIOR_TOL:
        raise ValueError(f"priors must sum to 1 (got {priors.sum()!r})")


def _as_matrix(channel) -> np.ndarray:
    return channel.matrix if isinstance(channel, ChannelModel) else np.asarray(channel, dtype=float)


def channel_matrix(ensemble: LetterEnsemble, povm: PovmSet) -> ChannelModel:
    """``P(y|x) = Tr(Pi_y rho_x)`` for every letter and outcome."""
    if ensemble.dim != povm.dim:
        raise ValueError(f"dimension mismatch: states {ensemble.dim}, POVM {povm.dim}")
    rows = [povm.probabilities(s.projector()) for s in ensemble.states]
    return ChannelModel(np.array(rows), tuple(range(len(ensemble))), povm.labels)


def _mi(p: np.ndarray, w: np.ndarray) -> float:
    q = p @ w
    joint = p[:, None] * w
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(joint > 0, joint * np.log2(w / q), 0.0)
    return float(terms.sum())


def mutual_information(priors, channel) -> float:
    """I(X:Y) in bits; zero-probability terms contribute nothing."""
    p = np.asarray(priors, dtype=float)
    w = _as_matrix(channel)
    _check_priors(p)
    if p.size != w.shape[0]:
        raise ValueError(f"{p.size} priors for a channel with {w.shape[0]} inputs")
    return max(_mi(p, w), 0.0)


def _divergences(w: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise D(W_x || q) in bits."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0, w * np.log2(w / q), 0.0)
    return terms.sum(axis=1)


def blahut_arimoto(channel, tol: float = 1e-10, max_iter: int = 100_000, start=None):
    """Capacity of a classical channel.

    Returns ``(capacity_bits, priors, iterations)``. Stops when the gap between
    the standard lower bound ``I(p)`` and upper bound ``max_x D(W_x||q)`` falls
    below ``tol``.
    """
    w = _as_matrix(channel)
    n = w.shape[0]
    p = np.full(n, 1.0 / n) if start is None else np.array(start, dtype=float)
    for it in range(1, max_iter + 1):
        q = p @ w
        d = _divergences(w, q)
        lower = float(p @ d)
        if d.max() - lower < tol:
            break
        p = p * np.exp2(d)
        p /= p.sum()
    return mutual_information(p, w), p, it


def helstrom_error(a: StateVector, b: StateVector, p: float) -> float:
    """Minimum error for discriminating ``a`` (prior ``p``) from ``b``."""
    if not 0 <= p <= 1:
        raise ValueError("prior must lie in [0, 1]")
    overlap2 = abs(inner_product(a, b)) ** 2
    disc = max(1.0 - 4.0 * p * (1.0 - p) * overlap2, 0.0)
    return 0.5 * (1.0 - np.sqrt(disc))


def _inv_sqrt_psd(rho: np.ndarray, tol: float = 1e-12):
    vals, vecs = np.linalg.eigh(rho)
    keep = vals > tol
    inv = (vecs[:, keep] / np.sqrt(vals[keep])) @ vecs[:, keep].conj().T
    kernel = vecs[:, ~keep] @ vecs[:, ~keep].conj().T
    return inv, kernel


def square_root_measurement(ensemble: LetterEnsemble) -> PovmSet:
    """Pretty-good measurement ``p_x rho^-1/2 |psi_x><psi_x| rho^-1/2``.

    Any kernel of the average state is lumped into the first element so the
    result is complete on the full space.
    """
    rho = sum(p * s.projector() for p, s in zip(ensemble.priors, ensemble.states))
    inv, kernel = _inv_sqrt_psd(rho)
    elems = [p * inv @ s.projector() @ inv for p, s in zip(ensemble.priors, ensemble.states)]
    elems[0] = elems[0] + kernel
    elems = [(e + e.conj().T) / 2 for e in elems]
    return PovmSet(tuple(elems))


def _is_symmetric(ensemble: LetterEnsemble, tol: float = 1e-10) -> bool:
    if np.ptp(ensemble.priors) > tol:
        return False
    g = np.abs(ensemble.gram())
    n = len(ensemble)
    return all(abs(g[i, j] - g[(i + 1) % n, (j + 1) % n]) < tol for i in range(n) for j in range(n))


def minimum_error_probability(ensemble: LetterEnsemble) -> float:
    """Error floor for equiprobable symmetric pure states.

    The square-root measurement is optimal for such ensembles, so its error
    is the minimum. Other ensembles are rejected.
    """
    if not _is_symmetric(ensemble):
        raise ValueError("minimum_error_probability only handles equiprobable symmetric ensembles")
    povm = square_root_measurement(ensemble)
    w = channel_matrix(ensemble, povm).matrix
    return float(1.0 - ensemble.priors @ np.diag(w))


# -- real rank-one POVM search -------------------------------------------------


def _real_states(states) -> np.ndarray:
    amps = np.array([s.amplitudes for s in states])
    if amps.shape[1] != 2:
        raise ValueError("the capacity search handles qubit states only")
    if np.max(np.abs(amps.imag)) > 1e-12:
        raise ValueError("the capacity search needs real amplitude representations")
    return amps.real


def _povm_from_angles(angles: np.ndarray, n_elements: int):
    """Vectors and weights of a real rank-one qubit POVM.

    Two elements are parametrized as a projective measurement by one angle.
    Three or more get their weights from a non-negative least-squares fit of
    the completeness equations; ``None`` when no exact fit exists.
    """
    if n_elements == 2:
        t = angles[0]
        thetas = np.array([t, t + np.pi / 2])
        weights = np.ones(2)
    else:
        thetas = np.asarray(angles, dtype=float)
        a = np.vstack([np.ones_like(thetas), np.cos(2 * thetas), np.sin(2 * thetas)])
        b = np.array([2.0, 0.0, 0.0])
        if n_elements == 3:
            # Square system: the fit is exact whenever it is solvable.
            try:
                weights = np.linalg.solve(a, b)
            except np.linalg.LinAlgError:
                return None
            if weights.min() < 0:
                return None
        else:
            weights, resid = nnls(a, b)
            if resid > WEIGHT_RESIDUAL_TOL:
                return None
    vecs = np.column_stack([np.cos(thetas), np.sin(thetas)])
    return vecs, weights


def _channel_from_angles(s: np.ndarray, angles, n_elements: int):
    povm = _povm_from_angles(angles, n_elements)
    if povm is None:
        return None
    vecs, weights = povm
    w = (s @ vecs.T) ** 2 * weights
    return w / w.sum(axis=1, keepdims=True)


def _angles_to_povm(angles, n_elements: int) -> PovmSet:
    vecs, weights = _povm_from_angles(angles, n_elements)
    return PovmSet.from_vectors(vecs, weights)


def _random_angles(rng, n_elements: int) -> np.ndarray:
    if n_elements == 2:
        return rng.uniform(0, np.pi, 1)
    while True:
        angles = np.sort(rng.uniform(0, np.pi, n_elements))
        if _povm_from_angles(angles, n_elements) is not None:
            return angles


@dataclass
class _SearchState:
    value: float
    angles: np.ndarray
    priors: np.ndarray
    n_elements: int
    iterations: int
    converged: bool


def _search(s, priors, n_elements, rng, optimize_priors, grid=24, max_sweeps=200, ba_steps=50):
    k = s.shape[0]
    angles = _random_angles(rng, n_elements)
    p = rng.dirichlet(np.ones(k)) if optimize_priors else priors

    def objective(a):
        w = _channel_from_angles(s, a, n_elements)
        return _INFEASIBLE if w is None else _mi(p, w)

    value = objective(angles)
    step = np.pi / grid
    converged = False
    sweep = 0
    for sweep in range(1, max_sweeps + 1):
        previous = value
        if optimize_priors:
            _, p, _ = blahut_arimoto(_channel_from_angles(s, angles, n_elements), start=p,
                                     max_iter=ba_steps)
        for i in range(angles.size):
            trial = angles.copy()

            def along(t, i=i, trial=trial):
                trial[i] = t
                return -objective(trial)

            coarse = angles[i] + np.arange(grid) * step
            scores = [along(t) for t in coarse]
            t0 = coarse[int(np.argmin(scores))]
            res = minimize_scalar(along, bounds=(t0 - step, t0 + step), method="bounded",
                                  options={"xatol": 1e-10})
            best_t, best_f = (res.x, res.fun) if res.fun <= min(scores) else (t0, min(scores))
            if -best_f > objective(angles):
                angles[i] = best_t
        value = objective(angles)
        if abs(value - previous) < CONVERGENCE_TOL and sweep > 1:
            converged = True
            break
    if optimize_priors:
        _, p, _ = blahut_arimoto(_channel_from_angles(s, angles, n_elements))
    value = objective(angles)
    return _SearchState(value, np.mod(angles, np.pi), p, n_elements, sweep, converged)


def _best_of(s, priors, optimize_priors, restarts, seed, element_counts):
    children = np.random.SeedSequence(seed).spawn(restarts)
    best = None
    total_iter = 0
    for i, child in enumerate(children):
        n = element_counts[i % len(element_counts)]
        st = _search(s, priors, n, np.random.default_rng(child), optimize_priors)
        total_iter += st.iterations
        # Strict comparison keeps the lowest restart index on ties.
        if best is None or st.value > best.value + 1e-12:
            best = st
    best.iterations = total_iter
    return best


def _result(s, st: _SearchState) -> CapacityResult:
    povm = _angles_to_povm(st.angles, st.n_elements)
    priors = np.array(st.priors, dtype=float)
    priors[priors < 0] = 0
    priors /= priors.sum()
    w = _channel_from_angles(s, st.angles, st.n_elements)
    value = mutual_information(priors, w)
    if not st.converged:
        log.warning("capacity search hit its sweep budget; best value %.6f", value)
    return CapacityResult(value, priors, povm, st.iterations, np.array(st.angles), st.converged)


def optimize_c1(states: Sequence[StateVector], restarts: int = 16, seed: int = 0,
                element_counts=(2, 3, 4)) -> CapacityResult:
    """Single-letter capacity: max over priors and POVMs of I(X:Y).

    Alternates Blahut-Arimoto on the priors with a coordinate search over the
    POVM angles, from ``restarts`` seeded random starts.
    """
    s = _real_states(states)
    st = _best_of(s, None, True, restarts, seed, tuple(element_counts))
    return _result(s, st)


def accessible_information(ensemble: LetterEnsemble, restarts: int = 16, seed: int = 0,
                           element_counts=(2, 3, 4)) -> CapacityResult:
    """Max over POVMs of I(X:Y) at the ensemble's fixed priors."""
    s = _real_states(ensemble.states)
    if len(ensemble) == 1:
        povm = PovmSet((np.eye(2),))
        return CapacityResult(0.0, np.array(ensemble.priors), povm, 0)
    st = _best_of(s, np.array(ensemble.priors), False, restarts, seed, tuple(element_counts))
    return _result(s, st)
