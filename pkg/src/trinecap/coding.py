"""Random-coding error exponents and block lengths for hybrid (QCHC) and
all-classical (ACC) coding over the trine channel.

QCHC runs a classical code over the composite letters {00, 11, 22}, each
pair read by the collective decoder. ACC codes over the binary channel left
by the best per-letter measurement.

Rates are given per letter in units of the scheme's input alphabet: a rate
``R`` means ``R * log2(|X|)`` bits per channel use. For ACC the alphabet is
binary, so this is plain bits. For QCHC the composite alphabet is ternary
and a pair carries ``R * log2 3`` bits. With this convention the QCHC block
error falls as ``2**(-(n/2) E)`` for ``n`` letters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuit import separable_letter_channel
from .measure import ChannelModel, _as_matrix, blahut_arimoto
from .pwcode import pair_channel

SCHEMES = ("QCHC", "ACC")
RHO_TOL = 1e-8
PRIOR_TOL = 1e-10
GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True, eq=False)
class ExponentResult:
    scheme: str
    rate: float
    exponent: float
    optimizing_rho: float
    optimizing_priors: np.ndarray
    rate_per_use: float = 0.0


@dataclass(frozen=True)
class BlocklengthResult:
    scheme: str
    rate: float
    target_pe: float
    n: Optional[int]
    composite_uses: Optional[int]
    exponent: float

    @property
    def attainable(self) -> bool:
        return self.n is not None


def gallager_e0(channel, priors, rho: float) -> float:
    """``E0(rho, p) = -log2 sum_y (sum_x p(x) P(y|x)^(1/(1+rho)))^(1+rho)``."""
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")
    w = _as_matrix(channel)
    p = np.asarray(priors, dtype=float)
    inner = p @ w ** (1.0 / (1.0 + rho))
    return float(-np.log2(np.sum(inner ** (1.0 + rho))))


def _best_priors(w: np.ndarray, rho: float, max_iter: int = 10_000):
    """Arimoto ascent of E0 over the input distribution, from uniform."""
    p = np.full(w.shape[0], 1.0 / w.shape[0])
    if rho == 0:
        return p, 0.0
    wr = w ** (1.0 / (1.0 + rho))
    value = gallager_e0(w, p, rho)
    for _ in range(max_iter):
        a = p @ wr
        g = wr @ a ** rho
        f = a @ a ** rho
        p = p * (f / g) ** (1.0 / rho)
        p /= p.sum()
        new = gallager_e0(w, p, rho)
        if abs(new - value) < PRIOR_TOL:
            value = new
            break
        value = new
    return p, value


def _golden_max(f, lo: float, hi: float, tol: float = RHO_TOL):
    a, b = lo, hi
    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    best = max([(f(x), x) for x in (lo, (a + b) / 2, hi)])
    return best[1], best[0]


def error_exponent(channel, rate_per_use: float, scheme: str = "") -> ExponentResult:
    """``E(R) = max_rho max_p [E0(rho, p) - rho R]`` over rho in [0, 1]."""
    if rate_per_use < 0:
        raise ValueError("rate must be non-negative")
    w = _as_matrix(channel)

    def objective(rho):
        return _best_priors(w, rho)[1] - rho * rate_per_use

    rho, _ = _golden_max(objective, 0.0, 1.0)
    priors, e0 = _best_priors(w, rho)
    exponent = e0 - rho * rate_per_use
    if exponent <= 0:
        rho, priors, exponent = 0.0, np.full(w.shape[0], 1.0 / w.shape[0]), 0.0
    return ExponentResult(scheme, rate_per_use, float(exponent), float(rho), priors, rate_per_use)


def scheme_channel(scheme: str) -> ChannelModel:
    scheme = scheme.upper()
    if scheme == "QCHC":
        return pair_channel()
    if scheme == "ACC":
        return separable_letter_channel()
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def rate_per_use(scheme: str, rate: float) -> float:
    """Bits per channel use for a per-letter rate (see module docstring)."""
    return rate * math.log2(scheme_channel(scheme).shape[0])


def scheme_exponent(scheme: str, rate: float) -> ExponentResult:
    """Exponent per channel use (one composite pair for QCHC, one letter for ACC)."""
    scheme = scheme.upper()
    if rate < 0:
        raise ValueError("rate must be non-negative")
    res = error_exponent(scheme_channel(scheme), rate_per_use(scheme, rate), scheme)
    return ExponentResult(scheme, rate, res.exponent, res.optimizing_rho, res.optimizing_priors, res.rate_per_use)


def scheme_capacity(scheme: str) -> float:
    """Largest per-letter rate with a positive exponent."""
    w = scheme_channel(scheme)
    return blahut_arimoto(w)[0] / math.log2(w.shape[0])


def letters_per_use(scheme: str) -> int:
    return 2 if scheme.upper() == "QCHC" else 1


def block_error(scheme: str, exponent: float, n: int) -> float:
    """``2**(-(n / letters_per_use) * E)``."""
    return 2.0 ** (-(n / letters_per_use(scheme)) * exponent)


def required_blocklength(scheme: str, rate: float, target_pe: float) -> BlocklengthResult:
    """Smallest code length (in letters) whose exponent bound meets ``target_pe``.

    QCHC lengths are even. A zero exponent gives ``n=None`` (unattainable).
    """
    if not 0 < target_pe <= 1:
        raise ValueError("target_pe must lie in (0, 1]")
    res = scheme_exponent(scheme, rate)
    k = letters_per_use(res.scheme)
    if target_pe == 1:
        return BlocklengthResult(res.scheme, rate, target_pe, 0, 0, res.exponent)
    if res.exponent <= 0:
        return BlocklengthResult(res.scheme, rate, target_pe, None, None, res.exponent)
    uses = math.ceil(math.log2(1 / target_pe) / res.exponent)
    # Guard the ceiling against rounding at exact multiples.
    while uses > 0 and block_error(res.scheme, res.exponent, (uses - 1) * k) <= target_pe:
        uses -= 1
    while block_error(res.scheme, res.exponent, uses * k) > target_pe:
        uses += 1
    return BlocklengthResult(res.scheme, rate, target_pe, uses * k, uses, res.exponent)


def decoding_complexity(n: int) -> float:
    """Operation-count estimate ``(n log2 n)**2``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return (n * math.log2(n)) ** 2
