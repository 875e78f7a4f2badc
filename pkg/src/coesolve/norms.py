"""Discrete function-space norms used by the verification suite.

All integrals are rectangle rules on the sampled grids.  The E-valued
magnitude is the Euclidean norm across components.  Besov norms use sharp
Littlewood-Paley cutoffs (characteristic functions of dyadic annuli), and
the trace-space norms are upper-equivalent surrogates built from those
cutoffs plus a pointwise graph-norm interpolant; they are positively
homogeneous but not subadditive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError
from .grids import Field, spectral_derivative


def _component_norms(values) -> np.ndarray:
    return np.linalg.norm(np.atleast_2d(values), axis=-1)


def lp_norm(field: Field, p: float) -> float:
    """(h sum_i ||u_i||_E^p)^(1/p) on the field's grid."""
    if not p >= 1:
        raise InvalidArgumentError("p must be >= 1")
    mags = _component_norms(field.values)
    return float((field.grid.h * np.sum(mags**p)) ** (1.0 / p))


def mixed_norm(values, p: float, q: float, dt: float, h: float) -> float:
    """L_p in the outer (first) axis of the L_q inner-axis norms.

    ``values`` has shape (nt, nx) or (nt, nx, dim); spacings ``dt`` (outer)
    and ``h`` (inner) weight the rectangle rules.  For p == q this equals
    the flattened lp norm with weight dt * h.
    """
    if not (p >= 1 and q >= 1):
        raise InvalidArgumentError("p and q must be >= 1")
    v = np.asarray(values, dtype=complex)
    if v.ndim == 2:
        v = v[:, :, None]
    if v.ndim != 3:
        raise InvalidArgumentError("values must have shape (nt, nx) or (nt, nx, dim)")
    mags = np.linalg.norm(v, axis=2)
    inner = (h * np.sum(mags**q, axis=1)) ** (1.0 / q)
    return float((dt * np.sum(inner**p)) ** (1.0 / p))


def sobolev_norm(field: Field, l: int, p: float, operator=None) -> float:
    """Graph part ||u|| + ||Au|| plus sum_{k=0}^{l} ||d^k u/dx^k||, each in L_p."""
    if l < 0:
        raise InvalidArgumentError("l must be >= 0")
    total = lp_norm(field, p)
    if operator is not None:
        au = Field(field.grid, operator.apply_many(field.values))
        total += lp_norm(au, p)
    else:
        total += lp_norm(field, p)
    for k in range(l + 1):
        total += lp_norm(spectral_derivative(field, k), p)
    return float(total)


def _dyadic_pieces(field: Field):
    """(low, [(j, piece)]) sharp Littlewood-Paley decomposition of the field."""
    xi = np.abs(field.grid.xi)
    fh = np.fft.fft(field.values, axis=0)
    low = Field(field.grid, np.fft.ifft(np.where((xi <= 1.0)[:, None], fh, 0), axis=0))
    pieces = []
    j = 1
    ximax = float(xi.max())
    while 2.0 ** (j - 1) <= ximax:
        mask = (xi > 2.0 ** (j - 1)) & (xi <= 2.0**j)
        if np.any(mask):
            piece = Field(field.grid, np.fft.ifft(np.where(mask[:, None], fh, 0), axis=0))
            pieces.append((j, piece))
        j += 1
    return low, pieces


def besov_norm(field: Field, s: float, q: float, p: float) -> float:
    """||S_0 u||_q + (sum_j (2^{js} ||Delta_j u||_q)^p)^(1/p), sharp cutoffs."""
    if not s > 0:
        raise InvalidArgumentError("smoothness s must be positive")
    if not (p >= 1 and q >= 1):
        raise InvalidArgumentError("p and q must be >= 1")
    low, pieces = _dyadic_pieces(field)
    acc = 0.0
    for j, piece in pieces:
        acc += (2.0 ** (j * s) * lp_norm(piece, q)) ** p
    return float(lp_norm(low, q) + acc ** (1.0 / p))


def trace_exponents(l: int, p: float):
    """(s0, s1) Besov smoothness of the two trace spaces: l(2p-1)/2p and l(p-1)/2p."""
    if l < 1 or not p > 1:
        raise InvalidArgumentError("need l >= 1 and p > 1")
    return l * (2.0 * p - 1.0) / (2.0 * p), l * (p - 1.0) / (2.0 * p)


def trace_interpolation_thetas(p: float):
    """(theta0, theta1) graph-interpolant weights 1/2p and (p+1)/2p."""
    if not p > 1:
        raise InvalidArgumentError("need p > 1")
    return 1.0 / (2.0 * p), (p + 1.0) / (2.0 * p)


def _graph_interpolant_norm(field: Field, operator, theta: float, q: float) -> float:
    """L_q norm of the pointwise interpolant ||u||^(1-theta) ||Au||^theta."""
    mags = _component_norms(field.values)
    amags = _component_norms(operator.apply_many(field.values))
    vals = mags ** (1.0 - theta) * amags**theta
    return float((field.grid.h * np.sum(vals**q)) ** (1.0 / q))


def trace_space_norms(u0: Field, u1: Field, l: int, p: float, q: float, operator):
    """Surrogate norms of the two trace spaces for (initial, derivative) data.

    Each is the matching Besov norm plus the L_q norm of the graph-norm
    interpolant with the companion theta.  Returns (x0_norm, x1_norm).
    """
    s0, s1 = trace_exponents(l, p)
    th0, th1 = trace_interpolation_thetas(p)
    x0 = besov_norm(u0, s0, q, p) + _graph_interpolant_norm(u0, operator, th0, q)
    x1 = besov_norm(u1, s1, q, p) + _graph_interpolant_norm(u1, operator, th1, q)
    return float(x0), float(x1)


@dataclass(frozen=True)
class NormSpec:
    """A configured norm evaluation: kind plus its exponents.

    Kinds: lp, mixed, sobolev, besov, trace-x0, trace-x1.  Exponents must
    lie strictly inside (1, inf) for configured reports.
    """

    kind: str
    p: float = 2.0
    q: float = 2.0
    s: float = 1.0
    l: int = 1
    operator: Optional[object] = None

    def __post_init__(self):
        if self.kind not in ("lp", "mixed", "sobolev", "besov", "trace-x0", "trace-x1"):
            raise InvalidArgumentError(f"unknown norm kind {self.kind!r}")
        for name, v in (("p", self.p), ("q", self.q)):
            if not (1.0 < v < np.inf):
                raise InvalidArgumentError(f"exponent {name} must lie in (1, inf)")

    def evaluate(self, field: Field) -> float:
        if self.kind == "lp":
            return lp_norm(field, self.p)
        if self.kind == "sobolev":
            return sobolev_norm(field, self.l, self.p, self.operator)
        if self.kind == "besov":
            return besov_norm(field, self.s, self.q, self.p)
        if self.kind in ("trace-x0", "trace-x1"):
            if self.operator is None:
                raise InvalidArgumentError("trace norms need an operator handle")
            x0, x1 = trace_space_norms(field, field, self.l, self.p, self.q, self.operator)
            return x0 if self.kind == "trace-x0" else x1
        raise InvalidArgumentError("mixed norms need explicit (values, dt, h); use mixed_norm")
