"""Periodic truncation of the line and sampled fields on it.

The whole-line problem is truncated to [-X, X) with n equispaced points
(n a power of two), so FFT frequencies are xi_j = pi j / X.  Fields carry
(n, dim) complex samples; dim is the dimension of the operator stand-in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .output import write_csv


@dataclass(frozen=True)
class Grid:
    """Equispaced periodic grid on [-X, X) with a power-of-two point count."""

    half_width: float
    n: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise InvalidArgumentError("half_width must be positive")
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise InvalidArgumentError("n must be a power of two >= 2")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def x(self):
        return -self.half_width + self.h * np.arange(self.n)

    @property
    def xi(self):
        """FFT-ordered frequencies pi j / X, j = -n/2 .. n/2 - 1."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)

    def refine(self) -> "Grid":
        return Grid(self.half_width, 2 * self.n)


@dataclass
class Field:
    """Complex samples of an E-valued function on a grid, shape (n, dim)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] != self.grid.n:
            raise InvalidArgumentError("values must have shape (n,) or (n, dim)")
        self.values = v

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_function(cls, grid: Grid, fn, weights=None) -> "Field":
        """Sample scalar profile ``fn(x)`` times per-component ``weights``."""
        profile = np.asarray(fn(grid.x), dtype=complex)
        w = np.asarray([1.0] if weights is None else weights, dtype=complex)
        return cls(grid, profile[:, None] * w[None, :])

    def to_csv(self, path):
        """Columns: x, then re/im per component."""
        header = ["x"]
        for d in range(self.dim):
            header += [f"re_u{d}", f"im_u{d}"]
        rows = []
        x = self.grid.x
        for i in range(self.grid.n):
            row = [x[i]]
            for d in range(self.dim):
                row += [self.values[i, d].real, self.values[i, d].imag]
            rows.append(row)
        write_csv(path, header, rows)


def spectral_derivative(field: Field, order: int) -> Field:
    """Order-th x-derivative via the FFT symbol (i xi)^order.

    Odd orders zero the unpaired Nyquist mode, the usual convention that
    keeps real fields real.
    """
    if order < 0:
        raise InvalidArgumentError("derivative order must be >= 0")
    if order == 0:
        return Field(field.grid, field.values.copy())
    xi = field.grid.xi.copy()
    sym = (1j * xi) ** order
    if order % 2 == 1:
        sym[field.grid.n // 2] = 0.0
    fh = np.fft.fft(field.values, axis=0)
    return Field(field.grid, np.fft.ifft(sym[:, None] * fh, axis=0))


def band_limited_random(
    grid: Grid, rng, max_mode: int = 8, dim: int = 1, decay: float = 1.0
) -> Field:
    """Real random field from modes |j| <= max_mode with algebraic decay."""
    if max_mode < 1 or max_mode >= grid.n // 2:
        raise InvalidArgumentError("max_mode must lie in 1 .. n/2 - 1")
    x = grid.x
    vals = np.zeros((grid.n, dim))
    base = np.pi / grid.half_width
    for d in range(dim):
        for m in range(1, max_mode + 1):
            amp = 1.0 / m**decay
            vals[:, d] += amp * rng.normal() * np.cos(base * m * x)
            vals[:, d] += amp * rng.normal() * np.sin(base * m * x)
    return Field(grid, vals.astype(complex))
