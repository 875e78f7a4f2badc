"""Concrete realizations of the positive operator A on finite-dimensional stand-ins.

Three kinds: an arbitrary dense matrix (eigenvalues must have positive real
part), a periodic Sturm-Liouville operator -d^2/dy^2 + b on [0, 1] (circulant,
solved by FFT diagonalization), and a 5-point Dirichlet Laplacian on the unit
square plus a constant shift (solved by DST diagonalization).  All kinds
support batched application and batched resolvent solves (A + z)^{-1} w with
one shift per row, which is what the per-frequency solvers consume.
"""

from __future__ import annotations

import csv
import threading

import numpy as np
import scipy.fft
import scipy.linalg

from .errors import InvalidArgumentError, SingularResolventError
from .symbols import Sector

_SINGULAR_RCOND = 1e-300


class OperatorRealization:
    """Base interface: dim, apply, resolvent solves, dense materialization."""

    kind = "abstract"

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def apply(self, v):
        """A v for one vector v of length dim."""
        return self.apply_many(np.asarray(v, dtype=complex)[None, :])[0]

    def apply_many(self, rows):
        """A applied to every row of ``rows`` (shape (m, dim))."""
        raise NotImplementedError

    def resolvent_solve(self, z, w):
        """(A + z)^{-1} w for one vector."""
        return self.resolvent_solve_many(
            np.asarray([z], dtype=complex), np.asarray(w, dtype=complex)[None, :]
        )[0]

    def resolvent_solve_many(self, z_rows, w_rows):
        """(A + z_i)^{-1} w_i per row; ``z_rows`` has one shift per row of ``w_rows``."""
        raise NotImplementedError

    def as_dense(self):
        raise NotImplementedError

    def eigenvalues(self):
        """Spectrum of the stand-in (analytic where the kind permits)."""
        return np.linalg.eigvals(self.as_dense())

    def diagonalization(self):
        """(forward, inverse, eigs) fast transforms, or None for dense kinds.

        ``forward``/``inverse`` act along the last axis and conjugate the
        operator to multiplication by ``eigs``.
        """
        return None


class DenseMatrixOperator(OperatorRealization):
    """A given by an explicit complex matrix with spectrum in the open right half-plane."""

    kind = "dense-matrix"

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError("dense operator needs a square matrix")
        eigs = np.linalg.eigvals(m)
        if np.any(eigs.real <= 0):
            raise InvalidArgumentError(
                "dense operator must have eigenvalues with positive real part"
            )
        self._m = m
        self._eigs = eigs
        self._lu_cache = {}
        self._lu_lock = threading.Lock()

    @classmethod
    def from_csv(cls, path):
        """Load a complex matrix stored as alternating re, im columns."""
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.reader(fh):
                nums = [float(v) for v in rec if v.strip() != ""]
                if len(nums) % 2 != 0:
                    raise InvalidArgumentError(
                        "matrix CSV rows need an even count of re, im columns"
                    )
                rows.append([complex(a, b) for a, b in zip(nums[::2], nums[1::2])])
        return cls(rows)

    @property
    def dim(self):
        return self._m.shape[0]

    def apply_many(self, rows):
        return np.asarray(rows, dtype=complex) @ self._m.T

    def _lu(self, z):
        key = complex(z)
        with self._lu_lock:
            hit = self._lu_cache.get(key)
        if hit is not None:
            return hit
        shifted = self._m + key * np.eye(self.dim)
        if np.linalg.cond(shifted) > 1.0 / _SINGULAR_RCOND:
            raise SingularResolventError(f"A + z singular at z = {key}")
        lu = scipy.linalg.lu_factor(shifted)
        with self._lu_lock:
            if len(self._lu_cache) > 256:
                self._lu_cache.clear()
            self._lu_cache[key] = lu
        return lu

    def resolvent_solve_many(self, z_rows, w_rows):
        z_rows = np.asarray(z_rows, dtype=complex)
        w_rows = np.asarray(w_rows, dtype=complex)
        if z_rows.shape[0] != w_rows.shape[0]:
            raise InvalidArgumentError("one shift per right-hand-side row required")
        shifted = self._m[None, :, :] + z_rows[:, None, None] * np.eye(self.dim)[None]
        try:
            return np.linalg.solve(shifted, w_rows[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError as exc:
            raise SingularResolventError(str(exc)) from exc

    def as_dense(self):
        return self._m.copy()

    def eigenvalues(self):
        return self._eigs.copy()


class PeriodicSturmLiouvilleOperator(OperatorRealization):
    """-d^2/dy^2 + b on [0, 1] with periodic boundary, n-point second differences.

    Circulant, so eigenvalues are b + 4 n^2 sin^2(pi j / n) and every solve
    is an FFT diagonalization.
    """

    kind = "periodic-sturm-liouville"

    def __init__(self, b: float = 1.0, n: int = 128):
        if n < 3:
            raise InvalidArgumentError("need at least 3 grid points")
        self._b = float(b)
        self._n = int(n)
        j = np.arange(self._n)
        self._eigs = self._b + 4.0 * self._n**2 * np.sin(np.pi * j / self._n) ** 2

    @property
    def dim(self):
        return self._n

    @property
    def shift(self):
        return self._b

    def apply_many(self, rows):
        rows = np.asarray(rows, dtype=complex)
        n2 = float(self._n) ** 2
        return (
            n2 * (2.0 * rows - np.roll(rows, 1, axis=1) - np.roll(rows, -1, axis=1))
            + self._b * rows
        )

    def resolvent_solve_many(self, z_rows, w_rows):
        z_rows = np.asarray(z_rows, dtype=complex)
        w_rows = np.asarray(w_rows, dtype=complex)
        den = self._eigs[None, :] + z_rows[:, None]
        if np.any(np.abs(den) < _SINGULAR_RCOND):
            raise SingularResolventError("shift hits the operator spectrum")
        return np.fft.ifft(np.fft.fft(w_rows, axis=1) / den, axis=1)

    def as_dense(self):
        n2 = float(self._n) ** 2
        m = np.zeros((self._n, self._n), dtype=complex)
        idx = np.arange(self._n)
        m[idx, idx] = 2.0 * n2 + self._b
        m[idx, (idx + 1) % self._n] = -n2
        m[idx, (idx - 1) % self._n] = -n2
        return m

    def eigenvalues(self):
        return self._eigs.astype(complex)

    def diagonalization(self):
        fwd = lambda rows: np.fft.fft(rows, axis=-1, norm="ortho")
        inv = lambda rows: np.fft.ifft(rows, axis=-1, norm="ortho")
        return fwd, inv, self._eigs.astype(complex)


class DirichletLaplacian2D(OperatorRealization):
    """5-point -Laplace + c on the unit square with zero boundary values.

    Interior grid (n_y, n_z); vectors are row-major flattenings.  DST-I
    diagonalizes both directions, so applies and solves are fast transforms.
    """

    kind = "dirichlet-laplacian-2d"

    def __init__(self, n_y: int = 32, n_z: int = 32, c: float = 0.0):
        if n_y < 1 or n_z < 1:
            raise InvalidArgumentError("need at least one interior point per direction")
        self._ny, self._nz, self._c = int(n_y), int(n_z), float(c)
        hy = 1.0 / (self._ny + 1)
        hz = 1.0 / (self._nz + 1)
        jy = np.arange(1, self._ny + 1)
        jz = np.arange(1, self._nz + 1)
        ey = (2.0 - 2.0 * np.cos(np.pi * jy * hy)) / hy**2
        ez = (2.0 - 2.0 * np.cos(np.pi * jz * hz)) / hz**2
        self._eigs2d = ey[:, None] + ez[None, :] + self._c

    @property
    def dim(self):
        return self._ny * self._nz

    @property
    def shape2d(self):
        return (self._ny, self._nz)

    def _stencil(self, grids):
        hy2 = (self._ny + 1) ** 2
        hz2 = (self._nz + 1) ** 2
        padded = np.zeros(
            (grids.shape[0], self._ny + 2, self._nz + 2), dtype=complex
        )
        padded[:, 1:-1, 1:-1] = grids
        inner = padded[:, 1:-1, 1:-1]
        lap = hy2 * (2.0 * inner - padded[:, :-2, 1:-1] - padded[:, 2:, 1:-1]) + hz2 * (
            2.0 * inner - padded[:, 1:-1, :-2] - padded[:, 1:-1, 2:]
        )
        return lap + self._c * inner

    def apply_many(self, rows):
        rows = np.asarray(rows, dtype=complex)
        grids = rows.reshape(rows.shape[0], self._ny, self._nz)
        return self._stencil(grids).reshape(rows.shape[0], self.dim)

    def _dst2(self, grids):
        return scipy.fft.dstn(grids, type=1, axes=(-2, -1), norm="ortho")

    def resolvent_solve_many(self, z_rows, w_rows):
        z_rows = np.asarray(z_rows, dtype=complex)
        w_rows = np.asarray(w_rows, dtype=complex)
        grids = w_rows.reshape(w_rows.shape[0], self._ny, self._nz)
        coeff = self._dst2(grids.real) + 1j * self._dst2(grids.imag)
        den = self._eigs2d[None, :, :] + z_rows[:, None, None]
        if np.any(np.abs(den) < _SINGULAR_RCOND):
            raise SingularResolventError("shift hits the operator spectrum")
        coeff = coeff / den
        out = self._dst2(coeff.real) + 1j * self._dst2(coeff.imag)
        return out.reshape(w_rows.shape[0], self.dim)

    def as_dense(self):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        eye = np.eye(self.dim, dtype=complex)
        for i in range(self.dim):
            out[:, i] = self.apply_many(eye[i][None, :])[0]
        return out

    def eigenvalues(self):
        return self._eigs2d.reshape(-1).astype(complex)

    def diagonalization(self):
        ny, nz = self._ny, self._nz

        def fwd(rows):
            grids = rows.reshape(rows.shape[:-1] + (ny, nz))
            out = self._dst2(grids.real) + 1j * self._dst2(grids.imag)
            return out.reshape(rows.shape)

        return fwd, fwd, self._eigs2d.reshape(-1).astype(complex)


def make_operator(kind: str, **params) -> OperatorRealization:
    """Construct a realization by kind name."""
    if kind == "dense-matrix":
        if "csv" in params:
            return DenseMatrixOperator.from_csv(params["csv"])
        return DenseMatrixOperator(params["matrix"])
    if kind == "periodic-sturm-liouville":
        return PeriodicSturmLiouvilleOperator(
            b=params.get("b", 1.0), n=params.get("n", 128)
        )
    if kind == "dirichlet-laplacian-2d":
        return DirichletLaplacian2D(
            n_y=params.get("n_y", 32),
            n_z=params.get("n_z", 32),
            c=params.get("c", 0.0),
        )
    raise InvalidArgumentError(f"unknown operator kind {kind!r}")


def sector_samples(sector: Sector, n_moduli: int = 24, lo: float = 1e-2, hi: float = 1e6):
    """Log-spaced moduli on the positive real axis and both boundary rays."""
    if n_moduli < 1:
        raise InvalidArgumentError("need at least one modulus")
    moduli = np.geomspace(lo, hi, n_moduli)
    args = {0.0, sector.angle, -sector.angle}
    out = [r * np.exp(1j * a) for a in sorted(args) for r in moduli]
    return np.array(out, dtype=complex)


class PositivityReport:
    """Result of a sector positivity scan: sup of (1 + |z|) ||(A + z)^{-1}||_2."""

    def __init__(self, sector: Sector, samples, values):
        self.sector = sector
        self.samples = np.asarray(samples, dtype=complex)
        self.values = np.asarray(values, dtype=float)
        self.m_bound = float(np.max(self.values))

    def to_dict(self):
        return {
            "angle": self.sector.angle,
            "m_bound": self.m_bound,
            "n_samples": int(self.samples.size),
        }


def positivity_scan(
    operator: OperatorRealization, sector: Sector, lambda_samples
) -> PositivityReport:
    """Estimate the positivity constant of A on a sector from samples.

    ||(A + z)^{-1}||_2 is computed as the reciprocal smallest singular value
    of the shifted dense materialization.  Samples outside the sector are
    rejected.
    """
    samples = np.atleast_1d(np.asarray(lambda_samples, dtype=complex))
    if samples.size == 0:
        raise InvalidArgumentError("positivity scan needs at least one sample")
    for z in samples:
        if not sector.contains(z):
            raise InvalidArgumentError(f"sample {z} lies outside the sector")
    a = operator.as_dense()
    eye = np.eye(a.shape[0])
    values = []
    for z in samples:
        smin = np.linalg.svd(a + z * eye, compute_uv=False)[-1]
        if smin < _SINGULAR_RCOND:
            raise SingularResolventError(f"A + z singular at z = {z}")
        values.append((1.0 + abs(z)) / smin)
    return PositivityReport(sector, samples, values)
