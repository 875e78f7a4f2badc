"""Per-frequency spectral solver for the stationary operator equation.

After FFT the equation (L + lambda) u = f decouples into one shifted
operator solve per frequency:

    (mu_hat(xi_j) + nu) (A + eta(xi_j) + lambda) u_hat_j = f_hat_j .

Solves, the forward application, the term-by-term coercive-estimate report,
lambda sweeps and norm-equivalence scans all live here.  Every solve is
gated on a stored admissibility report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import List, Optional

import numpy as np

from .errors import (
    AdmissibilityError,
    ConditionNotCheckedError,
    InvalidArgumentError,
)
from .grids import Field, Grid, spectral_derivative
from .norms import lp_norm, sobolev_norm
from .operators import OperatorRealization
from .output import write_csv
from .symbols import (
    ConditionReport,
    Sector,
    SymbolSet,
    char_poly,
    check_symbol_conditions,
    lambda_weights,
)


@dataclass
class DiscretizedProblem:
    """Symbols + operator realization + grid + Lebesgue exponent p.

    ``check_condition`` must run (and pass) before any solve; the stored
    report also fixes the admissible lambda sector.
    """

    symbols: SymbolSet
    operator: OperatorRealization
    grid: Grid
    p: float = 2.0
    condition_report: Optional[ConditionReport] = None
    lambda_sector: Sector = dc_field(default_factory=lambda: Sector(math.pi / 2))

    def __post_init__(self):
        if not self.p >= 1:
            raise InvalidArgumentError("p must be >= 1")

    def check_condition(self, xi_grid=None, lambda_sector: Optional[Sector] = None):
        if lambda_sector is not None:
            self.lambda_sector = lambda_sector
        self.condition_report = check_symbol_conditions(
            self.symbols, xi_grid=xi_grid, lambda_sector=self.lambda_sector
        )
        return self.condition_report

    def require_checked(self):
        if self.condition_report is None:
            raise ConditionNotCheckedError(
                "run check_condition before solving"
            )
        if not self.condition_report.all_pass:
            raise AdmissibilityError(
                "admissibility check failed; solves are blocked"
            )

    # per-frequency scalar symbols on the solver grid
    def denominator_on_grid(self):
        return np.asarray(self.symbols.denominator(self.grid.xi), dtype=complex)

    def eta_on_grid(self):
        den = self.denominator_on_grid()
        n_vals = np.asarray(char_poly(self.symbols, self.grid.xi), dtype=complex)
        return n_vals / den

    def validate_field(self, f: Field):
        if f.grid != self.grid:
            raise InvalidArgumentError("field lives on a different grid")
        if f.dim != self.operator.dim:
            raise InvalidArgumentError(
                f"field dim {f.dim} != operator dim {self.operator.dim}"
            )


def solve_linear(problem: DiscretizedProblem, f: Field, lam: complex = 0.0) -> Field:
    """Solve (L + lambda) u = f by per-frequency resolvent solves."""
    problem.require_checked()
    problem.validate_field(f)
    if not problem.lambda_sector.contains(lam):
        raise InvalidArgumentError("lambda outside the admissible sector")
    den = problem.denominator_on_grid()
    eta = problem.eta_on_grid()
    fh = np.fft.fft(f.values, axis=0)
    rhs = fh / den[:, None]
    uh = problem.operator.resolvent_solve_many(eta + lam, rhs)
    return Field(problem.grid, np.fft.ifft(uh, axis=0))


def apply_operator(problem: DiscretizedProblem, u: Field, lam: complex = 0.0) -> Field:
    """(L + lambda) u via the same per-frequency symbols as ``solve_linear``."""
    problem.require_checked()
    problem.validate_field(u)
    den = problem.denominator_on_grid()
    n_vals = np.asarray(char_poly(problem.symbols, problem.grid.xi), dtype=complex)
    uh = np.fft.fft(u.values, axis=0)
    auh = np.fft.fft(problem.operator.apply_many(u.values), axis=0)
    out = (n_vals + lam)[:, None] * uh + den[:, None] * auh
    return Field(problem.grid, np.fft.ifft(out, axis=0))


@dataclass
class CoerciveReport:
    """Term-by-term left side of the a-priori estimate, normalized by ||f||_p.

    ``derivative_terms[k]`` holds |lambda|^(1-k/l) ||d^k u|| and
    ``convolution_terms[k]`` the matching |lambda|^(1-k/l) ||a_k * d^k u||.
    """

    lam: complex
    derivative_terms: List[float]
    convolution_terms: List[float]
    mu_conv_term: float
    au_term: float
    f_norm: float

    @property
    def total(self) -> float:
        return (
            sum(self.derivative_terms)
            + sum(self.convolution_terms)
            + self.mu_conv_term
            + self.au_term
        )

    @property
    def ratio(self) -> float:
        return self.total / self.f_norm if self.f_norm > 0 else math.inf


def coercive_report(
    problem: DiscretizedProblem, f: Field, lam: complex, u: Optional[Field] = None
) -> CoerciveReport:
    """Evaluate every term of the coercive estimate for (L + lambda) u = f."""
    if lp_norm(f, problem.p) == 0.0:
        raise InvalidArgumentError("coercive report needs nonzero forcing")
    if u is None:
        u = solve_linear(problem, f, lam)
    p = problem.p
    sym = problem.symbols
    w = lambda_weights(sym.l, lam)
    uh = np.fft.fft(u.values, axis=0)
    xi = problem.grid.xi

    deriv_terms, conv_terms = [], []
    for k in range(sym.l + 1):
        dk = spectral_derivative(u, k)
        deriv_terms.append(float(w[k]) * lp_norm(dk, p))
        ker = sym.a_kernels.get(k)
        if ker is None:
            conv_terms.append(0.0)
        else:
            symb = np.asarray(ker.fourier(xi), dtype=complex) * (1j * xi) ** k
            conv = Field(problem.grid, np.fft.ifft(symb[:, None] * uh, axis=0))
            conv_terms.append(float(w[k]) * lp_norm(conv, p))

    au = Field(problem.grid, problem.operator.apply_many(u.values))
    au_term = lp_norm(au, p)
    if sym.mu_kernel is not None:
        mu_symb = np.asarray(sym.mu_kernel.fourier(xi), dtype=complex)
        auh = np.fft.fft(au.values, axis=0)
        mu_conv = Field(problem.grid, np.fft.ifft(mu_symb[:, None] * auh, axis=0))
        mu_term = lp_norm(mu_conv, p)
    else:
        mu_term = 0.0

    return CoerciveReport(
        lam=lam,
        derivative_terms=deriv_terms,
        convolution_terms=conv_terms,
        mu_conv_term=mu_term,
        au_term=au_term,
        f_norm=lp_norm(f, p),
    )


@dataclass
class SweepTable:
    """Coercive-term table over a lambda sweep, one row per lambda.

    Rows are sorted by |lambda|.  ``resolvent_value`` is
    (1 + |lambda|) ||u||_p / ||f||_p.
    """

    l: int
    rows: List[dict]

    def header(self):
        cols = ["lambda_re", "lambda_im"]
        cols += [f"term_k{k}" for k in range(self.l + 1)]
        cols += [f"conv_k{k}" for k in range(self.l + 1)]
        cols += ["mu_conv_term", "au_term", "ratio", "resolvent_value"]
        return cols

    def to_csv(self, path):
        out = []
        for r in self.rows:
            row = [r["lambda"].real, r["lambda"].imag]
            row += r["derivative_terms"]
            row += r["convolution_terms"]
            row += [r["mu_conv_term"], r["au_term"], r["ratio"], r["resolvent_value"]]
            out.append(row)
        write_csv(path, self.header(), out)

    @property
    def max_resolvent_value(self) -> float:
        return max(r["resolvent_value"] for r in self.rows)

    @property
    def ratio_spread(self) -> float:
        ratios = [r["ratio"] for r in self.rows]
        return max(ratios) / min(ratios)


def lambda_sweep(problem: DiscretizedProblem, f: Field, lambdas) -> SweepTable:
    """Coercive report and resolvent value across a set of shifts."""
    rows = []
    lambdas = list(lambdas)
    if not lambdas:
        raise InvalidArgumentError("sweep needs at least one lambda")
    fn = lp_norm(f, problem.p)
    if fn == 0.0:
        raise InvalidArgumentError("sweep forcing must be nonzero")
    for lam in sorted(lambdas, key=lambda z: abs(complex(z))):
        lam = complex(lam)
        u = solve_linear(problem, f, lam)
        rep = coercive_report(problem, f, lam, u=u)
        rows.append(
            {
                "lambda": lam,
                "derivative_terms": rep.derivative_terms,
                "convolution_terms": rep.convolution_terms,
                "mu_conv_term": rep.mu_conv_term,
                "au_term": rep.au_term,
                "ratio": rep.ratio,
                "resolvent_value": (1.0 + abs(lam)) * lp_norm(u, problem.p) / fn,
            }
        )
    return SweepTable(l=problem.symbols.l, rows=rows)


def norm_equivalence(problem: DiscretizedProblem, fields: List[Field]):
    """Ratios ||L u||_p / ||u||_{W_p^l} over test fields.

    Zero fields are skipped.  Returns (ratios, spread); spread = max/min
    quantifies two-sided equivalence on the sampled set.
    """
    ratios = []
    for u in fields:
        wnorm = sobolev_norm(u, problem.symbols.l, problem.p, problem.operator)
        if wnorm == 0.0:
            continue
        lu = apply_operator(problem, u)
        ratios.append(lp_norm(lu, problem.p) / wnorm)
    if not ratios:
        raise InvalidArgumentError("every test field was zero")
    return ratios, max(ratios) / min(ratios)
