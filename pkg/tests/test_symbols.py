"""Symbol algebra: characteristic polynomials, reduced symbols, multiplier
families, sector membership, admissibility checks and Mikhlin bounds."""

import numpy as np
import pytest

from coesolve import (
    Kernel,
    MultiplierFamily,
    Sector,
    SymbolSet,
    char_poly,
    check_symbol_conditions,
    lambda_weights,
    make_xi_grid,
    mikhlin_bound,
    reduced_symbol,
    scalar_prefactor,
)
from coesolve.errors import (
    DegenerateSymbolError,
    InvalidArgumentError,
    SymbolBlowupError,
)
from coesolve.operators import DenseMatrixOperator


def second_order_symbols():
    """The workhorse example: N(xi) = xi^2 + (i xi)^2 a_hat_2, mu = 0, nu = 1."""
    return SymbolSet(
        l=2,
        b=(0.0, 0.0, -1.0),
        a_kernels={2: Kernel("exponential-paper", rate=1.0)},
        nu=1.0,
    )


# ---------------------------------------------------------------------------
# characteristic polynomial and reduced symbol
# ---------------------------------------------------------------------------


def test_char_poly_pure_second_order():
    sym = SymbolSet(l=2, b=(0.0, 0.0, -1.0), nu=1.0)
    # -(i xi)^2 = xi^2
    assert char_poly(sym, 2.0) == pytest.approx(4.0)
    assert char_poly(sym, 0.0) == 0.0


def test_char_poly_with_kernel_coefficient():
    sym = second_order_symbols()
    # b_2 + a_hat_2(1) = -1 + 2i/(1+1) = -1 + i, times (i*1)^2 = -1
    assert char_poly(sym, 1.0) == pytest.approx(1.0 - 1.0j)


def test_char_poly_at_zero_is_constant_term():
    sym = SymbolSet(
        l=1,
        b=(0.5, 1.0),
        a_kernels={0: Kernel("dirac-scaled", amplitude=0.25)},
        nu=1.0,
    )
    assert char_poly(sym, 0.0) == pytest.approx(0.75)


def test_char_poly_vectorizes():
    sym = second_order_symbols()
    xi = np.array([0.5, 1.0, 2.0])
    vals = char_poly(sym, xi)
    assert vals.shape == (3,)
    assert vals[1] == pytest.approx(1.0 - 1.0j)


def test_reduced_symbol_divides_by_denominator():
    sym = second_order_symbols()
    # nu + mu_hat = 1, so eta = N
    assert reduced_symbol(sym, 1.0) == pytest.approx(1.0 - 1.0j)


def test_reduced_symbol_zero_order_problem():
    sym = SymbolSet(l=0, b=(1.0,), nu=1.0)
    assert reduced_symbol(sym, 3.0) == pytest.approx(1.0)


def test_reduced_symbol_degenerate_denominator():
    sym = SymbolSet(l=0, b=(1.0,), nu=0.0)
    with pytest.raises(DegenerateSymbolError):
        reduced_symbol(sym, 1.0)


def test_symbol_set_validation():
    with pytest.raises(InvalidArgumentError):
        SymbolSet(l=2, b=(0.0, 1.0), nu=1.0)  # needs l + 1 coefficients
    with pytest.raises(InvalidArgumentError):
        SymbolSet(l=-1, b=(), nu=1.0)
    with pytest.raises(InvalidArgumentError):
        SymbolSet(l=1, b=(0.0, 1.0), a_kernels={5: Kernel("gaussian")}, nu=1.0)


# ---------------------------------------------------------------------------
# lambda weights and scalar prefactors
# ---------------------------------------------------------------------------


def test_lambda_weights_interpolate_between_lambda_and_one():
    assert lambda_weights(2, 4.0) == pytest.approx([4.0, 2.0, 1.0])


def test_lambda_weights_zero_order():
    assert lambda_weights(0, 5.0) == pytest.approx([5.0])


def test_lambda_weights_use_modulus():
    assert lambda_weights(2, 4.0j) == pytest.approx([4.0, 2.0, 1.0])


@pytest.mark.parametrize("l", [1, 2, 4])
def test_weighted_polynomial_dominated_by_order(l):
    """|sum_k |lambda|^{1-k/l} (i xi)^k| <= l (|lambda| + |xi|^l) pointwise."""
    xi = np.concatenate([-np.geomspace(1e-2, 1e3, 50), np.geomspace(1e-2, 1e3, 50)])
    lams = np.geomspace(1e-2, 1e4, 50) * np.exp(1j * np.linspace(-1.5, 1.5, 50))
    for lam in lams.ravel():
        w = np.asarray(lambda_weights(l, lam))
        s = sum(w[k] * (1j * xi) ** k for k in range(l + 1))
        bound = l * (abs(lam) + np.abs(xi) ** l)
        assert np.all(np.abs(s) <= bound * (1.0 + 1e-12))


def test_scalar_prefactor_indices():
    sym = SymbolSet(l=2, b=(1.0, 1.0, 1.0), nu=1.0)
    lam, xi = 4.0, 1.0
    assert scalar_prefactor(sym, 0, xi, lam) == pytest.approx(1.0)
    # sum_k w_k (i xi)^k = 4 + 2i + (i)^2 = 3 + 2i
    assert scalar_prefactor(sym, 1, xi, lam) == pytest.approx(3.0 + 2.0j)
    assert scalar_prefactor(sym, 2, xi, lam) == pytest.approx(1.0)
    # family 3 pairs the weights with the kernel symbols; none here -> 0
    assert scalar_prefactor(sym, 3, xi, lam) == pytest.approx(0.0)
    # family 4 carries mu_hat; no mu kernel -> 0
    assert scalar_prefactor(sym, 4, xi, lam) == pytest.approx(0.0)
    assert scalar_prefactor(sym, "sigma", xi, 0.0) == pytest.approx(1.0)
    with pytest.raises(InvalidArgumentError):
        scalar_prefactor(sym, 7, xi, lam)


def test_multiplier_family_matrix_matches_manual_inverse():
    sym = second_order_symbols()
    op = DenseMatrixOperator(np.diag([1.0, 2.0]))
    lam, xi = 10.0, 1.5
    eta = reduced_symbol(sym, xi)
    dense = op.as_dense()
    inv = np.linalg.inv(dense + (eta + lam) * np.eye(2))
    fam0 = MultiplierFamily(sym, 0, lam, operator=op)
    assert np.allclose(fam0.matrix(xi), inv, atol=1e-12)
    # index 2 composes with the operator on the left
    fam2 = MultiplierFamily(sym, 2, lam, operator=op)
    assert np.allclose(fam2.matrix(xi), dense @ inv, atol=1e-12)


def test_multiplier_family_needs_operator_for_matrix():
    fam = MultiplierFamily(second_order_symbols(), 0, 1.0)
    with pytest.raises(InvalidArgumentError):
        fam.matrix(1.0)


def test_scalar_symbol_of_family():
    sym = SymbolSet(l=0, b=(1.0,), nu=1.0)
    fam = MultiplierFamily(sym, "sigma", 2.0)
    # (1 + lam) / (1 + eta + lam) with eta = 1
    assert fam.scalar_symbol(1.0) == pytest.approx(3.0 / 4.0)


# ---------------------------------------------------------------------------
# sectors
# ---------------------------------------------------------------------------


def test_sector_membership():
    sec = Sector(np.pi / 4)
    assert sec.contains(1.0)
    assert sec.contains(1.0 + 1.0j)  # on the boundary ray
    assert sec.contains(0.0)
    assert not sec.contains(1.0 + 2.0j)
    assert not sec.contains(-1.0)


def test_sector_boundary_tolerance():
    sec = Sector(np.pi / 4)
    assert sec.contains(np.exp(1j * (np.pi / 4 + 1e-10)))


def test_sector_angle_must_be_less_than_pi():
    with pytest.raises(InvalidArgumentError):
        Sector(np.pi)
    with pytest.raises(InvalidArgumentError):
        Sector(-0.1)


# ---------------------------------------------------------------------------
# xi grids
# ---------------------------------------------------------------------------


def test_xi_grid_is_symmetric_and_sorted():
    grid = make_xi_grid(per_side=50)
    assert grid.shape == (100,)
    assert np.all(np.diff(grid) > 0)
    assert np.allclose(grid, -grid[::-1], atol=0.0)
    assert np.all(grid != 0.0)


def test_xi_grid_validation():
    with pytest.raises(InvalidArgumentError):
        make_xi_grid(per_side=1)
    with pytest.raises(InvalidArgumentError):
        make_xi_grid(lo=1.0, hi=0.5)
    with pytest.raises(InvalidArgumentError):
        make_xi_grid(lo=0.0)


def test_doubled_grid_contains_the_coarse_nodes():
    coarse = make_xi_grid(per_side=600)
    fine = make_xi_grid(per_side=1199)
    for v in coarse[::17]:
        assert np.min(np.abs(fine - v)) <= 1e-9 * abs(v)


# ---------------------------------------------------------------------------
# admissibility report
# ---------------------------------------------------------------------------


def test_condition_report_second_order_with_odd_kernel():
    report = check_symbol_conditions(second_order_symbols())
    assert abs(report.c_mu - 1.0) < 1e-12
    assert 0.99 <= report.c_n <= 1.01
    assert abs(report.phi1 - np.pi / 4) < 0.02
    assert report.all_pass
    d = report.to_dict()
    assert d["pass"] == [True, True, True, True]
    assert d["all_pass"]


def test_condition_report_fails_without_zero_order_part():
    sym = SymbolSet(l=2, b=(0.0, 0.0, -1.0), nu=0.0)
    report = check_symbol_conditions(sym)
    assert report.c_mu == 0.0
    assert not report.pass1
    assert not report.all_pass


def test_condition_report_fails_for_odd_principal_part():
    # N(xi) = i xi is not bounded below by |xi|^2, and arg eta fills the
    # closed half circle, so ellipticity and the angle clause both fail.
    sym = SymbolSet(l=2, b=(0.0, 1.0, 0.0), nu=1.0)
    report = check_symbol_conditions(sym)
    assert report.c_n == 0.0
    assert not report.pass2
    assert not report.pass3
    assert not report.all_pass


def test_condition_constants_move_monotonically_under_refinement():
    sym = second_order_symbols()
    coarse = check_symbol_conditions(sym, xi_grid=make_xi_grid(per_side=600))
    fine = check_symbol_conditions(sym, xi_grid=make_xi_grid(per_side=1199))
    # infima can only fall, suprema can only rise on the doubled grid
    assert fine.c_mu <= coarse.c_mu + 1e-12
    assert fine.c_n <= coarse.c_n + 1e-12
    assert fine.phi1 >= coarse.phi1 - 1e-12
    assert fine.c1 >= coarse.c1 - 1e-12


def test_random_even_order_problems_are_admissible():
    """Seeded property check: elliptic principal parts with small kernel
    perturbations and positive nu stay admissible."""
    rng = np.random.default_rng(7)
    for _ in range(10):
        m = int(rng.integers(1, 3))
        l = 2 * m
        b = [0.0] * (l + 1)
        b[l] = -1.0 if m % 2 else 1.0
        nu = float(rng.uniform(0.5, 2.0))
        amp = float(rng.uniform(0.0, 0.2))
        sym = SymbolSet(
            l=l,
            b=tuple(b),
            a_kernels={l: Kernel("exponential-paper", rate=1.0, amplitude=amp)},
            nu=nu,
        )
        report = check_symbol_conditions(sym)
        assert report.all_pass, (m, nu, amp)


def test_condition_check_requires_usable_grid():
    sym = second_order_symbols()
    with pytest.raises(InvalidArgumentError):
        check_symbol_conditions(sym, xi_grid=np.array([1.0]))
    with pytest.raises(InvalidArgumentError):
        check_symbol_conditions(sym, xi_grid=np.array([-1.0, 0.0, 1.0]))


# ---------------------------------------------------------------------------
# Mikhlin bounds
# ---------------------------------------------------------------------------


def test_mikhlin_bound_of_constant_symbol():
    grid = make_xi_grid(per_side=200)
    val = mikhlin_bound(lambda h, xi: (2.0 + 0.0j) * np.ones_like(xi), [0.0], grid)
    assert val == pytest.approx(2.0)


def test_mikhlin_bound_of_smooth_cutoff():
    grid = make_xi_grid(per_side=400)
    val = mikhlin_bound(lambda h, xi: xi**2 / (1.0 + xi**2) + 0.0j, [0.0], grid)
    # sup |m| = 1 and sup |xi m'| = 3 sqrt(3) / 8 < 1
    assert abs(val - 1.0) < 1e-3


def test_mikhlin_bound_sign_symbol():
    grid = make_xi_grid(per_side=200)
    val = mikhlin_bound(lambda h, xi: 1j * xi / np.abs(xi), [0.0], grid)
    assert val == pytest.approx(1.0, abs=1e-6)


def test_mikhlin_bound_uses_closed_form_derivative_when_given():
    grid = make_xi_grid(per_side=200)
    val = mikhlin_bound(
        lambda h, xi: xi + 0.0j,
        [0.0],
        grid,
        deriv_fns=lambda h, xi: np.ones_like(xi, dtype=complex),
    )
    # sup over the grid of max(|xi|, |xi * 1|) = hi
    assert val == pytest.approx(1e3)


def test_mikhlin_bound_detects_blowup():
    grid = np.array([-2.0, -1.0, 1.0, 2.0])

    def bad(h, xi):
        with np.errstate(divide="ignore"):
            return 1.0 / (xi - 1.0)

    with pytest.raises(SymbolBlowupError) as err:
        mikhlin_bound(bad, [0.5], grid)
    assert err.value.h == 0.5
    assert err.value.xi == pytest.approx(1.0)


def test_mikhlin_bound_rejects_grid_with_origin():
    grid = np.array([-1.0, 0.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        mikhlin_bound(lambda h, xi: xi + 0.0j, [0.0], grid)


def test_resolvent_symbol_bound_stable_in_lambda():
    """The scaled resolvent symbol (1 + lam)/(1 + eta + lam) should carry a
    Mikhlin bound that moves by at most a few percent when the lambda range
    is extended by a decade."""
    sym = second_order_symbols()
    grid = make_xi_grid(per_side=400)

    def symbol(lam, xi):
        return (1.0 + lam) / (1.0 + reduced_symbol(sym, xi) + lam)

    b3 = mikhlin_bound(symbol, list(np.geomspace(1.0, 1e3, 10)), grid)
    b4 = mikhlin_bound(symbol, list(np.geomspace(1.0, 1e4, 13)), grid)
    assert b4 >= b3 - 1e-12
    assert b4 <= 1.05 * b3
