import numpy as np
import pytest

from hypercauchy.admissibility import CRConditionSet
from hypercauchy.algebra import AlgElem, builtin
from hypercauchy.families import dbar_conditions, fueter_conditions, gallery
from hypercauchy.solutions import (
    AlgPolynomial,
    apply_cr_operator,
    monomial_exponents,
    polynomial_solution_basis,
)


def _complex_z():
    table = builtin("complex")
    i = AlgPolynomial.constant(table, 2, [0.0, 1.0])
    return AlgPolynomial.coordinate(table, 2, 0) + AlgPolynomial.coordinate(
        table, 2, 1
    ) * i


def _fueter_zeta(l):
    table = builtin("quaternion")
    e = np.eye(4)
    return AlgPolynomial.coordinate(table, 4, l) * AlgPolynomial.constant(
        table, 4, e[0]
    ) - AlgPolynomial.coordinate(table, 4, 0) * AlgPolynomial.constant(table, 4, e[l])


def test_monomial_layout_graded():
    layout = monomial_exponents(2, 2)
    assert layout == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    totals = [sum(e) for e in layout]
    assert totals == sorted(totals)


def test_polynomial_arithmetic_matches_complex_numbers():
    z = _complex_z()
    f = z * z * z + 2.0 * z
    x = np.array([0.3, 0.1])
    w = complex(*x)
    expected = w**3 + 2 * w
    np.testing.assert_allclose(
        f.evaluate(x).coeffs, [expected.real, expected.imag], atol=1e-14
    )
    assert f.degree == 3
    # d/dx0 (z^3) = 3 z^2
    df = (z * z * z).partial_derivative(0)
    np.testing.assert_allclose(
        df.evaluate(x).coeffs, [(3 * w**2).real, (3 * w**2).imag], atol=1e-14
    )


def test_eval_batch_matches_pointwise():
    f = _fueter_zeta(2)
    rng = np.random.default_rng(4)
    X = rng.normal(size=(15, 4))
    batch = f.eval_batch(X)
    for t in range(15):
        np.testing.assert_allclose(batch[t], f.evaluate(X[t]).coeffs, atol=1e-14)


def test_duplicate_monomials_merge():
    table = builtin("complex")
    p = AlgPolynomial(table, [[1, 0], [1, 0]], [[1.0, 0.0], [2.0, 0.0]])
    assert p.exponents.shape == (1, 2)
    np.testing.assert_allclose(p.coeffs, [[3.0, 0.0]])


@pytest.mark.parametrize("degree", [0, 1, 2, 3, 4])
def test_dbar_nullspace_dimension(degree):
    # real dimension of holomorphic polynomials of degree <= d is 2(d+1)
    basis = polynomial_solution_basis(dbar_conditions(), degree)
    assert len(basis) == 2 * (degree + 1)


def test_dbar_degree2_contains_holomorphic_monomials():
    basis = polynomial_solution_basis(dbar_conditions(), 2)
    table = builtin("complex")
    z = _complex_z()
    i = AlgPolynomial.constant(table, 2, [0.0, 1.0])
    one = AlgPolynomial.constant(table, 2, [1.0, 0.0])
    for f in (one, i, z, i * z, z * z, i * (z * z)):
        assert basis.contains(f)
    # anti-holomorphic conj(z) is not a solution
    conj = AlgPolynomial.coordinate(table, 2, 0) - AlgPolynomial.coordinate(
        table, 2, 1
    ) * i
    assert not basis.contains(conj)


def test_fueter_degree1_contains_zeta():
    basis = polynomial_solution_basis(fueter_conditions(), 1)
    assert len(basis) == 16
    for l in (1, 2, 3):
        zeta = _fueter_zeta(l)
        assert basis.contains(zeta)
        worst = max(
            t.norm()
            for t in apply_cr_operator(fueter_conditions(), zeta, np.ones(4) / 3)
        )
        assert worst <= 1e-14


def test_full_derivative_conditions_only_constants():
    # q = n independent real directions over the 1-dim algebra
    table = builtin("reals")
    a = np.zeros((3, 3, 1))
    for m in range(3):
        a[m, m, 0] = 1.0
    C = CRConditionSet(table, 3, 3, a)
    for degree in (1, 2):
        assert len(polynomial_solution_basis(C, degree)) == 1


def test_nullspace_dimension_monotone_in_degree():
    for build in (dbar_conditions, fueter_conditions):
        C = build()
        dims = [len(polynomial_solution_basis(C, d)) for d in range(4)]
        assert all(d2 >= d1 for d1, d2 in zip(dims, dims[1:]))


def test_apply_cr_operator_examples():
    C = dbar_conditions()
    table = C.table
    x = np.array([0.3, 0.1])
    const = AlgPolynomial.constant(table, 2, [2.0, -1.0])
    assert all(t.norm() == 0.0 for t in apply_cr_operator(C, const, x))
    # f = (first coordinate)^2 * e_0: condition value is 2 x_first * e_0
    y1sq = AlgPolynomial.coordinate(table, 2, 0) * AlgPolynomial.coordinate(
        table, 2, 0
    )
    (t0,) = apply_cr_operator(C, y1sq, x)
    np.testing.assert_allclose(t0.coeffs, [0.6, 0.0], atol=1e-14)


def test_apply_cr_operator_finite_differences_on_callable():
    C = dbar_conditions()

    def f(y):
        return np.array([np.exp(y[0]) * np.cos(y[1]), np.exp(y[0]) * np.sin(y[1])])

    worst = max(t.norm() for t in apply_cr_operator(C, f, np.array([0.3, 0.1])))
    assert worst < 1e-8  # h^2 accuracy of the central difference


def test_basis_elements_satisfy_conditions_at_random_points():
    for case in gallery():
        if not case.expected_feasible:
            continue
        C = case.build()
        if C.n > 4:
            continue  # keep the sweep at desk scale
        basis = polynomial_solution_basis(C, 2)
        assert basis.max_violation(samples=50, seed=1) <= 1e-10, case.name


def test_degree_cap_enforced():
    with pytest.raises(ValueError):
        polynomial_solution_basis(dbar_conditions(), 7)
