import random

import pytest

from heavenly import expr as ex
from heavenly.errors import FVanishes, NegativeDiscriminant
from heavenly.resolving import (ResolvingFunctions, ResolvingPoint,
                                ansatz_functions, ansatz_xi_theta,
                                jacobi_residual, projected_apply,
                                resolving_residuals)

P_REF = ResolvingPoint(t=1.0, ut=0.8, rho=0.4, kappa=1)
PHI_TEXTS = ("1", "2", "xi", "xi*theta", "exp(-xi)")


def phi_expr(text):
    return ex.parse(text, ("xi", "theta"))


def sample_points(kappa, n, seed=13):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        t = rng.uniform(-2, 2)
        ut = rng.uniform(-1, 1)
        rho = kappa * rng.uniform(0.55, 2.0)
        p = ResolvingPoint(t, ut, rho, kappa)
        if p.discriminant > 1e-6:
            out.append(p)
    return out


def test_characteristic_variables_at_reference_point():
    xi_e, theta_e = ansatz_xi_theta(1)
    env = {"t": 1.0, "ut": 0.8, "rho": 0.4}
    assert ex.evaluate_value(xi_e, env) == pytest.approx(1.0)
    assert ex.evaluate_value(theta_e, env) == pytest.approx(-2.0)


def test_ansatz_values_at_reference_point():
    rf = ansatz_functions(phi_expr("2"), 1)
    env = {"t": 1.0, "ut": 0.8, "rho": 0.4}
    assert ex.evaluate_value(rf.F, env) == pytest.approx(0.128)
    assert ex.evaluate_value(rf.tau, env) == pytest.approx(-0.32)
    assert ex.evaluate_value(rf.lambda_, env) == pytest.approx(0.8 + 0.4j)
    assert ex.evaluate_value(rf.lambda_bar, env) == pytest.approx(0.8 - 0.4j)


@pytest.mark.parametrize("text", PHI_TEXTS)
@pytest.mark.parametrize("kappa", (1, -1))
def test_resolving_residuals_vanish(text, kappa):
    rf = ansatz_functions(phi_expr(text), kappa)
    for p in sample_points(kappa, 10):
        try:
            res = resolving_residuals(rf, p)
        except FVanishes:
            continue  # phi can cross zero inside the sampling box
        assert res.max_abs() < 1e-9


@pytest.mark.parametrize("text", ("2", "xi*theta"))
@pytest.mark.parametrize("kappa", (1, -1))
def test_jacobi_identity_vanishes(text, kappa):
    rf = ansatz_functions(phi_expr(text), kappa)
    for p in sample_points(kappa, 6, seed=29):
        try:
            jac = jacobi_residual(rf, p)
        except FVanishes:
            continue
        assert max(abs(v) for v in jac) < 1e-8


def test_projected_operators_on_coordinates():
    rf = ansatz_functions(phi_expr("2"), 1)
    t = ex.parse("t", ("t", "ut", "rho"))
    ut = ex.parse("ut", ("t", "ut", "rho"))
    rho = ex.parse("rho", ("t", "ut", "rho"))
    # delta moves t with unit speed and u_t by the evolution equation
    assert projected_apply("delta", t, rf, P_REF) == pytest.approx(1.0)
    assert projected_apply("delta", ut, rf, P_REF) == pytest.approx(
        1 * 0.4 - 0.8 ** 2)
    assert projected_apply("delta", rho, rf, P_REF) == pytest.approx(-0.32)
    # Y and Ybar move u_t with unit speed and rho by lambda
    assert projected_apply("Y", ut, rf, P_REF) == pytest.approx(1.0)
    assert projected_apply("Y", rho, rf, P_REF) == pytest.approx(0.8 + 0.4j)
    assert projected_apply("Ybar", rho, rf, P_REF) == pytest.approx(0.8 - 0.4j)


def test_negative_discriminant_rejected():
    rf = ansatz_functions(phi_expr("2"), 1)
    with pytest.raises(NegativeDiscriminant):
        resolving_residuals(rf, ResolvingPoint(1.0, 2.0, 0.4, 1))


def test_f_vanishes_rejected():
    rf = ansatz_functions(phi_expr("0"), 1)
    with pytest.raises(FVanishes):
        resolving_residuals(rf, P_REF)


def test_perturbed_tau_breaks_the_system():
    rf = ansatz_functions(phi_expr("2"), 1)
    bumped = ResolvingFunctions(
        F=rf.F, lambda_=rf.lambda_, lambda_bar=rf.lambda_bar,
        tau=ex.Expr(ex.Add(rf.tau.root, ex.Const(0.1 + 0j)),
                    rf.tau.variables),
        requires_nonneg_discriminant=True)
    res = resolving_residuals(bumped, P_REF)
    assert res.max_abs() > 1e-3


def test_conjugate_partner_structure():
    rf = ansatz_functions(phi_expr("xi"), 1)
    for p in sample_points(1, 5, seed=3):
        env = {"t": p.t, "ut": p.ut, "rho": p.rho}
        lam = ex.evaluate_value(rf.lambda_, env)
        lamb = ex.evaluate_value(rf.lambda_bar, env)
        assert lamb == pytest.approx(lam.conjugate())
