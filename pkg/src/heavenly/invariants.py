"""Differential invariants of the conformal subgroup and the operators
delta, Delta, Delta-bar, Y, Y-bar of invariant differentiation.

Composite invariants are represented as jets built from the u-jet of a
field, so total derivatives are coefficient reads, never symbolic.  Each
operator application consumes one order of the jet; the fourth-order
ceiling of the jet engine is what limits commutators on rho.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import EtaVanishes, OrderExceeded
from .fields import Point, SolutionField, eval_u
from .jet import Jet

#: imaginary parts of physically real invariants below this are truncated to 0
REALITY_TOL = 1e-10

INVARIANT_NAMES = ("T", "Ut", "Utt", "Rho", "Eta", "Sigma", "SigmaBar",
                   "Tau", "Lambda", "LambdaBar")
OPERATORS = ("delta", "Delta", "DeltaBar", "Y", "Ybar")


@dataclass(frozen=True)
class InvariantSet:
    """Values of the differential invariants at one point.

    lambda_/lambda_bar are None when eta vanishes (F0 families); sigma is
    still reported in that case.
    """

    t: float
    u_t: float
    u_tt: float
    rho: float
    eta: float
    sigma: complex
    sigma_bar: complex
    tau: float
    lambda_: complex | None
    lambda_bar: complex | None

    @property
    def eta_vanishes(self) -> bool:
        return self.lambda_ is None


def _realify(w: complex) -> float | complex:
    if abs(w.imag) < REALITY_TOL:
        return w.real
    return w


class JetCalculus:
    """Invariant jets and operator applications derived from one u-jet."""

    def __init__(self, field: SolutionField, p: Point, order: int = 4):
        self.u = eval_u(field, p, order)
        self.order = order
        self.p = p
        self.kappa = field.kappa
        k = order
        self.exp_mu = (-self.u.truncated(k - 2)).exp() if k >= 2 else None
        self.u_zt = self.u.derivative(0).derivative(2) if k >= 2 else None
        self.u_zbt = self.u.derivative(1).derivative(2) if k >= 2 else None

    # -- invariant jets ----------------------------------------------------

    def invariant_jet(self, name: str) -> Jet:
        """Jet of the named invariant at the maximal available order."""
        u, k = self.u, self.order
        if name == "T":
            return Jet.variable(2, self.p.t, 3, k, u.base)
        if name == "Ut":
            return u.derivative(2)
        if name == "Utt":
            return u.derivative(2).derivative(2)
        if name == "Rho":
            return self.exp_mu * u.derivative(0).derivative(1)
        if name == "Eta":
            return self.exp_mu * self.u_zt * self.u_zbt
        if name == "Uz":
            return u.derivative(0)
        raise ValueError(f"no jet construction for invariant {name!r}")

    def value(self, name: str) -> complex:
        return self.invariant_jet(name).value

    # -- operators ---------------------------------------------------------

    def apply(self, op: str, g: Jet) -> Jet:
        """One operator of invariant differentiation applied to a jet."""
        if g.order < 1:
            raise OrderExceeded("operand jet has no first-order coefficients")
        m = g.order - 1
        if op == "delta":
            return g.derivative(2)
        if op == "Delta":
            return self.exp_mu.truncated(m) * self.u_zbt.truncated(m) * g.derivative(0)
        if op == "DeltaBar":
            return self.exp_mu.truncated(m) * self.u_zt.truncated(m) * g.derivative(1)
        if op in ("Y", "Ybar"):
            eta = self.invariant_jet("Eta").truncated(m)
            if abs(eta.value) < 1e-14:
                raise EtaVanishes("eta = 0: Y and Ybar are undefined")
            inner = self.apply("Delta" if op == "Y" else "DeltaBar", g)
            return inner / eta
        raise ValueError(f"unknown operator {op!r}")


def pde_residual(field: SolutionField, p: Point) -> complex:
    """u_{z zbar} - kappa e^u (u_tt + u_t^2) at the point."""
    J = eval_u(field, p, 2)
    u_zzb = J.partial((1, 1, 0))
    u_t = J.partial((0, 0, 1))
    u_tt = J.partial((0, 0, 2))
    return u_zzb - field.kappa * cmath.exp(J.value) * (u_tt + u_t * u_t)


def liouville_residual(field: SolutionField, p: Point) -> complex:
    """Gamma_{z zbar} - 2 kappa e^Gamma for a standalone Liouville field."""
    J = eval_u(field, p, 2)
    return J.partial((1, 1, 0)) - 2.0 * field.kappa * cmath.exp(J.value)


def invariants_at(field: SolutionField, p: Point, kappa: int | None = None) -> InvariantSet:
    """Compute {t, u_t, u_tt, rho, eta, sigma, sigma_bar, tau, lambda, lambda_bar}."""
    calc = JetCalculus(field, p, order=4)
    u_t = _realify(calc.value("Ut"))
    u_tt = _realify(calc.value("Utt"))
    rho_jet = calc.invariant_jet("Rho")
    rho = _realify(rho_jet.value)
    eta = _realify(calc.value("Eta"))
    sigma = calc.apply("Delta", rho_jet).value
    sigma_bar = calc.apply("DeltaBar", rho_jet).value
    tau = _realify(calc.apply("delta", rho_jet).value)
    if abs(eta) < 1e-14:
        lam = lam_bar = None
    else:
        lam = sigma / eta
        lam_bar = sigma_bar / eta
    return InvariantSet(t=p.t, u_t=u_t, u_tt=u_tt, rho=rho, eta=eta,
                        sigma=sigma, sigma_bar=sigma_bar, tau=tau,
                        lambda_=lam, lambda_bar=lam_bar)


def invariant_pde_residual(s: InvariantSet, kappa: int) -> float:
    """Residual of u_tt = kappa rho - u_t^2."""
    return s.u_tt - (kappa * s.rho - s.u_t ** 2)


def apply_inv_op(op: str, target: str, field: SolutionField, p: Point) -> complex:
    """Value of one operator of invariant differentiation on a named invariant."""
    calc = JetCalculus(field, p, order=4)
    return calc.apply(op, calc.invariant_jet(target)).value


#: commutator pairs with their structure-coefficient right-hand sides
COMMUTATOR_PAIRS = (("delta", "Delta"), ("delta", "DeltaBar"), ("Delta", "DeltaBar"),
                    ("delta", "Y"), ("delta", "Ybar"), ("Y", "Ybar"))


def commutator_residual(pair: tuple[str, str], target: str,
                        field: SolutionField, p: Point, kappa: int | None = None) -> complex:
    """[A, B](target) minus the commutator algebra's right-hand side.

    Vanishes on solutions of the heavenly equation; requires order-4 jets.
    """
    kappa = field.kappa if kappa is None else kappa
    calc = JetCalculus(field, p, order=4)
    a, b = pair
    g = calc.invariant_jet(target)
    lhs = (calc.apply(a, calc.apply(b, g)) - calc.apply(b, calc.apply(a, g))).value

    inv = invariants_at(field, p, kappa)
    eta, rho, tau, u_t = inv.eta, inv.rho, inv.tau, inv.u_t
    sigma, sigma_bar = inv.sigma, inv.sigma_bar
    eta_jet = calc.invariant_jet("Eta")
    A_of = {name: calc.apply(name, g).value for name in set(pair)}
    if pair == ("delta", "Delta"):
        rhs = (kappa * sigma_bar / eta - 3 * u_t) * A_of["Delta"]
    elif pair == ("delta", "DeltaBar"):
        rhs = (kappa * sigma / eta - 3 * u_t) * A_of["DeltaBar"]
    elif pair == ("Delta", "DeltaBar"):
        d_eta = calc.apply("Delta", eta_jet).value
        db_eta = calc.apply("DeltaBar", eta_jet).value
        rhs = ((d_eta / eta - (u_t * rho + tau)) * A_of["DeltaBar"]
               - (db_eta / eta - (u_t * rho + tau)) * A_of["Delta"])
    elif pair == ("delta", "Y"):
        dt_eta = calc.apply("delta", eta_jet).value
        rhs = (kappa * inv.lambda_bar - 3 * u_t - dt_eta / eta) * A_of["Y"]
    elif pair == ("delta", "Ybar"):
        dt_eta = calc.apply("delta", eta_jet).value
        rhs = (kappa * inv.lambda_ - 3 * u_t - dt_eta / eta) * A_of["Ybar"]
    elif pair == ("Y", "Ybar"):
        rhs = ((u_t * rho + tau) / eta) * (A_of["Y"] - A_of["Ybar"])
    else:
        raise ValueError(f"unknown commutator pair {pair!r}")
    return lhs - rhs
