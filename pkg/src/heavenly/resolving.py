"""Resolving system of the group foliation: projected operators on the
invariant space (t, u_t, rho), the five residuals, the Jacobi identity and
the commuting-operators ansatz."""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as ex
from .errors import FVanishes, NegativeDiscriminant
from .jet import Jet

RVARS = ("t", "ut", "rho")
F_EPS = 1e-12


@dataclass(frozen=True)
class ResolvingPoint:
    t: float
    ut: float
    rho: float
    kappa: int

    @property
    def discriminant(self) -> float:
        return 2 * self.kappa * self.rho - self.ut ** 2


@dataclass(frozen=True)
class ResolvingFunctions:
    """The four unknowns of the resolving system, as expressions in
    (t, ut, rho).  lambda_bar must be the coefficient-conjugate partner of
    lambda_; use ansatz_functions or conjugate() to build it."""

    F: ex.Expr
    lambda_: ex.Expr
    lambda_bar: ex.Expr
    tau: ex.Expr
    requires_nonneg_discriminant: bool = False


class _Proj:
    """Projected operators delta, Y, Ybar acting on jets in (t, ut, rho)."""

    def __init__(self, rf: ResolvingFunctions, p: ResolvingPoint, order: int = 4):
        if rf.requires_nonneg_discriminant and p.discriminant < 0:
            raise NegativeDiscriminant(
                f"2*kappa*rho - ut^2 = {p.discriminant} < 0 at {p}")
        self.p = p
        self.order = order
        base = (complex(p.t), complex(p.ut), complex(p.rho))
        self.seed = {name: Jet.variable(i, base[i], 3, order, base)
                     for i, name in enumerate(RVARS)}
        at = [p.t, p.ut, p.rho]
        self.Fj = ex.eval_jetN(rf.F, at, order)
        self.lamj = ex.eval_jetN(rf.lambda_, at, order)
        self.lambj = ex.eval_jetN(rf.lambda_bar, at, order)
        self.tauj = ex.eval_jetN(rf.tau, at, order)
        # delta's middle coefficient kappa*rho - ut^2 as an exact jet
        self.heav_coeff = p.kappa * self.seed["rho"] - self.seed["ut"] * self.seed["ut"]

    def apply(self, op: str, g: Jet) -> Jet:
        m = g.order - 1
        if op == "delta":
            return (g.derivative(0)
                    + self.heav_coeff.truncated(m) * g.derivative(1)
                    + self.tauj.truncated(m) * g.derivative(2))
        if op == "Y":
            return g.derivative(1) + self.lamj.truncated(m) * g.derivative(2)
        if op == "Ybar":
            return g.derivative(1) + self.lambj.truncated(m) * g.derivative(2)
        raise ValueError(f"unknown projected operator {op!r}")

    def commutator(self, a: str, b: str, g: Jet) -> Jet:
        return self.apply(a, self.apply(b, g)) - self.apply(b, self.apply(a, g))


def projected_apply(op: str, target: ex.Expr, rf: ResolvingFunctions,
                    p: ResolvingPoint) -> complex:
    """Directional derivative of a target expression under delta, Y or Ybar."""
    proj = _Proj(rf, p, order=2)
    g = ex.eval_jetN(target, [p.t, p.ut, p.rho], 2)
    return proj.apply(op, g).value


@dataclass(frozen=True)
class ResolvingResiduals:
    r1: complex
    r2: complex
    r2_bar: complex
    r3: complex
    r4: complex

    def as_dict(self) -> dict[str, complex]:
        return {"R1": self.r1, "R2": self.r2, "R2bar": self.r2_bar,
                "R3": self.r3, "R4": self.r4}

    def max_abs(self) -> float:
        return max(abs(v) for v in self.as_dict().values())


def resolving_residuals(rf: ResolvingFunctions, p: ResolvingPoint) -> ResolvingResiduals:
    """The five residuals of the resolving system at one invariant point."""
    proj = _Proj(rf, p, order=2)
    F = proj.Fj.value
    if abs(F) < F_EPS:
        raise FVanishes(f"F = {F} at {p}")
    lam, lamb, tau = proj.lamj.value, proj.lambj.value, proj.tauj.value
    ut, rho, kappa = p.ut, p.rho, p.kappa

    dF = proj.apply("delta", proj.Fj).value
    dlam = proj.apply("delta", proj.lamj).value
    dlamb = proj.apply("delta", proj.lambj).value
    dtau = proj.apply("delta", proj.tauj).value
    Ytau = proj.apply("Y", proj.tauj).value
    Ybtau = proj.apply("Ybar", proj.tauj).value
    Ylamb = proj.apply("Y", proj.lambj).value
    Yblam = proj.apply("Ybar", proj.lamj).value

    r1 = dF - (kappa * (lam + lamb) - 5 * ut) * F
    r2 = dlam - Ytau - 2 * ut * lam + kappa * lam * lam
    r2b = dlamb - Ybtau - 2 * ut * lamb + kappa * lamb * lamb
    r3 = F * (Ylamb - Yblam) - (ut * rho + tau) * (lam - lamb)
    r4 = (F * (Ylamb + Yblam) + (ut * rho + tau) * (lam + lamb)
          - 2 * kappa * (dtau + 2 * F + 4 * ut * tau
                         + kappa * rho * rho + 2 * ut * ut * rho))
    return ResolvingResiduals(r1=r1, r2=r2, r2_bar=r2b, r3=r3, r4=r4)


def jacobi_residual(rf: ResolvingFunctions, p: ResolvingPoint) -> tuple[complex, complex, complex]:
    """[delta,[Y,Ybar]] + [Y,[Ybar,delta]] + [Ybar,[delta,Y]] on t, ut, rho."""
    proj = _Proj(rf, p, order=4)
    if abs(proj.Fj.value) < F_EPS:
        raise FVanishes(f"F = {proj.Fj.value} at {p}")

    def nested(a, b, c, g):
        # [a, [b, c]](g)
        inner = lambda h: proj.commutator(b, c, h)
        return (proj.apply(a, inner(g)) - inner(proj.apply(a, g)))

    out = []
    for name in RVARS:
        g = proj.seed[name]
        total = (nested("delta", "Y", "Ybar", g)
                 + nested("Y", "Ybar", "delta", g)
                 + nested("Ybar", "delta", "Y", g))
        out.append(total.value)
    return tuple(out)


# --- the [Y, Ybar] = 0 ansatz --------------------------------------------

def _c(v) -> ex.Node:
    return ex.Const(complex(v))


def ansatz_xi_theta(kappa: int) -> tuple[ex.Expr, ex.Expr]:
    """Characteristic variables xi = (2k rho - ut^2)/rho^2 and
    theta = t - (k/rho)(ut + sqrt(2k rho - ut^2)) as expressions."""
    t, ut, rho = (ex.Var("t"), ex.Var("ut"), ex.Var("rho"))
    disc = ex.Sub(ex.Mul(_c(2 * kappa), rho), ex.Pow(ut, _c(2)))
    xi = ex.Div(disc, ex.Pow(rho, _c(2)))
    theta = ex.Sub(t, ex.Mul(ex.Div(_c(kappa), rho),
                             ex.Add(ut, ex.Call("sqrt", disc))))
    return (ex.Expr(xi, RVARS), ex.Expr(theta, RVARS))


def ansatz_functions(phi: ex.Expr, kappa: int) -> ResolvingFunctions:
    """Resolving-system solution from the commuting-operators ansatz:
    F = rho^3 phi(xi, theta), tau = -ut rho,
    lambda = kappa ut + i sqrt(2 kappa rho - ut^2), lambda_bar its conjugate.

    phi is an expression in (xi, theta), real-valued on the sampled domain.
    """
    if kappa not in (1, -1):
        raise ValueError("kappa must be +1 or -1")
    t, ut, rho = (ex.Var("t"), ex.Var("ut"), ex.Var("rho"))
    xi_e, theta_e = ansatz_xi_theta(kappa)
    phi_sub = ex.substitute(phi, {"xi": xi_e, "theta": theta_e})
    F = ex.Expr(ex.Mul(ex.Pow(rho, _c(3)), phi_sub.root), RVARS)
    tau = ex.Expr(ex.Neg(ex.Mul(ut, rho)), RVARS)
    disc = ex.Sub(ex.Mul(_c(2 * kappa), rho), ex.Pow(ut, _c(2)))
    lam = ex.Expr(ex.Add(ex.Mul(_c(kappa), ut),
                         ex.Mul(_c(1j), ex.Call("sqrt", disc))), RVARS)
    lam_bar = ex.conjugate(lam)
    return ResolvingFunctions(F=F, lambda_=lam, lambda_bar=lam_bar, tau=tau,
                              requires_nonneg_discriminant=True)
