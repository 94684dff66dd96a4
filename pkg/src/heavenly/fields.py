"""Closed-form solution families of u_{z zbar} = kappa (e^u)_{tt}.

Each family builds the jet of u at a point by composing expression jets
with the truncated-Taylor engine.  Jets live in the variables (z, zbar, t)
with zbar = conj(z) fixed on the physical slice; domain conditions are
checked at evaluation time because they depend on the sampled point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field

from . import expr as ex
from .errors import DomainError, FamilyParamMismatch, SingularMap
from .jet import Jet, compose3, compose_series

#: variable ordering of all field jets
VZ, VZB, VT = 0, 1, 2

SINGULAR_TOL = 1e-8


@dataclass(frozen=True)
class Point:
    t: float
    z: complex


@dataclass(frozen=True)
class SolutionField:
    """Evaluator for one solution family (or a conformal transform of one)."""

    family: str
    kappa: int
    params: dict = dc_field(default_factory=dict)
    _builder: object = None  # (z0, zb0, t0, order) -> Jet

    def jet_at(self, z0: complex, zb0: complex, t0: float, order: int) -> Jet:
        """u-jet at a possibly off-slice point (zbar independent of z)."""
        return self._builder(z0, zb0, t0, order)

    def value_at(self, z0: complex, zb0: complex, t0: float) -> complex:
        return self._builder(z0, zb0, t0, 0).value


def _seeds(z0: complex, zb0: complex, t0: float, order: int):
    base = (complex(z0), complex(zb0), complex(t0))
    Z = Jet.variable(VZ, z0, 3, order, base)
    Zb = Jet.variable(VZB, zb0, 3, order, base)
    T = Jet.variable(VT, t0, 3, order, base)
    return Z, Zb, T


def _expr_at(e: ex.Expr, seed: Jet) -> Jet:
    """Holomorphic expression of one variable evaluated on a seed jet."""
    return ex.evaluate(e, {e.variables[0]: seed})


def _expr_deriv_at(e: ex.Expr, seed: Jet) -> Jet:
    """Jet of e' on a seed jet, via a one-order-higher univariate expansion."""
    z0 = seed.value
    uni = ex.eval_jet1(e, z0, seed.order + 1)
    dcoeffs = [(k + 1) * uni.coefficient((k + 1,)) for k in range(seed.order + 1)]
    return compose_series(dcoeffs, seed - z0)


def _bar(e: ex.Expr) -> ex.Expr:
    return ex.conjugate(e)


def _ln(j: Jet, what: str) -> Jet:
    try:
        return j.log()
    except Exception as err:
        raise DomainError(f"log argument singular in {what}: {err}") from err


def _check_nonzero(value: complex, what: str):
    if abs(value) < SINGULAR_TOL:
        raise DomainError(f"{what} vanishes at the evaluation point")


def _liouville_gamma(c: ex.Expr, kappa: int, Z: Jet, Zb: Jet) -> Jet:
    cj = _expr_at(c, Z)
    cbj = _expr_at(_bar(c), Zb)
    cd = _expr_deriv_at(c, Z)
    cbd = _expr_deriv_at(_bar(c), Zb)
    if kappa == 1:
        denom = cj + cbj
        _check_nonzero(denom.value, "c(z) + cbar(zbar)")
    else:
        denom = cj * cbj + 1.0
        _check_nonzero(denom.value, "c(z)*cbar(zbar) + 1")
    return _ln(cd, "c'") + _ln(cbd, "cbar'") - 2.0 * _ln(denom, "Liouville denominator")


def make_solution(family: str, params: dict, kappa: int) -> SolutionField:
    """Construct a solution-family evaluator.

    Families: f0 (C), f0general (l, C1, C2, a), noninv (b),
    general_noninv (b, c), confinv (f, A, a), liouville (c).
    """
    if kappa not in (1, -1):
        raise FamilyParamMismatch(f"kappa must be +1 or -1, got {kappa}")

    def need(*names):
        for n in names:
            if n not in params:
                raise FamilyParamMismatch(f"family {family!r} requires parameter {n!r}")

    if family == "f0":
        need("C")
        C = float(params["C"])

        def build(z0, zb0, t0, order):
            Z, Zb, T = _seeds(z0, zb0, t0, order)
            if t0 * t0 + C <= 0:
                raise DomainError("t^2 + C must be positive")
            core = _ln(T * T + C, "t^2 + C")
            if kappa == 1:
                _check_nonzero(z0 + zb0, "z + zbar")
                return core - 2.0 * _ln(Z + Zb, "z + zbar")
            _check_nonzero(z0 * zb0 + 1, "z*zbar + 1")
            return core - 2.0 * _ln(Z * Zb + 1.0, "z*zbar + 1")

    elif family == "f0general":
        need("l", "C1", "C2", "a")
        l = float(params["l"])
        C1, C2 = float(params["C1"]), float(params["C2"])
        a = params["a"]
        if l <= 0:
            raise FamilyParamMismatch("separation constant l must be positive")

        def build(z0, zb0, t0, order):
            Z, Zb, T = _seeds(z0, zb0, t0, order)
            alpha = _ln(l * T * T + C1 * T + C2, "l*t^2 + C1*t + C2")
            aj = _expr_at(a, Z)
            abj = _expr_at(_bar(a), Zb)
            ad = _expr_deriv_at(a, Z)
            abd = _expr_deriv_at(_bar(a), Zb)
            if kappa == 1:
                denom = aj + abj
            else:
                denom = aj * abj + 1.0
            _check_nonzero(denom.value, "Liouville denominator")
            beta = (_ln(ad, "a'") + _ln(abd, "abar'")
                    - 2.0 * _ln(denom, "Liouville denominator") - math.log(l))
            return alpha + beta

    elif family == "noninv":
        need("b")
        b = params["b"]

        def build(z0, zb0, t0, order):
            Z, Zb, T = _seeds(z0, zb0, t0, order)
            bj = _expr_at(b, Z)
            bbj = _expr_at(_bar(b), Zb)
            _check_nonzero(t0 + bj.value, "t + b(z)")
            _check_nonzero(t0 + bbj.value, "t + bbar(zbar)")
            core = _ln(T + bj, "t + b(z)") + _ln(T + bbj, "t + bbar(zbar)")
            if kappa == 1:
                _check_nonzero(z0 + zb0, "z + zbar")
                return core - 2.0 * _ln(Z + Zb, "z + zbar")
            _check_nonzero(z0 * zb0 + 1, "z*zbar + 1")
            return core - 2.0 * _ln(Z * Zb + 1.0, "z*zbar + 1")

    elif family == "general_noninv":
        need("b", "c")
        b, c = params["b"], params["c"]

        def build(z0, zb0, t0, order):
            Z, Zb, T = _seeds(z0, zb0, t0, order)
            bj = _expr_at(b, Z)
            bbj = _expr_at(_bar(b), Zb)
            _check_nonzero(t0 + bj.value, "t + b(z)")
            _check_nonzero(t0 + bbj.value, "t + bbar(zbar)")
            core = _ln(T + bj, "t + b(z)") + _ln(T + bbj, "t + bbar(zbar)")
            return core + _liouville_gamma(c, kappa, Z, Zb)

    elif family == "confinv":
        # u = ln f(xi, t) - ln a(z) - ln abar(zbar), xi = i(A(z) - Abar(zbar))
        need("f", "A", "a")
        f, A, a = params["f"], params["A"], params["a"]

        def build(z0, zb0, t0, order):
            Z, Zb, T = _seeds(z0, zb0, t0, order)
            Aj = _expr_at(A, Z)
            Abj = _expr_at(_bar(A), Zb)
            xi = 1j * (Aj - Abj)
            fj = ex.evaluate(f, {"xi": xi, "t": T})
            aj = _expr_at(a, Z)
            abj = _expr_at(_bar(a), Zb)
            _check_nonzero(aj.value, "a(z)")
            _check_nonzero(abj.value, "abar(zbar)")
            return _ln(fj, "f(xi, t)") - _ln(aj, "a(z)") - _ln(abj, "abar(zbar)")

    elif family == "liouville":
        need("c")
        c = params["c"]

        def build(z0, zb0, t0, order):
            Z, Zb, _T = _seeds(z0, zb0, t0, order)
            return _liouville_gamma(c, kappa, Z, Zb)

    else:
        raise FamilyParamMismatch(f"unknown family {family!r}")

    return SolutionField(family=family, kappa=kappa, params=dict(params), _builder=build)


def eval_u(field: SolutionField, p: Point, order: int) -> Jet:
    """Jet of u at a physical-slice point (zbar = conj z)."""
    if order not in (0, 1, 2, 3, 4):
        raise FamilyParamMismatch(f"jet order must be <= 4, got {order}")
    return field.jet_at(p.z, p.z.conjugate(), p.t, order)


def conformal_pushforward(fld: SolutionField, phi: ex.Expr) -> SolutionField:
    """Transform a solution by z = phi(ztilde).

    The new field is u(phi(ztilde), phibar(zbartilde), t) + ln(phi' phibar'),
    which preserves the PDE residual and the invariants rho, eta at
    corresponding points.
    """
    phibar = _bar(phi)

    def build(z0, zb0, t0, order):
        Z, Zb, T = _seeds(z0, zb0, t0, order)
        pj = _expr_at(phi, Z)
        pbj = _expr_at(phibar, Zb)
        pd = _expr_deriv_at(phi, Z)
        pbd = _expr_deriv_at(phibar, Zb)
        if abs(pd.value) < SINGULAR_TOL:
            raise SingularMap(f"phi'({z0}) = {pd.value} within tolerance")
        w0, wb0 = pj.value, pbj.value
        inner = fld.jet_at(w0, wb0, t0, order)
        composed = compose3(inner, pj - w0, pbj - wb0, T - complex(t0))
        return composed + _ln(pd, "phi'") + _ln(pbd, "phibar'")

    return SolutionField(family="pushforward", kappa=fld.kappa,
                         params={"inner": fld, "phi": phi}, _builder=build)
