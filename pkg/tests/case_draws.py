"""Randomized admissible constants for the invariant normal forms.

kappa=-1 cases 3 and 4 have empty constraint sets (C2 = conj(C1) and a
purely imaginary lam cannot make C2 - lam^2/(4 C1) vanish for nonzero
constants), so draws exist only for the other fourteen combinations.
"""

from heavenly.classify import TheoremCase

EMPTY_CASES = {(-1, 3), (-1, 4)}


def draw_case(case_id, kappa, rng):
    """One admissible TheoremCase, or None for the empty combinations."""
    if (kappa, case_id) in EMPTY_CASES:
        return None
    alpha = rng.uniform(0.5, 2.0)
    beta = rng.uniform(0.5, 2.0)
    C = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
    mag = lambda: rng.uniform(0.5, 1.5)
    if kappa == 1:
        if case_id in (1, 2, 3, 4):
            return TheoremCase(
                case_id, 1, alpha, beta if case_id in (1, 3) else 0.0, C,
                C1=1j * mag(),
                C2=1j * mag() if case_id in (1, 2) else 0j,
                lam=1j * rng.uniform(-0.3, 0.3))
        if case_id == 5:
            return TheoremCase(5, 1, alpha, beta, C, C1=mag(),
                               C2=1j * rng.uniform(-0.5, 0.5))
        if case_id == 6:
            return TheoremCase(6, 1, alpha, beta, C, C2=1j * mag())
        if case_id == 7:
            return TheoremCase(7, 1, alpha, 0.0, C, C2=1j * mag())
        return TheoremCase(8, 1, 0.0, 0.0, C, C2=1j * mag())
    if case_id in (1, 2):
        C1 = complex(mag(), rng.uniform(-0.5, 0.5))
        return TheoremCase(case_id, -1, alpha,
                           beta if case_id == 1 else 0.0, C,
                           C1=C1, C2=C1.conjugate(),
                           lam=1j * rng.uniform(-0.5, 0.5))
    if case_id == 5:
        return TheoremCase(5, -1, alpha, beta, C, lam=1j * mag())
    if case_id == 6:
        return TheoremCase(6, -1, alpha, beta, C)
    if case_id == 7:
        return TheoremCase(7, -1, alpha, 0.0, C, lam=1j * mag())
    return TheoremCase(8, -1, 0.0, 0.0, C, lam=1j * mag())
