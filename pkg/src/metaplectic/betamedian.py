"""Median of the beta distribution and its elementary envelopes.

median(a, b) solves I_x(a, b) = 1/2 for the regularized incomplete beta
I, by bracketed bisection with a Newton polish.  The regularized form is
used throughout so that nothing overflows for the large shape parameters
(a up to ~500, b up to ~8500) that the grid sweeps require.  Closed
forms M(1, b) = 1 - 2^(-1/b), M(a, 1) = 2^(-1/a) and M(a, a) = 1/2 are
never special-cased inside the solver: they stay available as external
oracles for it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .quadrature import (BetaParams, ConvergenceError,
                         beta_pdf_regularized, regularized_incomplete_beta)

#: residual |I_x - 1/2| demanded of a converged median
RESIDUAL_TOL = 1e-13

#: approximation exponent from the (a - alpha)/(a + b - 2 alpha) family
DEFAULT_ALPHA = 0.3131


@dataclass(frozen=True)
class MedianResult:
    """Solved median: value in (0, 1), regularized residual, iterations."""

    value: float
    residual: float
    iterations: int


def median_bounds(p: BetaParams):
    """Strict mean/mode envelope of the median for a, b > 1, a != b.

    Returns the open interval, ascending: for a < b it is
    ((a-1)/(a+b-2), a/(a+b)); for a > b the two endpoints swap roles.
    """
    a, b = p.a, p.b
    if a <= 1.0 or b <= 1.0:
        raise ValueError("median bounds need a > 1 and b > 1")
    if a == b:
        raise ValueError("median bounds are not asserted at a = b")
    mode = (a - 1.0) / (a + b - 2.0)
    mean = a / (a + b)
    return (mode, mean) if a < b else (mean, mode)


def median_approx(p: BetaParams, alpha: float = DEFAULT_ALPHA) -> float:
    """Approximation (a - alpha) / (a + b - 2 alpha), for a, b > 1."""
    if p.a <= 1.0 or p.b <= 1.0:
        raise ValueError("median_approx needs a > 1 and b > 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return (p.a - alpha) / (p.a + p.b - 2.0 * alpha)


def median(p: BetaParams) -> MedianResult:
    """Solve I_x(a, b) = 1/2.

    Bracket from median_bounds when the lemma applies, else (1e-300,
    1 - 1e-16); at most 80 bisection steps interleaved with up to 8
    Newton corrections, converging on residual <= 1e-13 or bracket
    width <= 1e-15.
    """
    if p.a > 1.0 and p.b > 1.0 and p.a != p.b:
        lo, hi = median_bounds(p)
    else:
        lo, hi = 1e-300, 1.0 - 1e-16
    # the envelope is open; make sure the bracket really straddles 1/2
    if regularized_incomplete_beta(p, lo) > 0.5 or \
            regularized_incomplete_beta(p, hi) < 0.5:
        lo, hi = 1e-300, 1.0 - 1e-16

    x = 0.5 * (lo + hi)
    best_x, best_res = x, float("inf")
    iterations = 0
    newton_left = 8

    for step in range(88):
        res = regularized_incomplete_beta(p, x) - 0.5
        iterations += 1
        if abs(res) < best_res:
            best_x, best_res = x, abs(res)
        if best_res <= RESIDUAL_TOL or hi - lo <= 1e-15:
            break
        if res < 0.0:
            lo = x
        else:
            hi = x
        nxt = None
        if newton_left > 0 and hi - lo < 1e-4:
            pdf = beta_pdf_regularized(p, x)
            if pdf > 0.0:
                cand = x - res / pdf
                if lo < cand < hi:
                    nxt = cand
                    newton_left -= 1
        x = nxt if nxt is not None else 0.5 * (lo + hi)

    # width collapse is a valid convergence outcome: the root is then
    # located to full double precision and the residual is whatever the
    # conditioning of I_x allows (it can exceed 1e-13 once
    # a |ln x| + b |ln(1-x)| + |ln B| approaches 1e3)
    if best_res > RESIDUAL_TOL and hi - lo > 1e-15:
        raise ConvergenceError(
            f"median solver stalled at residual {best_res:.3e} for "
            f"(a, b) = ({p.a}, {p.b})")
    return MedianResult(best_x, best_res, iterations)
