"""Congruence subgroups, lifts to the cover, and partial periodized sums.

Two families are implemented.  FULL_PREIMAGE takes every matrix of the
principal congruence subgroup of level N together with both of its lifts;
since the two lifts of one matrix contribute values differing by the
factor chi_{m+2k}(kappa_{2pi}) = -1 (for 2m odd), those partial sums
cancel exactly, demonstrating the vanishing half of the theory.

THETA_SECTION lifts the level-4 group {a, d = 1 (mod 4), c = 0 (mod 4)}
through the theta multiplier J(gamma, z) = Theta(gamma.z) / Theta(z),
Theta(z) = sum_n exp(2 pi i n^2 z), whose square is the cocycle cz + d;
this section meets the maximal compact trivially and its partial sums are
honest approximations to a nonzero limit.

Matrices are enumerated by a brute-force scan of the integer entries
inside the Frobenius-norm ball; the radii of interest stay small, where
this is both fast and obviously exhaustive.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .coefficients import F_km_cartan, Weight
from .metgroup import MetElement, branch_sqrt, to_cartan
from .nonvanishing import l1_margin_at, r_window, threshold_N
from .quadrature import ConvergenceError, _pairwise_sum

FULL_PREIMAGE = "preimage"
THETA_SECTION = "theta"

IntMatrix = Tuple[int, int, int, int]


@dataclass(frozen=True)
class CongruenceSpec:
    """Level and lifting variant of the discrete group."""

    N: int
    variant: str = FULL_PREIMAGE

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"level N must be >= 1, got {self.N}")
        if self.variant not in (FULL_PREIMAGE, THETA_SECTION):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == THETA_SECTION and self.N != 4:
            raise ValueError("the theta section is implemented for the "
                             "level-4 family only")


@dataclass(frozen=True)
class PartialSum:
    value: complex
    terms: int
    radius: float
    tail_estimate: float


def enumerate_gamma(spec: CongruenceSpec, radius: float) -> List[IntMatrix]:
    """All subgroup matrices with Frobenius norm <= radius, sorted
    lexicographically on (a, b, c, d)."""
    if radius < math.sqrt(2.0) - 1e-12:
        raise ValueError("radius below sqrt(2) excludes even the identity")
    r2 = int(radius * radius + 1e-9)
    rmax = int(math.sqrt(r2))
    N = spec.N
    theta_variant = spec.variant == THETA_SECTION
    mod_a = 4 if theta_variant else N
    mod_c = 4 if theta_variant else N
    b_step = 1 if theta_variant else N

    out: List[IntMatrix] = []

    def a_values():
        # a = 1 (mod mod_a)
        a = 1 - ((1 + rmax) // mod_a + 1) * mod_a
        while a <= rmax:
            if -rmax <= a:
                yield a
            a += mod_a

    for a in a_values():
        aa = a * a
        if aa > r2:
            continue
        b_lo = -rmax if theta_variant else -((rmax // N) * N)
        for b in range(b_lo, rmax + 1, b_step):
            ab = aa + b * b
            if ab > r2:
                continue
            if a == 0:
                # det = -bc = 1 with b, c integers
                if b in (1, -1):
                    c = -b
                    if c % mod_c == 0:
                        for d in range(-rmax, rmax + 1):
                            if (d - 1) % mod_a == 0 and \
                                    ab + c * c + d * d <= r2:
                                out.append((a, b, c, d))
                continue
            c_lo = -((rmax // mod_c) * mod_c)
            for c in range(c_lo, rmax + 1, mod_c):
                if ab + c * c > r2:
                    continue
                if (1 + b * c) % a != 0:
                    continue
                d = (1 + b * c) // a
                if (d - 1) % mod_a != 0:
                    continue
                if ab + c * c + d * d <= r2:
                    out.append((a, b, c, d))
    out.sort()
    return out


def theta(z: complex) -> complex:
    """Theta series sum_n exp(2 pi i n^2 z), truncated with tail < 1e-16."""
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError(f"theta requires Im z > 0, got {z}")
    total = 1.0 + 0.0j
    for n in range(1, 20000):
        term = cmath.exp(2j * math.pi * (n * n) * z)
        total += 2.0 * term
        if abs(term) < 1e-18:
            return total
    raise ConvergenceError(f"theta series too slow at Im z = {z.imag}")


def theta_multiplier(gamma: IntMatrix, z: complex) -> complex:
    """Automorphic factor J(gamma, z) = Theta(gamma.z) / Theta(z)."""
    a, b, c, d = gamma
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError(f"theta_multiplier requires Im z > 0, got {z}")
    gz = (a * z + b) / (c * z + d)
    return theta(gz) / theta(z)


def lift_theta_section(gamma: IntMatrix) -> MetElement:
    """Lift a level-4 matrix through its theta multiplier at z = i.

    The sign bit is fixed once from J(gamma, i); membership in the cover
    (J^2 = ci + d) is validated to 1e-10."""
    a, b, c, d = gamma
    J = theta_multiplier(gamma, 1j)
    j_val = c * 1j + d
    if abs(J * J - j_val) > 1e-10 * max(1.0, abs(j_val)):
        raise ArithmeticError(
            f"theta multiplier of {gamma} violates J^2 = ci + d")
    ref = branch_sqrt(j_val)
    sign = 1 if abs(J - ref) <= abs(J + ref) else -1
    return MetElement(float(a), float(b), float(c), float(d), sign)


def _lifted_elements(spec: CongruenceSpec,
                     mats: Iterable[IntMatrix]) -> List[MetElement]:
    out: List[MetElement] = []
    for mat in mats:
        if spec.variant == FULL_PREIMAGE:
            a, b, c, d = (float(v) for v in mat)
            out.append(MetElement(a, b, c, d, 1))
            out.append(MetElement(a, b, c, d, -1))
        else:
            out.append(lift_theta_section(mat))
    return out


def _tail_estimate(w: Weight, s: MetElement, radius: float,
                   terms: int) -> float:
    # heuristic: term count grows ~ density * R^2, each term bounded by
    # cosh(t)^-m with cosh(t) >= |gamma sigma| / 2 >= R / (2 |s^-1|)
    m = w.m_float
    if terms == 0 or radius <= 0.0:
        return 0.0
    density = terms / (radius * radius)
    s_inv = s.inverse().frobenius_norm()
    scale = 2.0 * s_inv
    if radius <= scale:  # bound useless until the shells clear the base point
        return math.inf
    return 2.0 * density * scale ** m * radius ** (2.0 - m) / (m - 2.0)


def partial_sum(spec: CongruenceSpec, w: Weight, s: MetElement,
                radius: float) -> PartialSum:
    """Partial periodized sum: F summed over lifted group elements of
    norm <= radius, each evaluated at (element * s), with deterministic
    pairwise reduction."""
    if w.m_float <= 2.0:
        raise ValueError("partial sums need m >= 5/2 for integrability")
    mats = enumerate_gamma(spec, radius)
    lifted = _lifted_elements(spec, mats)
    vals = [F_km_cartan(w, to_cartan(g * s)) for g in lifted]
    total = _pairwise_sum(vals) if vals else 0.0j
    return PartialSum(complex(total), len(lifted), radius,
                      _tail_estimate(w, s, radius, len(lifted)))


def partial_sum_trace(spec: CongruenceSpec, w: Weight, s: MetElement,
                      radii: Iterable[float]) -> List[PartialSum]:
    return [partial_sum(spec, w, s, r) for r in radii]


def trace_csv(trace: Iterable[PartialSum]) -> str:
    """CSV serialization: radius, terms, Re, Im, tail_estimate."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["radius", "terms", "re", "im", "tail_estimate"])
    for ps in trace:
        writer.writerow([repr(ps.radius), ps.terms, repr(ps.value.real),
                         repr(ps.value.imag), repr(ps.tail_estimate)])
    return buf.getvalue()


def margin_demo(N: int, w: Weight) -> float:
    """Integral margin at the midpoint of the admissible radius window;
    positive exactly in the certified regime N > threshold."""
    window = r_window(N, w.k, w.m)
    if window is None:
        raise ValueError(
            f"empty radius window: N = {N} does not exceed the threshold "
            f"{threshold_N(w.k, w.m):.6f}")
    mid = 0.5 * (window[0] + window[1])
    return l1_margin_at(w.k, w.m, mid)
