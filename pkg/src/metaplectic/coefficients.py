"""Weighted basis functions and their lifts to the double cover.

The holomorphic building block of weight (k, m) on the upper half-plane is

    f_{k,m}(z) = (2i)^m (z - i)^k / (z + i)^(m + k),

with half-integer powers taken through the fixed square-root branch.  Its
lift F(sigma) = f(sigma.i) eta_sigma(i)^(-2m) is a matrix coefficient of
the weight-m discrete series: in Cartan coordinates it collapses to

    F(kappa_t1 h_t kappa_t2) = chi_{m+2k}(t1) tanh(t)^k / cosh(t)^m chi_m(t2)

where chi_n(t) = exp(-i n t).  This module evaluates all of these, the
raising operator applied to the lift, and a finite-difference residual for
the Casimir eigenvalue equation C.F = m(m/2 - 1) F with

    C = 2 y^2 (d^2/dx^2 + d^2/dy^2) + 2 y d^2/(dx dt)

in Iwasawa coordinates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .metgroup import (CartanCoords, HalfInt, IwasawaCoords, MetElement,
                       branch_sqrt, disk_to_half_plane, half_power,
                       to_iwasawa)


@dataclass(frozen=True)
class Weight:
    """Weight pair: half-integer m >= 3/2 and K-type shift k >= 0.

    2m odd is the genuine (metaplectic) case; 2m even is the SL(2, R)
    integer-weight variant sharing all the arithmetic below.
    """

    m: HalfInt
    k: int

    def __post_init__(self):
        if not isinstance(self.m, HalfInt):
            object.__setattr__(self, "m", HalfInt.from_value(self.m))
        if self.m.twice < 3:
            raise ValueError(f"weight m must be >= 3/2, got {self.m}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")

    @property
    def m_float(self) -> float:
        return self.m.twice / 2.0


def chi(n, t: float) -> complex:
    """Character value exp(-i n t); n may be a HalfInt or a number."""
    return cmath.exp(-1j * float(n) * t)


def f_km(w: Weight, z: complex) -> complex:
    """(2i)^m (z - i)^k / (z + i)^(m + k) on the upper half-plane."""
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError(f"f_km requires Im z > 0, got z = {z}")
    tm = w.m.twice
    return (half_power(2j, tm) * (z - 1j) ** w.k
            * half_power(z + 1j, -(tm + 2 * w.k)))


def f_km_prime(w: Weight, z: complex) -> complex:
    """Complex derivative of f_km, as an explicit rational expression."""
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError(f"f_km_prime requires Im z > 0, got z = {z}")
    tm = w.m.twice
    k = w.k
    head = half_power(2j, tm)
    val = -(0.5 * (tm + 2 * k)) * (z - 1j) ** k * half_power(
        z + 1j, -(tm + 2 * k + 2))
    if k >= 1:
        val += k * (z - 1j) ** (k - 1) * half_power(z + 1j, -(tm + 2 * k))
    return head * val


def lift_F(f: Callable[[complex], complex], w: Weight,
           s: MetElement) -> complex:
    """Lift of f at sigma: f(sigma.i) * eta_sigma(i)^(-2m)."""
    return f(s.act(1j)) * s.eta_i ** (-w.m.twice)


def lift_F_iwasawa(f: Callable[[complex], complex], w: Weight,
                   coords: IwasawaCoords) -> complex:
    """The same lift through its Iwasawa form f(x + iy) y^(m/2) e^(-imt)."""
    m = w.m_float
    return (f(complex(coords.x, coords.y)) * coords.y ** (0.5 * m)
            * cmath.exp(-1j * m * coords.t))


def radial_profile(k: int, m: float, t: float) -> float:
    """tanh(t)^k / cosh(t)^m, evaluated in log space so that large t
    underflows to 0 instead of overflowing cosh^m."""
    if t == 0.0:
        return 1.0 if k == 0 else 0.0
    log_cosh = t + math.log1p(math.exp(-2.0 * t)) - math.log(2.0)
    log_val = -m * log_cosh
    if k:
        log_val += k * math.log(math.tanh(t))
    if log_val < -745.0:  # below smallest positive double
        return 0.0
    return math.exp(log_val)


def F_km_cartan(w: Weight, c: CartanCoords) -> complex:
    """Matrix coefficient in Cartan coordinates:
    chi_{m+2k}(theta1) * tanh^k(t)/cosh^m(t) * chi_m(theta2)."""
    n_left = w.m + 2 * w.k
    return (chi(n_left, c.theta1) * radial_profile(w.k, w.m_float, c.t)
            * chi(w.m, c.theta2))


def casimir_apply(G: Callable[[float, float, float], complex],
                  x: float, y: float, t: float, h: float) -> complex:
    """Casimir operator 2y^2(Gxx + Gyy) + 2y Gxt applied to G(x, y, t) by
    second-order central differences with step h."""
    g0 = G(x, y, t)
    gxx = (G(x + h, y, t) - 2.0 * g0 + G(x - h, y, t)) / (h * h)
    gyy = (G(x, y + h, t) - 2.0 * g0 + G(x, y - h, t)) / (h * h)
    gxt = (G(x + h, y, t + h) - G(x + h, y, t - h)
           - G(x - h, y, t + h) + G(x - h, y, t - h)) / (4.0 * h * h)
    return 2.0 * y * y * (gxx + gyy) + 2.0 * y * gxt


def casimir_check(w: Weight, s: MetElement, h: float = 1e-3,
                  richardson: bool = True) -> float:
    """Relative residual |C.F - m(m/2 - 1) F| / (1 + |F|) at s, with the
    Casimir applied to the Iwasawa form of the lift by central
    differences.

    With richardson=True (default) the stencil values at steps h and h/2
    are combined to cancel the O(h^2) truncation term, leaving O(h^4)
    truncation plus O(eps / h^2) roundoff; the plain one-step scheme is
    kept for the documented O(h^2) error model."""
    if not 1e-6 <= h <= 1e-2:
        raise ValueError(f"step h must lie in [1e-6, 1e-2], got {h}")
    coords = to_iwasawa(s)
    m = w.m_float

    def G(x, y, t):
        return lift_F_iwasawa(lambda z: f_km(w, z), w, IwasawaCoords(x, y, t))

    val = G(coords.x, coords.y, coords.t)
    cas = casimir_apply(G, coords.x, coords.y, coords.t, h)
    if richardson:
        half = casimir_apply(G, coords.x, coords.y, coords.t, 0.5 * h)
        cas = (4.0 * half - cas) / 3.0
    return abs(cas - m * (0.5 * m - 1.0) * val) / (1.0 + abs(val))


def apply_n_plus(w: Weight, s: MetElement) -> complex:
    """Raising operator n+ applied to the lift of f_{k,m}, evaluated
    analytically:

        (n+.F)(n_x a_y kappa_t)
            = e^(-i(m+2)t) (2i f'(z) y^(m/2+1) + m f(z) y^(m/2)),

    which transforms on the right as chi_{m+2} and on the left as
    chi_{m+2k}."""
    coords = to_iwasawa(s)
    m = w.m_float
    z = complex(coords.x, coords.y)
    y = coords.y
    return cmath.exp(-1j * (m + 2.0) * coords.t) * (
        2j * f_km_prime(w, z) * y ** (0.5 * m + 1.0)
        + m * f_km(w, z) * y ** (0.5 * m))


def cayley_transfer(w: Weight, z_disk: complex) -> complex:
    """f_{k,m} slashed to the unit disk; algebraically equal to
    z_disk**k."""
    z_disk = complex(z_disk)
    if not abs(z_disk) < 1.0:
        raise ValueError(f"cayley_transfer requires |w| < 1, got {z_disk}")
    z = disk_to_half_plane(z_disk)
    return f_km(w, z) * branch_sqrt(1.0 - z_disk) ** (-w.m.twice)
