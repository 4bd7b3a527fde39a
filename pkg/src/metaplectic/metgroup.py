"""Exact arithmetic for the connected double cover of SL(2, R).

A group element is a pair (g, eta) where g = [[a, b], [c, d]] is a real
matrix with ad - bc = 1 and eta is a holomorphic square root of
z -> cz + d on the upper half-plane.  Since cz + d maps the upper
half-plane into an open half-plane (or to a nonzero constant when c = 0),
the two holomorphic square roots are exactly +/- branch_sqrt(cz + d), so
eta is stored as a single sign bit relative to the fixed branch.  Sign
arithmetic in the cover is then exact: no phase can drift under long
composition chains.

Conventions used throughout the package:

  * branch_sqrt takes values in {Re > 0} union {Re = 0, Im >= 0}.
  * Half-integer powers are z**m := branch_sqrt(z)**(2m), never
    exp(m * log z) with a library principal logarithm.
  * kappa(t) is the lifted rotation [[cos t, -sin t], [sin t, cos t]]
    with eta(i) = exp(it/2); it has period 4*pi on the cover, and
    kappa(2*pi) generates the kernel of the covering map.
  * Iwasawa coordinates (x, y, t): element = n_x a_y kappa_t with
    n_x = [[1, x], [0, 1]] and a_y = [[sqrt(y), 0], [0, 1/sqrt(y)]].
  * Cartan coordinates (theta1, t, theta2): element =
    kappa_theta1 h_t kappa_theta2 with h_t = [[e^t, 0], [0, e^-t]],
    eta_h(i) = e^(-t/2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

#: default absolute tolerance for matrix comparisons
MATRIX_TOL = 1e-12


def branch_sqrt(z: complex) -> complex:
    """Square root with values in {Re > 0} union {Re = 0, Im >= 0}.

    On the negative real axis this is the limit from the upper
    half-plane (branch_sqrt(-4) = 2i); branch_sqrt(0) = 0.
    """
    w = cmath.sqrt(complex(z))
    if w.real < 0.0 or (w.real == 0.0 and w.imag < 0.0):
        w = -w
    return w


def half_power(z: complex, twice: int) -> complex:
    """z**(twice/2) computed as branch_sqrt(z)**twice."""
    return branch_sqrt(z) ** twice


def reduce_mod_4pi(t: float) -> float:
    """Reduce an angle to the canonical interval [0, 4*pi)."""
    r = math.fmod(t, FOUR_PI)
    if r < 0.0:
        r += FOUR_PI
    if r >= FOUR_PI:  # fmod rounding at the boundary
        r -= FOUR_PI
    return r


def circle_dist(t1: float, t2: float) -> float:
    """Distance between angles on the circle R / 4*pi*Z."""
    d = reduce_mod_4pi(t1 - t2)
    return min(d, FOUR_PI - d)


@dataclass(frozen=True, order=True)
class HalfInt:
    """Exact half-integer, stored as twice its value.

    The weight m is 'genuine' (metaplectic, half-integral) exactly when
    twice is odd; even twice is the SL(2, R) integer-weight case.
    """

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int):
            raise TypeError("HalfInt stores an exact integer 2m")

    @classmethod
    def from_value(cls, v) -> "HalfInt":
        """Build from an int, float or HalfInt; rejects non-half-integers."""
        if isinstance(v, HalfInt):
            return v
        tw = 2 * v
        if tw != round(tw):
            raise ValueError(f"{v!r} is not a half-integer")
        return cls(int(round(tw)))

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_genuine(self) -> bool:
        return self.twice % 2 != 0

    def __float__(self) -> float:
        return self.twice / 2.0

    def __add__(self, other):
        if isinstance(other, HalfInt):
            return HalfInt(self.twice + other.twice)
        if isinstance(other, int):
            return HalfInt(self.twice + 2 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, HalfInt):
            return HalfInt(self.twice - other.twice)
        if isinstance(other, int):
            return HalfInt(self.twice - 2 * other)
        return NotImplemented

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


@dataclass(frozen=True)
class IwasawaCoords:
    """Coordinates (x, y, t) with y > 0 and t reduced to [0, 4*pi)."""

    x: float
    y: float
    t: float

    def __post_init__(self):
        if not self.y > 0.0:
            raise ValueError(f"Iwasawa y must be positive, got {self.y}")
        object.__setattr__(self, "t", reduce_mod_4pi(self.t))


@dataclass(frozen=True)
class CartanCoords:
    """Coordinates (theta1, t, theta2) with t >= 0, angles in [0, 4*pi).

    At t = 0 the decomposition degenerates; the canonical
    representative puts all rotation into theta1 and sets theta2 = 0.
    """

    theta1: float
    t: float
    theta2: float

    def __post_init__(self):
        if self.t < 0.0:
            raise ValueError(f"Cartan t must be >= 0, got {self.t}")
        object.__setattr__(self, "theta1", reduce_mod_4pi(self.theta1))
        object.__setattr__(self, "theta2", reduce_mod_4pi(self.theta2))


def _same_fiber(eta1: complex, eta2: complex) -> bool:
    # eta values of the two lifts of one matrix differ by a factor -1;
    # comparing |e1 - e2| with |e1 + e2| is robust even when the branch
    # reference point sits near the square-root cut.
    return abs(eta1 - eta2) <= abs(eta1 + eta2)


@dataclass(frozen=True)
class MetElement:
    """Group element (matrix, sign): eta(z) = sign * branch_sqrt(cz + d)."""

    a: float
    b: float
    c: float
    d: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign bit must be +1 or -1")
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-9:
            raise ValueError(f"matrix must have determinant one, got {det}")

    # -- action and square-root cocycle ---------------------------------

    def act(self, z: complex) -> complex:
        """Fractional-linear action (az + b) / (cz + d)."""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def j(self, z: complex) -> complex:
        """Cocycle value cz + d."""
        return self.c * z + self.d

    def eta(self, z: complex) -> complex:
        """Holomorphic square root of cz + d, evaluated at z (Im z > 0)."""
        return self.sign * branch_sqrt(self.j(z))

    @property
    def eta_i(self) -> complex:
        return self.eta(1j)

    # -- group structure -------------------------------------------------

    def __mul__(self, other: "MetElement") -> "MetElement":
        if not isinstance(other, MetElement):
            return NotImplemented
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        # eta of the product at i: eta1(g2.i) * eta2(i)
        eta_val = self.eta(other.act(1j)) * other.eta_i
        return _from_eta_value(a, b, c, d, eta_val)

    def inverse(self) -> "MetElement":
        a, b, c, d = self.d, -self.b, -self.c, self.a
        # eta_inv(i) = 1 / eta(g_inv . i), from the multiplication rule
        w = (a * 1j + b) / (c * 1j + d)
        eta_val = 1.0 / self.eta(w)
        return _from_eta_value(a, b, c, d, eta_val)

    def frobenius_norm(self) -> float:
        """sqrt(a^2 + b^2 + c^2 + d^2); >= sqrt(2) for det-one matrices."""
        return math.sqrt(self.a * self.a + self.b * self.b
                         + self.c * self.c + self.d * self.d)

    def close_to(self, other: "MetElement", tol: float = MATRIX_TOL) -> bool:
        """Equality up to tol in matrix entries and in eta(i)."""
        scale = max(1.0, self.frobenius_norm(), other.frobenius_norm())
        if (abs(self.a - other.a) > tol * scale
                or abs(self.b - other.b) > tol * scale
                or abs(self.c - other.c) > tol * scale
                or abs(self.d - other.d) > tol * scale):
            return False
        return abs(self.eta_i - other.eta_i) <= tol * scale + abs(
            self.eta_i + other.eta_i) * 0.5 * tol + tol


def _from_eta_value(a: float, b: float, c: float, d: float,
                    eta_val: complex) -> MetElement:
    # recover the sign bit by comparing the target eta(i) with the branch
    ref = branch_sqrt(c * 1j + d)
    sign = 1 if _same_fiber(eta_val, ref) else -1
    return MetElement(a, b, c, d, sign)


# -- standard one-parameter subgroups ------------------------------------

def identity() -> MetElement:
    return MetElement(1.0, 0.0, 0.0, 1.0, 1)


def translation(x: float) -> MetElement:
    """n_x = ([[1, x], [0, 1]], eta = 1)."""
    return MetElement(1.0, float(x), 0.0, 1.0, 1)


def dilation(y: float) -> MetElement:
    """a_y = ([[sqrt(y), 0], [0, 1/sqrt(y)]], eta(i) = y^(-1/4)), y > 0."""
    if not y > 0.0:
        raise ValueError("dilation parameter must be positive")
    s = math.sqrt(y)
    return MetElement(s, 0.0, 0.0, 1.0 / s, 1)


def kappa(t: float) -> MetElement:
    """Lifted rotation with eta(i) = exp(it/2); kappa(t + 4*pi) = kappa(t)."""
    ct, st = math.cos(t), math.sin(t)
    return _from_eta_value(ct, -st, st, ct, cmath.exp(0.5j * t))


def cartan_h(t: float) -> MetElement:
    """h_t = ([[e^t, 0], [0, e^-t]], eta(i) = e^(-t/2))."""
    et = math.exp(t)
    return MetElement(et, 0.0, 0.0, 1.0 / et, 1)


# -- coordinate systems ---------------------------------------------------

def from_iwasawa(coords: IwasawaCoords) -> MetElement:
    """Element n_x a_y kappa_t with eta(i) = y^(-1/4) exp(it/2)."""
    x, y, t = coords.x, coords.y, coords.t
    sy = math.sqrt(y)
    ct, st = math.cos(t), math.sin(t)
    a = sy * ct + x * st / sy
    b = -sy * st + x * ct / sy
    c = st / sy
    d = ct / sy
    eta_val = y ** -0.25 * cmath.exp(0.5j * t)
    return _from_eta_value(a, b, c, d, eta_val)


def to_iwasawa(s: MetElement) -> IwasawaCoords:
    """Read off (x, y) = g.i and t from the phase of eta(i) * y^(1/4)."""
    z = s.act(1j)
    x, y = z.real, z.imag
    phase = s.eta_i * y ** 0.25  # unit modulus, equals exp(it/2)
    t = 2.0 * cmath.phase(phase)
    return IwasawaCoords(x, y, reduce_mod_4pi(t))


def from_cartan(coords: CartanCoords) -> MetElement:
    """Element kappa_theta1 h_t kappa_theta2."""
    return kappa(coords.theta1) * (cartan_h(coords.t) * kappa(coords.theta2))


def to_cartan(s: MetElement) -> CartanCoords:
    """Cartan coordinates via the 2x2 singular-value decomposition.

    t comes from cosh(2t) = |sigma|_F^2 / 2, computed cancellation-free
    through cosh(2t) - 1 = ((a-d)^2 + (b+c)^2) / 2.  The canonical
    representative has theta1 in [0, pi) for t > 0; rotations (t = 0)
    put everything into theta1 and set theta2 = 0.  theta2 is lifted to
    [0, 4*pi) by matching eta, which selects the correct sheet of the
    cover.
    """
    a, b, c, d = s.a, s.b, s.c, s.d
    delta = 0.5 * ((a - d) ** 2 + (b + c) ** 2)  # cosh(2t) - 1, exact form
    if delta == 0.0:
        return CartanCoords(to_iwasawa(s).t, 0.0, 0.0)
    t = 0.5 * math.log1p(delta + math.sqrt(delta * (2.0 + delta)))

    # symmetric A = g g^T is R(theta1) diag(e^2t, e^-2t) R(theta1)^T
    a11 = a * a + b * b
    a22 = c * c + d * d
    a12 = a * c + b * d
    theta1 = 0.5 * math.atan2(2.0 * a12, a11 - a22)
    # make sure theta1 points along the major axis
    ct, st = math.cos(theta1), math.sin(theta1)
    major = ct * ct * a11 + 2.0 * ct * st * a12 + st * st * a22
    if major < 1.0 + delta:  # compared against cosh(2t)
        theta1 += 0.5 * math.pi
    if theta1 < 0.0:
        theta1 += math.pi
    elif theta1 >= math.pi:
        theta1 -= math.pi
    ct, st = math.cos(theta1), math.sin(theta1)

    # K2 = D^-1 R(theta1)^T g, then the nearest rotation angle
    emt, ept = math.exp(-t), math.exp(t)
    m00 = emt * (ct * a + st * c)
    m01 = emt * (ct * b + st * d)
    m10 = ept * (-st * a + ct * c)
    m11 = ept * (-st * b + ct * d)
    theta2 = math.atan2(m10 - m01, m00 + m11)

    cand = CartanCoords(theta1, t, theta2)
    if not _same_fiber(from_cartan(cand).eta_i, s.eta_i):
        cand = CartanCoords(theta1, t, theta2 + TWO_PI)
    return cand


# -- disk realization (Cayley conjugation) --------------------------------

# g_C = (1/2i) [[1, -i], [1, i]] maps H -> D; its inverse is [[i, i], [-1, 1]]
_GC = ((0.5 / 1j, -0.5j / 1j), (0.5 / 1j, 0.5j / 1j))


def disk_to_half_plane(w: complex) -> complex:
    """Inverse Cayley transform i(1 + w) / (1 - w), D -> H."""
    return (1j * w + 1j) / (1.0 - w)


def _eta_cayley(z: complex) -> complex:
    # eta_C(z)^2 = j(g_C, z) = (z + i) / 2i; the argument has Re > 0 on H,
    # so branch_sqrt is holomorphic here
    return branch_sqrt((z + 1j) / 2j)


def cayley_eta(s: MetElement, w: complex) -> complex:
    """eta of the Cayley conjugate of s, evaluated at a disk point w."""
    z1 = disk_to_half_plane(w)
    z2 = s.act(z1)
    return _eta_cayley(z2) * s.eta(z1) * branch_sqrt(1.0 - w)


def cayley(s: MetElement):
    """Conjugate of s in the SU(1,1) realization.

    Returns (matrix, eta0) where matrix is the 2x2 complex matrix
    g_C g g_C^-1 (an element of SU(1,1)) and eta0 is the value at w = 0
    of the transported square root, with eta0**2 = j(matrix, 0).
    """
    import numpy as np

    gc = np.array([[1.0, -1j], [1.0, 1j]], dtype=complex) / 2j
    gci = np.array([[1j, 1j], [-1.0, 1.0]], dtype=complex)
    g = np.array([[s.a, s.b], [s.c, s.d]], dtype=complex)
    return gc @ g @ gci, cayley_eta(s, 0.0)
