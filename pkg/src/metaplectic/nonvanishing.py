"""Non-vanishing thresholds and certificates for periodized coefficients.

For level N and weight data (k, m) the certified sufficient condition for
the periodized coefficient series over a level-N group (meeting the
maximal compact trivially) not to vanish is the strict inequality

    N > N(k, m) := 4 sqrt(M) / (1 - M),    M = median(k/2 + 1, m/2 - 1).

The admissible Cartan radii form the open window

    artanh(sqrt(M)) < r < artanh(sqrt(4/N^2 + 1) - 2/N),

which is nonempty exactly when N > N(k, m); the integral margin at any
admissible radius is 4 pi (2 B_inc(tanh^2 r) - B), in Haar units.

If the group meets the maximal compact nontrivially (equivalently, for
the integer-weight variant, if the order of the rotation subgroup fails
to divide m + 2k), the series vanishes identically; that group-level
fact enters as the caller's flag.

verify_grid re-checks, cell by cell, the tabulated relations between
floor(N) + 1 and the elementary estimate

    N_close = 4 sqrt(q (1 + q)),   q = (k + 1.3738) / (m - 4 + 1.3738),

with offsets 6.204 (k <= 1000) and 0.8018 (k <= 158), and classifies the
m >= 26.4 + 16.9431 k / m <= 25.34 + 16.9431 k zones.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .betamedian import median
from .metgroup import HalfInt
from .quadrature import BetaParams, beta_complete, incomplete_beta

VANISHES = "VANISHES"
NONVANISHING = "NONVANISHING"
INCONCLUSIVE = "INCONCLUSIVE"

#: |N - threshold| below this is reported INCONCLUSIVE (strictness guard)
BOUNDARY_TOL = 1e-10

CLOSE_CONSTANT = 1.3738
ZONE_SLOPE = 16.9431
ZONE_UPPER = 26.4
ZONE_LOWER = 25.34


def _as_halfint(m) -> HalfInt:
    return m if isinstance(m, HalfInt) else HalfInt.from_value(m)


def threshold_N(k: int, m) -> float:
    """Threshold 4 sqrt(M)/(1 - M) with M = median(k/2 + 1, m/2 - 1);
    strictly increasing in k and strictly decreasing in m.  Needs m > 2."""
    return _threshold_median(k, m)[0]


def _threshold_median(k: int, m) -> Tuple[float, float]:
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    M = median(BetaParams.from_weight(k, float(_as_halfint(m)))).value
    return 4.0 * math.sqrt(M) / (1.0 - M), M


def threshold_bounds(k: int, m) -> Optional[float]:
    """Elementary strict upper bound 4 sqrt(q (1 + q)) for the threshold:
    q = (k+2)/(m-2) when 0 < k < m - 4, q = k/(m-4) when 0 < m - 4 < k;
    None on the excluded boundary cases (k = 0, m = 4, k = m - 4)."""
    mf = float(_as_halfint(m))
    if 0 < k < mf - 4.0:
        q = (k + 2.0) / (mf - 2.0)
    elif 0.0 < mf - 4.0 < k:
        q = k / (mf - 4.0)
    else:
        return None
    return 4.0 * math.sqrt(q * (1.0 + q))


def threshold_close(k: int, m) -> float:
    """Elementary proxy 4 sqrt(q (1 + q)), q = (k + C)/(m - 4 + C) with
    C = 1.3738; defined for half-integers m >= 9/2."""
    mf = float(_as_halfint(m))
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if mf < 4.5:
        raise ValueError(f"threshold_close needs m >= 9/2, got {mf}")
    q = (k + CLOSE_CONSTANT) / (mf - 4.0 + CLOSE_CONSTANT)
    return 4.0 * math.sqrt(q * (1.0 + q))


def r_window(N: int, k: int, m) -> Optional[Tuple[float, float]]:
    """Open interval of admissible Cartan radii, or None when empty.

    Lower end: tanh^2(r) > M; upper end: tanh^2(r) < u^2 with
    u = sqrt(4/N^2 + 1) - 2/N.  Nonempty exactly when N exceeds the
    threshold."""
    if N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    M = median(BetaParams.from_weight(k, float(_as_halfint(m)))).value
    u = math.sqrt(4.0 / (N * N) + 1.0) - 2.0 / N
    if not M < u * u:
        return None
    return math.atanh(math.sqrt(M)), math.atanh(u)


def l1_margin_at(k: int, m, r: float) -> float:
    """Haar-measure margin at radius r: the integral of |F| inside the
    bi-K-invariant ball of radius r minus the integral outside it,
    which is 4 pi (2 B_inc(tanh^2 r) - B)."""
    p = BetaParams.from_weight(k, float(_as_halfint(m)))
    x = math.tanh(r) ** 2
    return 4.0 * math.pi * (2.0 * incomplete_beta(p, x) - beta_complete(p))


@dataclass(frozen=True)
class Certificate:
    """Outcome of the non-vanishing analysis for (N, k, m)."""

    verdict: str
    N: int
    k: int
    m: HalfInt
    threshold: float
    median: float
    r_window: Optional[Tuple[float, float]] = None
    l1_margin: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "N": self.N,
            "k": self.k,
            "m": float(self.m),
            "two_m": self.m.twice,
            "threshold": self.threshold,
            "median": self.median,
            "r_window": list(self.r_window) if self.r_window else None,
            "l1_margin": self.l1_margin,
        }


def certify(N: int, k: int, m, gamma_meets_K: bool = False) -> Certificate:
    """Certificate for the periodized coefficient at level N.

    gamma_meets_K is the caller's group-level input: True means the
    discrete group meets the maximal compact nontrivially (genuine case)
    or fails the rotation-order divisibility (integer-weight case), and
    forces VANISHES.  Otherwise the verdict is NONVANISHING when
    N > threshold strictly (window and margin filled in), INCONCLUSIVE
    when N is below or within 1e-10 of the threshold: the criterion is
    one-sided.
    """
    m = _as_halfint(m)
    if N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if m.is_genuine:
        if m.twice < 5:
            raise ValueError(f"genuine case needs m >= 5/2, got {m}")
    elif m.twice < 6:
        raise ValueError(f"integer-weight case needs m >= 3, got {m}")
    thr, M = _threshold_median(k, m)
    if gamma_meets_K:
        return Certificate(VANISHES, N, k, m, thr, M)
    if N > thr + BOUNDARY_TOL:
        window = r_window(N, k, m)
        assert window is not None
        mid = 0.5 * (window[0] + window[1])
        return Certificate(NONVANISHING, N, k, m, thr, M,
                           r_window=window, l1_margin=l1_margin_at(k, m, mid))
    return Certificate(INCONCLUSIVE, N, k, m, thr, M)


# -- grid re-verification ---------------------------------------------------

@dataclass(frozen=True)
class GridCell:
    k: int
    two_m: int
    n_exact: float
    n_floor_plus_1: int
    n_close: float
    item1_ok: bool
    item2_ok: Optional[bool]  # None above the k <= 158 range
    item3_ok: Optional[bool]  # None inside the unclassified gap zone


@dataclass
class GridReport:
    """Cell-by-cell re-check of the tabulated floor/ceil relations."""

    k_max: int
    m_max: float
    offsets: Tuple[float, float]
    rows: list = field(default_factory=list)
    item1_violations: int = 0
    item2_violations: int = 0
    item3_violations: int = 0
    unclassified: int = 0
    first_violation: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return (self.item1_violations == 0 and self.item2_violations == 0
                and self.item3_violations == 0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "2m", "N_exact", "N_floor_plus_1", "N_close",
                         "item1_ok", "item2_ok"])
        for row in self.rows:
            writer.writerow([
                row.k, row.two_m, repr(row.n_exact), row.n_floor_plus_1,
                repr(row.n_close), row.item1_ok,
                "" if row.item2_ok is None else row.item2_ok,
            ])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "schema": 1,
            "k_max": self.k_max,
            "m_max": self.m_max,
            "offsets": list(self.offsets),
            "cells": len(self.rows),
            "item1_violations": self.item1_violations,
            "item2_violations": self.item2_violations,
            "item3_violations": self.item3_violations,
            "unclassified": self.unclassified,
            "first_violation": self.first_violation,
            "ok": self.ok,
        }, indent=2, sort_keys=True)


def verify_grid(k_max: int = 20, m_max=200,
                offsets: Tuple[float, float] = (6.204, 0.8018),
                keep_rows: bool = True) -> GridReport:
    """Sweep k <= k_max and half-integer m in [9/2, m_max], re-checking:

      item1 (k <= 1000):  ceil(N_close + offsets[0]) - (floor(N) + 1)
                          in {0, ..., 7}
      item2 (k <= 158):   ceil(N_close + offsets[1]) - (floor(N) + 1)
                          in {0, 1}
      item3: floor(N) + 1 == 1 when m >= 26.4 + 16.9431 k, and > 1 when
             m <= 25.34 + 16.9431 k; the strip in between is left
             unclassified.

    The desk-scale default (k <= 20, m <= 200) runs in seconds; the full
    tabulated range (k <= 1000, m < 16970) is ~1.7e7 median solves and
    is deliberately opt-in via the arguments.
    """
    if k_max < 0 or k_max > 1000:
        raise ValueError("k_max must lie in [0, 1000]")
    m_max_f = float(_as_halfint(m_max))
    if m_max_f < 4.5:
        raise ValueError("m_max must be at least 9/2")
    report = GridReport(k_max=k_max, m_max=m_max_f, offsets=offsets)
    off1, off2 = offsets
    for k in range(k_max + 1):
        for two_m in range(9, int(2 * m_max_f) + 1):
            m = HalfInt(two_m)
            n_exact = threshold_N(k, m)
            floor1 = math.floor(n_exact) + 1
            n_close = threshold_close(k, m)
            d1 = math.ceil(n_close + off1) - floor1
            item1 = 0 <= d1 <= 7
            if k <= 158:
                d2 = math.ceil(n_close + off2) - floor1
                item2 = d2 in (0, 1)
            else:
                item2 = None
            mf = float(m)
            if mf >= ZONE_UPPER + ZONE_SLOPE * k:
                item3 = floor1 == 1
            elif mf <= ZONE_LOWER + ZONE_SLOPE * k:
                item3 = floor1 > 1
            else:
                item3 = None
                report.unclassified += 1
            cell = GridCell(k, two_m, n_exact, floor1, n_close,
                            item1, item2, item3)
            if keep_rows:
                report.rows.append(cell)
            bad = (not item1) or item2 is False or item3 is False
            if not item1:
                report.item1_violations += 1
            if item2 is False:
                report.item2_violations += 1
            if item3 is False:
                report.item3_violations += 1
            if bad and report.first_violation is None:
                report.first_violation = {
                    "k": k, "two_m": two_m, "N_exact": n_exact,
                    "N_close": n_close, "item1_ok": item1,
                    "item2_ok": item2, "item3_ok": item3,
                }
    return report
