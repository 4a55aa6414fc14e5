"""Closed-form NDT regions of the 2x2 and 3x3 networks.

These piecewise-linear formulas are exact oracles for the splitting LP.
Region predicates are half-open and tried in index order, so a boundary
point gets the first region whose predicate holds (for instance
``3 mu_t = 1`` goes to region 5, not 4).  Every closed region containing a
point gives the same value there.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import CachePoint, NetworkConfig, SplitRatios, feasible_cache_point

__all__ = [
    "Network",
    "RegionId",
    "classify_2x2",
    "closed_form_2x2",
    "optimal_ratios_2x2",
    "classify_3x3",
    "closed_form_3x3",
    "optimal_ratios_3x3",
    "region_formula_3x3",
    "region_formula_2x2",
]

_F = Fraction


class Network(str, Enum):
    TWO_BY_TWO = "TwoByTwo"
    THREE_BY_THREE = "ThreeByThree"


@dataclass(frozen=True)
class RegionId:
    network: Network
    index: int

    def __post_init__(self):
        top = 2 if self.network is Network.TWO_BY_TWO else 5
        if not 1 <= self.index <= top:
            raise ValueError(f"{self.network.value} has regions 1..{top}, got {self.index}")

    def __str__(self) -> str:
        return f"R{self.index}"


def _require(n: int, pt: CachePoint):
    cfg = NetworkConfig(n, n, n)
    if not feasible_cache_point(cfg, pt):
        raise ValueError(
            f"cache point ({pt.mu_r}, {pt.mu_t}) infeasible for {n}x{n}: "
            f"need mu_r + {n}*mu_t >= 1"
        )


# -- 2x2 --------------------------------------------------------------------

def classify_2x2(pt: CachePoint) -> RegionId:
    _require(2, pt)
    idx = 1 if pt.mu_r + pt.mu_t >= 1 else 2
    return RegionId(Network.TWO_BY_TWO, idx)


def region_formula_2x2(index: int, pt: CachePoint) -> Fraction:
    """Evaluate one region's linear formula, regardless of membership."""
    mu_r, mu_t = pt
    if index == 1:
        return 1 - mu_r
    if index == 2:
        return 2 - 2 * mu_r - mu_t
    raise ValueError(f"no 2x2 region {index}")


def closed_form_2x2(pt: CachePoint) -> Fraction:
    return region_formula_2x2(classify_2x2(pt).index, pt)


def optimal_ratios_2x2(pt: CachePoint) -> SplitRatios:
    mu_r, mu_t = pt
    if classify_2x2(pt).index == 1:
        return SplitRatios({(2, 0): mu_r, (0, 2): 1 - mu_r})
    return SplitRatios({
        (0, 1): 1 - mu_r - mu_t,
        (2, 0): mu_r,
        (0, 2): 2 * mu_t - (1 - mu_r),
    })


# -- 3x3 --------------------------------------------------------------------

def classify_3x3(pt: CachePoint) -> RegionId:
    """Region of a feasible 3x3 cache point; predicates tried in index order."""
    _require(3, pt)
    mu_r, mu_t = pt
    predicates = (
        mu_r + mu_t >= 1,
        mu_r + mu_t < 1 and 2 * mu_r + mu_t >= 1 and mu_r + 2 * mu_t > 1,
        3 * mu_r + 3 * mu_t >= 2 and 2 * mu_r + mu_t < 1,
        3 * mu_r + 3 * mu_t < 2 and 3 * mu_t > 1,
        3 * mu_t <= 1 and mu_r + 2 * mu_t <= 1 and mu_r + 3 * mu_t >= 1,
    )
    for idx, hit in enumerate(predicates, start=1):
        if hit:
            return RegionId(Network.THREE_BY_THREE, idx)
    # the five predicates cover the feasible set; reaching here is a bug
    raise AssertionError(f"no 3x3 region matched ({mu_r}, {mu_t})")


_COEFFS_3X3 = {
    # index: (constant, mu_r coefficient, mu_t coefficient)
    1: (_F(1), _F(-1), _F(0)),
    2: (_F(4, 3), _F(-4, 3), _F(-1, 3)),
    3: (_F(3, 2), _F(-5, 3), _F(-1, 2)),
    4: (_F(13, 6), _F(-8, 3), _F(-3, 2)),
    5: (_F(8, 3), _F(-8, 3), _F(-3)),
}


def region_formula_3x3(index: int, pt: CachePoint) -> Fraction:
    """Evaluate one region's linear formula, regardless of membership."""
    try:
        c0, cr, ct = _COEFFS_3X3[index]
    except KeyError:
        raise ValueError(f"no 3x3 region {index}") from None
    return c0 + cr * pt.mu_r + ct * pt.mu_t


def closed_form_3x3(pt: CachePoint) -> Fraction:
    return region_formula_3x3(classify_3x3(pt).index, pt)


def optimal_ratios_3x3(pt: CachePoint) -> SplitRatios:
    """Optimal splitting at a 3x3 point.

    Regions 3-5 have a unique optimum.  In regions 1 and 2 the optimum is a
    face, and one representative vertex is returned.
    """
    mu_r, mu_t = pt
    idx = classify_3x3(pt).index
    if idx == 1:
        return SplitRatios({(3, 0): mu_r, (0, 3): 1 - mu_r})
    if idx == 2:
        return SplitRatios({
            (1, 1): (1 - mu_r - mu_t) / 3,
            (3, 0): 2 * mu_r + mu_t - 1,
            (0, 3): mu_r + 2 * mu_t - 1,
        })
    if idx == 3:
        return SplitRatios({
            (1, 1): mu_r / 3,
            (0, 2): 1 - 2 * mu_r - mu_t,
            (0, 3): 3 * mu_r + 3 * mu_t - 2,
        })
    if idx == 4:
        return SplitRatios({
            (1, 1): mu_r / 3,
            (0, 1): _F(2, 3) - mu_r - mu_t,
            (0, 2): mu_t - _F(1, 3),
        })
    return SplitRatios({
        (1, 1): mu_r / 3 + mu_t - _F(1, 3),
        (0, 1): 1 - mu_r - 2 * mu_t,
        (3, 0): 1 - 3 * mu_t,
    })
