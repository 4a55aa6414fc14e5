"""Upper and lower bounds on the normalized delivery time (NDT).

The upper bound is the optimum of a linear program over file-splitting
ratios; the lower bounds are maximized over a small integer lattice by
enumeration.  Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple, Union

from .core import (
    CachePoint,
    CacheStateIndex,
    NetworkConfig,
    SplitRatios,
    binomial,
    feasible_cache_point,
    index_set,
    validate_split,
)
from .dof import per_user_dof
from .lp import LinearProgram, solve

__all__ = [
    "InfeasibleCachePoint",
    "NdtReport",
    "BOTH_ZERO",
    "objective_coefficient",
    "assemble_ndt_lp",
    "ndt_upper",
    "ndt_from_ratios",
    "lower_bound_term",
    "ndt_lower_coded",
    "ndt_lower_uncoded",
    "optimality_check",
    "gap_bound_class",
    "gap",
    "ndt_report",
    "full_tx_cache_ratios",
]

BOTH_ZERO = "both-zero"


class InfeasibleCachePoint(ValueError):
    """Raised when mu_r + n_tx * mu_t < 1, i.e. the library does not fit."""

    def __init__(self, cfg: NetworkConfig, pt: CachePoint):
        super().__init__(
            f"cache point (mu_r={pt.mu_r}, mu_t={pt.mu_t}) is infeasible for "
            f"{cfg.n_tx}x{cfg.n_rx}: need mu_r + {cfg.n_tx}*mu_t >= 1"
        )
        self.cfg = cfg
        self.pt = pt


def _require_feasible(cfg, pt):
    if not feasible_cache_point(cfg, pt):
        raise InfeasibleCachePoint(cfg, pt)


def objective_coefficient(cfg: NetworkConfig, r: int, t: int) -> Fraction:
    """Delivery-time weight of ratio a[r, t]: receivers' demanded subfile count over DoF."""
    if r >= cfg.n_rx or t == 0:
        return Fraction(0)
    count = binomial(cfg.n_rx - 1, r) * binomial(cfg.n_tx, t)
    return count / per_user_dof(cfg, r, t).per_user


def assemble_ndt_lp(cfg: NetworkConfig, pt: CachePoint) -> LinearProgram:
    """File-splitting LP with variables ordered as :func:`index_set`."""
    _require_feasible(cfg, pt)
    nr, nt = cfg.n_rx, cfg.n_tx
    keys = index_set(cfg)
    objective = [objective_coefficient(cfg, r, t) for r, t in keys]
    mass, rx, tx = [], [], []
    for r, t in keys:
        if t == 0:
            mass.append(Fraction(1))
            rx.append(Fraction(1))
            tx.append(Fraction(0))
        else:
            mass.append(Fraction(binomial(nr, r) * binomial(nt, t)))
            rx.append(Fraction(binomial(nr - 1, r - 1) * binomial(nt, t)))
            tx.append(Fraction(binomial(nr, r) * binomial(nt - 1, t - 1)))
    return LinearProgram(
        objective=objective,
        eq_rows=[(mass, Fraction(1))],
        le_rows=[(rx, pt.mu_r), (tx, pt.mu_t)],
        var_bounds=[(Fraction(0), Fraction(1))] * len(keys),
    )


def ndt_upper(cfg: NetworkConfig, pt: CachePoint) -> Tuple[Fraction, SplitRatios]:
    """Achievable NDT and one optimal vertex of the splitting LP."""
    lp = assemble_ndt_lp(cfg, pt)
    sol = solve(lp)
    if not sol.optimal:
        # unreachable for feasible points, which always admit a valid split
        raise RuntimeError(f"splitting LP returned {sol.status} at {pt}")
    ratios = SplitRatios(dict(zip(index_set(cfg), sol.point)))
    return sol.value, ratios


def ndt_from_ratios(cfg: NetworkConfig, s: Mapping) -> Fraction:
    """Total delivery time of the groups in ``s`` delivered one after another."""
    legit = set(index_set(cfg))
    for key in s:
        if CacheStateIndex(*key) not in legit:
            raise ValueError(f"cache state {tuple(key)} is not legitimate for {cfg}")
        if not 0 <= s[key] <= 1:
            raise ValueError(f"ratio a{tuple(key)} = {s[key]} outside [0, 1]")
    return sum((objective_coefficient(cfg, r, t) * a for (r, t), a in s.items()), Fraction(0))


def lower_bound_term(cfg: NetworkConfig, pt: CachePoint, l: int, s1: int, s2: int,
                     intra_file_coding: bool = True) -> Fraction:
    """One candidate of the lower-bound maximization for a given (l, s1, s2)."""
    nt = cfg.n_tx
    mu_r, mu_t = pt.mu_r, pt.mu_t
    val = (s1 + s2) - (nt - l) * s2 * mu_t - (Fraction((2 * s2 + s1 + 1) * s1, 2) + s2 * s2) * mu_r
    if not intra_file_coding:
        slack = max(1 - nt * mu_t, Fraction(0))
        val += (Fraction((2 * s2 + s1) * (s1 - 1), 2) + s2 * s2) * slack
    return val / l


def _max_lower(cfg, pt, intra_file_coding):
    best, arg = None, None
    for l in range(1, min(cfg.n_tx, cfg.n_rx) + 1):
        for s1 in range(l + 1):
            for s2 in range(cfg.n_rx - l + 1):
                v = lower_bound_term(cfg, pt, l, s1, s2, intra_file_coding)
                if best is None or v > best:
                    best, arg = v, (l, s1, s2)
    if best < 0:
        best = Fraction(0)
    return best, arg


def ndt_lower_coded(cfg: NetworkConfig, pt: CachePoint) -> Tuple[Fraction, Tuple[int, int, int]]:
    """Lower bound valid when caches may hold arbitrary intra-file codes.

    Returns the bound (clamped at 0) and the lexicographically smallest
    maximizing ``(l, s1, s2)``.
    """
    return _max_lower(cfg, pt, True)


def ndt_lower_uncoded(cfg: NetworkConfig, pt: CachePoint) -> Tuple[Fraction, Tuple[int, int, int]]:
    """Lower bound for caches restricted to uncoded pieces of each file."""
    return _max_lower(cfg, pt, False)


def optimality_check(cfg: NetworkConfig, pt: CachePoint,
                     intra_file_coding: bool = True) -> Optional[Tuple[int, Fraction]]:
    """First cache-size condition under which the achievable NDT is known optimal.

    Returns ``(case, tau_star)`` or ``None``.  Case 4 (the storage boundary)
    only applies when ``intra_file_coding`` is False.  Where several cases
    match, their values must agree; this is asserted.
    """
    _require_feasible(cfg, pt)
    nt, nr = cfg.n_tx, cfg.n_rx
    mu_r, mu_t = pt.mu_r, pt.mu_t
    matches = []
    if nr * mu_r + nt * mu_t >= nr:
        matches.append((1, 1 - mu_r))
    if (mu_r, mu_t) == (0, 1):
        matches.append((2, Fraction(nr, min(nt, nr))))
    if (mu_r, mu_t) == (0, Fraction(1, nt)):
        matches.append((3, Fraction(nt + nr - 1, nt)))
    if not intra_file_coding and mu_r + nt * mu_t == 1:
        matches.append((4, Fraction(nt + nr - 1, nt) * (1 - mu_r)))
    if not matches:
        return None
    values = {v for _, v in matches}
    assert len(values) == 1, f"overlapping optimality cases disagree: {matches}"
    return matches[0]


def gap_bound_class(cfg: NetworkConfig, pt: CachePoint) -> Fraction:
    """Guaranteed ceiling on upper/lower for this network size and transmitter cache."""
    nt, nr = cfg.n_tx, cfg.n_rx
    if nt >= nr:
        return Fraction(2)
    if pt.mu_t >= Fraction(1, nt):
        return Fraction(12)
    return Fraction(nt + nr - 1, nt)


def gap(cfg: NetworkConfig, pt: CachePoint,
        tau_upper: Optional[Fraction] = None) -> Tuple[Fraction, Fraction]:
    """Multiplicative gap between the achievable NDT and the coded lower bound.

    When both bounds are zero (everything cached at the receivers) the gap
    is reported as 1.
    """
    _require_feasible(cfg, pt)
    if tau_upper is None:
        tau_upper, _ = ndt_upper(cfg, pt)
    lower, _ = ndt_lower_coded(cfg, pt)
    if lower == 0:
        if tau_upper != 0:
            raise ArithmeticError(f"lower bound 0 but upper bound {tau_upper} at {pt}")
        g = Fraction(1)
    else:
        g = tau_upper / lower
    return g, gap_bound_class(cfg, pt)


@dataclass(frozen=True)
class NdtReport:
    cfg: NetworkConfig
    point: CachePoint
    tau_upper: Fraction
    ratios: SplitRatios
    tau_lower_coded: Fraction
    tau_lower_uncoded: Fraction
    lower_argmax: Tuple[int, int, int]
    optimality: Optional[Tuple[int, Fraction]]
    gap: Union[Fraction, str]
    gap_bound_class: Fraction
    both_zero: bool = False


def ndt_report(cfg: NetworkConfig, pt: CachePoint, intra_file_coding: bool = True) -> NdtReport:
    tau_u, ratios = ndt_upper(cfg, pt)
    assert validate_split(cfg, pt, ratios).ok
    l1, arg = ndt_lower_coded(cfg, pt)
    l2, _ = ndt_lower_uncoded(cfg, pt)
    g, cls = gap(cfg, pt, tau_u)
    return NdtReport(
        cfg=cfg,
        point=pt,
        tau_upper=tau_u,
        ratios=ratios,
        tau_lower_coded=l1,
        tau_lower_uncoded=l2,
        lower_argmax=arg,
        optimality=optimality_check(cfg, pt, intra_file_coding),
        gap=g,
        gap_bound_class=cls,
        both_zero=(l1 == 0 and tau_u == 0),
    )


def full_tx_cache_ratios(cfg: NetworkConfig, m: int) -> SplitRatios:
    """Equal splitting over m receivers and all transmitters at mu_r = m / n_rx, mu_t = 1."""
    if not 0 <= m <= cfg.n_rx:
        raise ValueError("m must lie in 0..n_rx")
    if m == cfg.n_rx:
        return SplitRatios({(cfg.n_rx, 0): 1})
    return SplitRatios({(m, cfg.n_tx): Fraction(1, binomial(cfg.n_rx, m))})
