"""Achievable per-user DoF of the cooperative X-multicast channel.

In the channel formed by the (r, t) subfile group, every set of ``t``
transmitters holds an independent message for every set of ``r + 1``
receivers.  Three regimes apply:

* ``r + t >= n_rx`` -- neutralization removes all interference, DoF 1;
* ``r + t == n_rx - 1`` -- one residual interferer per message, removed by
  asymptotic alignment;
* ``r + t <= n_rx - 2`` -- the better of message splitting over receiver
  sets, ``(r + t) / n_rx``, and neutralize-then-align over any smaller
  cooperation size ``t' <= t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from .core import NetworkConfig, binomial

__all__ = [
    "DofCase",
    "DofEntry",
    "per_user_dof",
    "sum_dof",
    "dof_table",
    "align_dof",
    "best_align_dof",
]


class DofCase(str, Enum):
    FULL = "Full"
    ONE_RESIDUAL = "OneResidual"
    SPLIT_OR_ALIGN = "SplitOrAlign"


@dataclass(frozen=True)
class DofEntry:
    r: int
    t: int
    per_user: Fraction
    case: DofCase
    best_t_prime: Optional[int] = None


def _check_range(cfg: NetworkConfig, r: int, t: int):
    if not (0 <= r <= cfg.n_rx - 1 and 1 <= t <= cfg.n_tx):
        raise ValueError(
            f"(r, t) = ({r}, {t}) outside 0 <= r <= {cfg.n_rx - 1}, 1 <= t <= {cfg.n_tx}"
        )


def align_dof(cfg: NetworkConfig, r: int, t: int) -> Fraction:
    """Limit DoF of neutralize-then-align with cooperation size ``t``.

    Meant for ``r + t <= n_rx - 2``; it also evaluates wherever
    ``t <= n_rx - r``.  Beyond that no receiver sees any desired symbol.
    """
    _check_range(cfg, r, t)
    nr, nt = cfg.n_rx, cfg.n_tx
    desired = binomial(nr - 1, r) * binomial(nt, t) * binomial(nr - r - 1, t - 1) * t
    leak = binomial(nr - 1, r + 1) * binomial(nr - r - 2, t - 1) * binomial(nt, t - 1)
    if desired == 0:
        raise ValueError(f"alignment with t = {t} undefined for r = {r} on {nt}x{nr}")
    return Fraction(desired, desired + leak)


def best_align_dof(cfg: NetworkConfig, r: int, t: int):
    """Max of :func:`align_dof` over ``1 <= t' <= t``; ties go to the smallest t'."""
    best, arg = None, None
    for tp in range(1, t + 1):
        d = align_dof(cfg, r, tp)
        if best is None or d > best:
            best, arg = d, tp
    return best, arg


def per_user_dof(cfg: NetworkConfig, r: int, t: int) -> DofEntry:
    _check_range(cfg, r, t)
    nr, nt = cfg.n_rx, cfg.n_tx
    if r + t >= nr:
        return DofEntry(r, t, Fraction(1), DofCase.FULL)
    if r + t == nr - 1:
        w = binomial(nr - 1, r) * binomial(nt, t) * t
        return DofEntry(r, t, Fraction(w, w + 1), DofCase.ONE_RESIDUAL)
    d_align, t_prime = best_align_dof(cfg, r, t)
    d = max(d_align, Fraction(r + t, nr))
    return DofEntry(r, t, d, DofCase.SPLIT_OR_ALIGN, t_prime)


def sum_dof(cfg: NetworkConfig, r: int, t: int) -> Fraction:
    """Each message serves r + 1 receivers, so sum DoF is n_rx / (r + 1) per-user DoF."""
    return Fraction(cfg.n_rx, r + 1) * per_user_dof(cfg, r, t).per_user


def dof_table(cfg: NetworkConfig) -> List[DofEntry]:
    return [per_user_dof(cfg, r, t)
            for r in range(cfg.n_rx)
            for t in range(1, cfg.n_tx + 1)]
