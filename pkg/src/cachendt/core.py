"""Domain types and combinatorial helpers shared by the rest of the package.

Every ratio, cache size and delivery time is a :class:`fractions.Fraction`,
so closed-form cross-checks are equality tests rather than tolerance tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Tuple, Union

RationalLike = Union[int, str, Fraction]

__all__ = [
    "NetworkConfig",
    "CachePoint",
    "CacheStateIndex",
    "SplitRatios",
    "Violation",
    "ValidationResult",
    "binomial",
    "to_fraction",
    "feasible_cache_point",
    "index_set",
    "validate_split",
    "total_mass",
    "receiver_load",
    "transmitter_load",
]


def binomial(n: int, k: int) -> int:
    """C(n, k), with C(n, k) = 0 whenever k < 0 or k > n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def to_fraction(value: RationalLike) -> Fraction:
    """Parse ``value`` exactly.

    Accepts ints, Fractions and strings of the form ``"p/q"`` or a decimal
    literal such as ``"0.25"``.  Floats are rejected because most cache sizes
    of interest (1/3, 2/3, ...) have no exact binary representation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("pass rationals as 'p/q' or decimal strings, not floats")
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        try:
            return Fraction(Decimal(text))
        except InvalidOperation as exc:
            raise ValueError(f"cannot parse {value!r} as a rational") from exc
    raise TypeError(f"unsupported rational type {type(value).__name__}")


@dataclass(frozen=True)
class NetworkConfig:
    """An ``n_tx`` x ``n_rx`` interference network serving ``n_files`` files."""

    n_tx: int
    n_rx: int
    n_files: int

    def __post_init__(self):
        if self.n_tx < 2 or self.n_rx < 2:
            raise ValueError(
                f"need at least 2 transmitters and 2 receivers, got {self.n_tx}x{self.n_rx}"
            )
        if self.n_files < self.n_rx:
            raise ValueError(
                f"library of {self.n_files} files cannot serve {self.n_rx} distinct demands"
            )

    @classmethod
    def square(cls, n: int) -> "NetworkConfig":
        return cls(n, n, n)


@dataclass(frozen=True)
class CachePoint:
    """Normalized cache sizes at each receiver (``mu_r``) and transmitter (``mu_t``)."""

    mu_r: Fraction
    mu_t: Fraction

    def __init__(self, mu_r: RationalLike, mu_t: RationalLike):
        object.__setattr__(self, "mu_r", to_fraction(mu_r))
        object.__setattr__(self, "mu_t", to_fraction(mu_t))
        if not (0 <= self.mu_r <= 1 and 0 <= self.mu_t <= 1):
            raise ValueError(f"cache sizes must lie in [0, 1], got ({self.mu_r}, {self.mu_t})")

    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.mu_r, self.mu_t))


class CacheStateIndex(NamedTuple):
    """Number of receivers ``r`` and transmitters ``t`` caching a subfile."""

    r: int
    t: int

    def __str__(self) -> str:
        return f"{self.r},{self.t}"

    @classmethod
    def parse(cls, text: str) -> "CacheStateIndex":
        r, t = text.split(",")
        return cls(int(r), int(t))


def feasible_cache_point(cfg: NetworkConfig, pt: CachePoint) -> bool:
    """True iff every bit of the library fits in the combined caches."""
    return (0 <= pt.mu_r <= 1 and 0 <= pt.mu_t <= 1
            and pt.mu_r + cfg.n_tx * pt.mu_t >= 1)


def index_set(cfg: NetworkConfig) -> List[CacheStateIndex]:
    """Legitimate cache states (r, t) in lexicographic order.

    A bit not held by every receiver must sit at one transmitter or more,
    i.e. ``r + n_rx * t >= n_rx``.
    """
    return [
        CacheStateIndex(r, t)
        for r in range(cfg.n_rx + 1)
        for t in range(cfg.n_tx + 1)
        if r + cfg.n_rx * t >= cfg.n_rx
    ]


@dataclass(frozen=True)
class SplitRatios(Mapping):
    """Fraction ``a[r, t]`` of every file cached at exactly r receivers and t transmitters.

    Behaves as a read-only mapping; missing keys read as zero and zero
    entries are dropped on construction.
    """

    ratios: Dict[CacheStateIndex, Fraction] = field(default_factory=dict)

    def __init__(self, ratios: Union[Mapping, Iterable, None] = None):
        items = dict(ratios or {})
        clean = {}
        for key, value in items.items():
            if isinstance(key, str):
                key = CacheStateIndex.parse(key)
            key = CacheStateIndex(*key)
            value = to_fraction(value)
            if not 0 <= value <= 1:
                raise ValueError(f"ratio a{tuple(key)} = {value} outside [0, 1]")
            if value:
                clean[key] = value
        object.__setattr__(self, "ratios", dict(sorted(clean.items())))

    def __getitem__(self, key) -> Fraction:
        return self.ratios.get(CacheStateIndex(*key), Fraction(0))

    def __iter__(self):
        return iter(self.ratios)

    def __len__(self) -> int:
        return len(self.ratios)

    def __hash__(self):
        return hash(tuple(self.ratios.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"a[{k.r},{k.t}]={v}" for k, v in self.ratios.items())
        return f"SplitRatios({body})"

    def to_json(self) -> Dict[str, str]:
        return {str(k): str(v) for k, v in self.ratios.items()}


# -- constraint left-hand sides --------------------------------------------

def total_mass(cfg: NetworkConfig, s: Mapping) -> Fraction:
    """Sum over all cache states of (#subfiles in state) x (subfile size)."""
    nr, nt = cfg.n_rx, cfg.n_tx
    total = Fraction(0)
    for (r, t), a in s.items():
        if t == 0:
            total += a
        else:
            total += binomial(nr, r) * binomial(nt, t) * a
    return total


def receiver_load(cfg: NetworkConfig, s: Mapping) -> Fraction:
    """Fraction of the library stored at one receiver."""
    nr, nt = cfg.n_rx, cfg.n_tx
    load = Fraction(0)
    for (r, t), a in s.items():
        if t == 0:
            load += a
        else:
            load += binomial(nr - 1, r - 1) * binomial(nt, t) * a
    return load


def transmitter_load(cfg: NetworkConfig, s: Mapping) -> Fraction:
    """Fraction of the library stored at one transmitter."""
    nr, nt = cfg.n_rx, cfg.n_tx
    return sum(
        (binomial(nr, r) * binomial(nt - 1, t - 1) * a for (r, t), a in s.items() if t >= 1),
        Fraction(0),
    )


class Violation(NamedTuple):
    constraint: str
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class ValidationResult:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_split(cfg: NetworkConfig, pt: CachePoint, s: Mapping) -> ValidationResult:
    """Check file-size, receiver-cache and transmitter-cache constraints exactly.

    Returns a :class:`ValidationResult` listing every violated constraint
    with its left-hand side.  Keys outside the legitimate cache states are
    reported too.
    """
    legit = set(index_set(cfg))
    bad_keys = [k for k in s if CacheStateIndex(*k) not in legit and s[k]]
    violations = [Violation(f"illegal cache state {tuple(k)}", Fraction(s[k]), Fraction(0))
                  for k in bad_keys]

    mass = total_mass(cfg, s)
    if mass != 1:
        violations.append(Violation("file size (== 1)", mass, Fraction(1)))
    rx = receiver_load(cfg, s)
    if rx > pt.mu_r:
        violations.append(Violation("receiver cache (<= mu_r)", rx, pt.mu_r))
    tx = transmitter_load(cfg, s)
    if tx > pt.mu_t:
        violations.append(Violation("transmitter cache (<= mu_t)", tx, pt.mu_t))
    return ValidationResult(tuple(violations))
