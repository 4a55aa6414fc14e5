"""Bit-level simulation of cache placement and XOR-coded multicast delivery.

Receivers are labelled ``1..n_rx``, transmitters ``1..n_tx`` and files
``1..n_files``.  A subfile is identified by ``(file, rx_set, tx_set)``
where the sets are sorted tuples of node labels.  The PHY layer is
abstracted away: a coded message is assumed delivered intact, and its
air time is its normalized length divided by the group's per-user DoF.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .core import (
    CachePoint,
    CacheStateIndex,
    NetworkConfig,
    SplitRatios,
    binomial,
    feasible_cache_point,
    validate_split,
)
from .dof import per_user_dof

__all__ = [
    "MAX_FILE_BITS",
    "PlacementError",
    "MissingSubfile",
    "BitLibrary",
    "SubfileKey",
    "Subfile",
    "CodedMessage",
    "GroupAccount",
    "DeliveryAccount",
    "ReceiverVerdict",
    "SimulationResult",
    "required_file_size",
    "subfile_layout",
    "place",
    "worst_case_demand",
    "build_group_messages",
    "decode_all",
    "account",
    "flip_bit",
    "simulate",
]

MAX_FILE_BITS = 1 << 20

Nodes = Tuple[int, ...]


class PlacementError(ValueError):
    """Ratios cannot be laid out on the library (invalid split or file too large)."""


class MissingSubfile(KeyError):
    """A subfile needed by the scheme is absent from a cache."""


class SubfileKey(NamedTuple):
    file_id: int
    rx_set: Nodes
    tx_set: Nodes


@dataclass(frozen=True)
class Subfile:
    key: SubfileKey
    start: int
    length: int


@dataclass
class BitLibrary:
    """``n_files`` random files of ``file_size_bits`` bits, one uint8 per bit."""

    n_files: int
    file_size_bits: int
    payloads: np.ndarray

    @classmethod
    def random(cls, n_files: int, file_size_bits: int, seed: int = 0) -> "BitLibrary":
        rng = np.random.default_rng(seed)
        bits = rng.integers(0, 2, size=(n_files, file_size_bits), dtype=np.uint8)
        return cls(n_files, file_size_bits, bits)

    def file(self, file_id: int) -> np.ndarray:
        return self.payloads[file_id - 1]


@dataclass(frozen=True)
class CodedMessage:
    rx_group: Nodes
    tx_group: Nodes
    bits: np.ndarray = field(compare=False)


class GroupAccount(NamedTuple):
    messages_per_receiver: int
    group_ndt: Fraction


@dataclass(frozen=True)
class DeliveryAccount:
    per_group: Dict[CacheStateIndex, GroupAccount]
    total_ndt: Fraction


@dataclass
class ReceiverVerdict:
    receiver: int
    file_id: int
    success: bool
    reconstructed: Optional[np.ndarray] = None
    failure: Optional[str] = None


@dataclass
class SimulationResult:
    file_size_bits: int
    ratios: SplitRatios
    demand: Tuple[int, ...]
    message_counts: Dict[CacheStateIndex, int]
    account: DeliveryAccount
    verdicts: List[ReceiverVerdict]

    @property
    def all_decoded(self) -> bool:
        return all(v.success for v in self.verdicts)


def required_file_size(s: Mapping, cap: int = MAX_FILE_BITS) -> int:
    """Smallest F for which every a[r, t] * F is an integer."""
    f = math.lcm(1, *(Fraction(a).denominator for a in s.values()))
    if f > cap:
        raise PlacementError(f"ratios need F = {f} bits, above the cap of {cap}")
    return f


def subfile_layout(cfg: NetworkConfig, s: Mapping, file_id: int, f_bits: int) -> List[Subfile]:
    """Contiguous bit ranges of one file, ordered by (r, t, rx_set, tx_set)."""
    rx_nodes = range(1, cfg.n_rx + 1)
    tx_nodes = range(1, cfg.n_tx + 1)
    out = []
    pos = 0
    for (r, t) in sorted(CacheStateIndex(*k) for k in s):
        a = Fraction(s[(r, t)])
        if a == 0:
            continue
        length = a * f_bits
        if length.denominator != 1:
            raise PlacementError(f"a[{r},{t}] * F = {length} is not an integer")
        for phi in itertools.combinations(rx_nodes, r):
            for psi in itertools.combinations(tx_nodes, t):
                out.append(Subfile(SubfileKey(file_id, phi, psi), pos, int(length)))
                pos += int(length)
    if pos != f_bits:
        raise PlacementError(f"subfiles cover {pos} of {f_bits} bits")
    return out


Cache = Dict[SubfileKey, np.ndarray]


def place(cfg: NetworkConfig, s: Mapping, lib: BitLibrary,
          pt: Optional[CachePoint] = None) -> Tuple[List[Cache], List[Cache]]:
    """Fill transmitter and receiver caches.

    Returns ``(tx_caches, rx_caches)``, lists indexed by ``label - 1``.
    When ``pt`` is given the ratios are validated against it and measured
    cache loads are checked against the budgets.
    """
    if pt is not None:
        check = validate_split(cfg, pt, s)
        if not check.ok:
            raise PlacementError(f"invalid ratios: {check.violations}")
    f_bits = lib.file_size_bits
    tx_caches: List[Cache] = [dict() for _ in range(cfg.n_tx)]
    rx_caches: List[Cache] = [dict() for _ in range(cfg.n_rx)]
    for file_id in range(1, lib.n_files + 1):
        payload = lib.file(file_id)
        for sub in subfile_layout(cfg, s, file_id, f_bits):
            bits = payload[sub.start:sub.start + sub.length]
            for p in sub.key.tx_set:
                tx_caches[p - 1][sub.key] = bits
            for q in sub.key.rx_set:
                rx_caches[q - 1][sub.key] = bits
    if pt is not None:
        lf = lib.n_files * f_bits
        for cache in tx_caches:
            if sum(b.size for b in cache.values()) > pt.mu_t * lf:
                raise PlacementError("transmitter cache over budget")
        for cache in rx_caches:
            if sum(b.size for b in cache.values()) > pt.mu_r * lf:
                raise PlacementError("receiver cache over budget")
    return tx_caches, rx_caches


def worst_case_demand(cfg: NetworkConfig) -> Tuple[int, ...]:
    """Receiver q requests file q."""
    return tuple(range(1, cfg.n_rx + 1))


def _wanted_key(demand, q, rx_group, tx_group) -> SubfileKey:
    rest = tuple(x for x in rx_group if x != q)
    return SubfileKey(demand[q - 1], rest, tx_group)


def build_group_messages(cfg: NetworkConfig, tx_caches: Sequence[Cache],
                         demand: Sequence[int], group: Tuple[int, int]) -> List[CodedMessage]:
    """One XOR message per (receiver group of size r+1, transmitter group of size t)."""
    r, t = group
    if not (0 <= r <= cfg.n_rx - 1 and 1 <= t <= cfg.n_tx):
        raise ValueError(f"group {group} carries no delivery traffic")
    messages = []
    for phi_plus in itertools.combinations(range(1, cfg.n_rx + 1), r + 1):
        for psi in itertools.combinations(range(1, cfg.n_tx + 1), t):
            parts = []
            for q in phi_plus:
                key = _wanted_key(demand, q, phi_plus, psi)
                for p in psi:
                    if key not in tx_caches[p - 1]:
                        raise MissingSubfile(f"transmitter {p} lacks subfile {key}")
                parts.append(tx_caches[psi[0] - 1][key])
            lengths = {b.size for b in parts}
            if len(lengths) != 1:
                raise PlacementError(f"unequal constituent lengths {lengths} for {phi_plus}, {psi}")
            bits = np.bitwise_xor.reduce(np.stack(parts), axis=0)
            messages.append(CodedMessage(phi_plus, psi, bits))
    return messages


def decode_all(cfg: NetworkConfig, rx_caches: Sequence[Cache],
               messages_by_group: Mapping[Tuple[int, int], Sequence[CodedMessage]],
               demand: Sequence[int], lib: BitLibrary,
               s: Mapping) -> List[ReceiverVerdict]:
    """Strip cached side information, reassemble each demanded file and compare to the library.

    A receiver's verdict names the first subfile that is missing or
    differs from the original.
    """
    verdicts = []
    for q in range(1, cfg.n_rx + 1):
        cache = rx_caches[q - 1]
        want = demand[q - 1]
        recovered: Dict[SubfileKey, np.ndarray] = {}
        failure = None
        for group in sorted(messages_by_group):
            for msg in messages_by_group[group]:
                if q not in msg.rx_group:
                    continue
                bits = msg.bits.copy()
                for other in msg.rx_group:
                    if other == q:
                        continue
                    side = _wanted_key(demand, other, msg.rx_group, msg.tx_group)
                    if side not in cache:
                        failure = failure or f"side information {side} not cached"
                        break
                    bits ^= cache[side]
                recovered[_wanted_key(demand, q, msg.rx_group, msg.tx_group)] = bits
        truth = lib.file(want)
        out = np.zeros_like(truth)
        for sub in subfile_layout(cfg, s, want, lib.file_size_bits):
            piece = cache.get(sub.key)
            if piece is None:
                piece = recovered.get(sub.key)
            if piece is None:
                failure = failure or f"subfile {sub.key} unrecoverable"
                continue
            out[sub.start:sub.start + sub.length] = piece
            if failure is None and not np.array_equal(piece, truth[sub.start:sub.start + sub.length]):
                failure = f"subfile {sub.key} mismatch"
        verdicts.append(ReceiverVerdict(q, want, failure is None, out, failure))
    return verdicts


def account(cfg: NetworkConfig, messages_by_group: Mapping[Tuple[int, int], Sequence[CodedMessage]],
            f_bits: int) -> DeliveryAccount:
    """Air time per group from measured message lengths: count * (length / F) / DoF."""
    per_group = {}
    total = Fraction(0)
    for (r, t) in sorted(messages_by_group):
        msgs = messages_by_group[(r, t)]
        counts = {sum(1 for m in msgs if q in m.rx_group) for q in range(1, cfg.n_rx + 1)}
        if len(counts) != 1:
            raise AssertionError(f"receivers see unequal message counts {counts} in group {(r, t)}")
        count = counts.pop()
        lengths = {m.bits.size for m in msgs}
        if len(lengths) != 1:
            raise AssertionError(f"unequal message lengths {lengths} in group {(r, t)}")
        ratio = Fraction(lengths.pop(), f_bits)
        g = count * ratio / per_user_dof(cfg, r, t).per_user
        per_group[CacheStateIndex(r, t)] = GroupAccount(count, g)
        total += g
    return DeliveryAccount(per_group, total)


def flip_bit(messages_by_group, group: Tuple[int, int], index: int = 0, bit: int = 0):
    """Copy of ``messages_by_group`` with one bit of one message inverted."""
    out = {g: list(ms) for g, ms in messages_by_group.items()}
    msg = out[group][index]
    bits = msg.bits.copy()
    bits[bit] ^= 1
    out[group][index] = CodedMessage(msg.rx_group, msg.tx_group, bits)
    return out


def simulate(cfg: NetworkConfig, pt: CachePoint, s: Optional[Mapping] = None,
             seed: int = 0, demand: Optional[Sequence[int]] = None) -> SimulationResult:
    """Place, deliver group by group in (r, t) order, decode and account.

    Without ``s`` the splitting LP's optimal vertex is used.
    """
    if not feasible_cache_point(cfg, pt):
        raise PlacementError(f"infeasible cache point ({pt.mu_r}, {pt.mu_t})")
    if s is None:
        from .bounds import ndt_upper
        _, s = ndt_upper(cfg, pt)
    s = SplitRatios(s)
    demand = tuple(demand) if demand is not None else worst_case_demand(cfg)
    if len(demand) != cfg.n_rx or not all(1 <= d <= cfg.n_files for d in demand):
        raise ValueError(f"demand {demand} does not fit {cfg}")
    f_bits = required_file_size(s)
    lib = BitLibrary.random(cfg.n_files, f_bits, seed)
    tx_caches, rx_caches = place(cfg, s, lib, pt)
    groups = [(r, t) for (r, t) in s if t >= 1 and r <= cfg.n_rx - 1]
    messages = {g: build_group_messages(cfg, tx_caches, demand, g) for g in groups}
    acct = account(cfg, messages, f_bits)
    verdicts = decode_all(cfg, rx_caches, messages, demand, lib, s)
    counts = {CacheStateIndex(*g): len(m) for g, m in messages.items()}
    expected = {CacheStateIndex(r, t): binomial(cfg.n_rx, r + 1) * binomial(cfg.n_tx, t)
                for r, t in groups}
    assert counts == expected, (counts, expected)
    return SimulationResult(f_bits, s, demand, counts, acct, verdicts)
