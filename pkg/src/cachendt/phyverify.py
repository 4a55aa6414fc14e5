"""Numerical checks of the neutralization and alignment precoders.

Every scheme is expressed as a list of transmitted symbols.  Each symbol
has a desired receiver group, a cooperating transmitter group, a set of
receivers where it must vanish, and (for aligned schemes) a monomial in
channel-derived factors that scales its precoder.  Verification then
checks, per receiver and over an ``S``-slot symbol extension:

* neutralization residuals are at machine-precision level,
* every leaking symbol lands on a monomial of the enlarged set
  ``M[N + 1]`` (checked on integer exponent vectors),
* the ``S x S`` matrix of desired columns plus aligned interference
  columns is numerically full rank,
* random symbols pass through and are recovered by a linear solve.

Node labels are 1-based throughout, matching :mod:`cachendt.cachesim`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import NetworkConfig, binomial

__all__ = [
    "SchemeCase",
    "GuardError",
    "ChannelRealization",
    "SymbolSpec",
    "MonomialSet",
    "PrecoderScheme",
    "VerifyReport",
    "MAX_N",
    "MAX_SLOTS",
    "RESIDUAL_TOL",
    "RANK_TOL",
    "DECODE_TOL",
    "sample_channel",
    "cofactor_precoder",
    "bordered_determinant",
    "slot_count",
    "finite_n_dof",
    "finite_n_limit",
    "build_case_a",
    "build_case_b",
    "build_case_c",
    "build_scheme",
    "verify_scheme",
    "message_split_plan",
]

MAX_N = 2
MAX_SLOTS = 4096
RESIDUAL_TOL = 1e-9
RANK_TOL = 1e-9
DECODE_TOL = 1e-6

Nodes = Tuple[int, ...]


class SchemeCase(str, Enum):
    A = "A"
    B = "B"
    C_T_LESS = "C_tLtNT"
    C_T_FULL = "C_tEqNT"


class GuardError(ValueError):
    """Requested instance exceeds the N or slot-count caps."""


@dataclass(frozen=True)
class ChannelRealization:
    """``coeffs[u, q-1, p-1]`` is the gain from transmitter p to receiver q in slot u."""

    slots: int
    coeffs: np.ndarray
    seed: int

    def gain(self, rx: Sequence[int], tx: Sequence[int]) -> np.ndarray:
        """Sub-tensor of shape (slots, len(rx), len(tx))."""
        return self.coeffs[:, [q - 1 for q in rx]][:, :, [p - 1 for p in tx]]


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def sample_channel(cfg: NetworkConfig, slots: int, seed: int) -> ChannelRealization:
    """I.i.d. standard complex-normal gains, reproducible from ``seed``."""
    if slots < 1:
        raise ValueError(f"need at least one slot, got {slots}")
    rng = np.random.default_rng(seed)
    h = _complex_normal(rng, (slots, cfg.n_rx, cfg.n_tx))
    while np.any(h == 0):
        zero = h == 0
        h[zero] = _complex_normal(rng, int(zero.sum()))
    return ChannelRealization(slots, h, seed)


def _det(mats: np.ndarray) -> np.ndarray:
    if mats.shape[-1] == 0:
        return np.ones(mats.shape[:-2], dtype=complex)
    return np.linalg.det(mats)


def cofactor_precoder(h_slot: np.ndarray, neutralize_set: Sequence[int],
                      tx_set: Sequence[int]) -> np.ndarray:
    """Cofactors of the free last row of the bordered matrix.

    ``h_slot`` has shape ``(n_rx, n_tx)`` or ``(slots, n_rx, n_tx)``.  The
    bordered matrix stacks the rows of ``neutralize_set`` restricted to
    ``tx_set`` above a row of unknowns; the returned weights (one per entry
    of ``tx_set``, along the last axis) are the cofactors of those unknowns.
    Sending a symbol with these weights nulls it at every receiver in
    ``neutralize_set``.
    """
    k = len(tx_set)
    if len(neutralize_set) != k - 1:
        raise ValueError(f"need |tx_set| = |neutralize_set| + 1, got {k} and {len(neutralize_set)}")
    h = np.asarray(h_slot)
    squeeze = h.ndim == 2
    if squeeze:
        h = h[None]
    rows = h[:, [q - 1 for q in neutralize_set]][:, :, [p - 1 for p in tx_set]]
    c = np.empty((h.shape[0], k), dtype=complex)
    for j in range(k):
        minor = np.delete(rows, j, axis=2)
        c[:, j] = (-1) ** (k - 1 + j) * _det(minor)
    return c[0] if squeeze else c


def bordered_determinant(h_slot: np.ndarray, neutralize_set: Sequence[int],
                         tx_set: Sequence[int], rx: int) -> np.ndarray:
    """Determinant of the bordered matrix with receiver ``rx``'s gains as the last row."""
    h = np.asarray(h_slot)
    squeeze = h.ndim == 2
    if squeeze:
        h = h[None]
    rows = [q - 1 for q in neutralize_set] + [rx - 1]
    mat = h[:, rows][:, :, [p - 1 for p in tx_set]]
    d = _det(mat)
    return d[0] if squeeze else d


# -- bookkeeping --------------------------------------------------------------

def _case_of(cfg: NetworkConfig, r: int, t: int) -> SchemeCase:
    if r + t >= cfg.n_rx:
        return SchemeCase.A
    if r + t == cfg.n_rx - 1:
        return SchemeCase.B
    return SchemeCase.C_T_FULL if t == cfg.n_tx else SchemeCase.C_T_LESS


def _check_case(cfg: NetworkConfig, r: int, t: int, case: SchemeCase):
    if not (0 <= r <= cfg.n_rx - 1 and 1 <= t <= cfg.n_tx):
        raise ValueError(f"(r, t) = ({r}, {t}) out of range for {cfg.n_tx}x{cfg.n_rx}")
    expected = _case_of(cfg, r, t)
    if case is not expected:
        raise ValueError(f"(r, t) = ({r}, {t}) on {cfg.n_tx}x{cfg.n_rx} belongs to case {expected.value}, "
                         f"not {case.value}")


def _alignment_size(cfg: NetworkConfig, r: int, t: int, case: SchemeCase) -> int:
    """Number of factors per monomial set."""
    if case is SchemeCase.B:
        return binomial(cfg.n_rx - 1, r + 1) * binomial(cfg.n_tx, t)
    if case is SchemeCase.C_T_LESS:
        return (cfg.n_rx - r - t) * (cfg.n_tx - t + 1)
    return 0


def _slot_terms(cfg: NetworkConfig, r: int, t: int, case: SchemeCase):
    """(desired coefficient c0, aligned-block count c1, K): S0 = c0 N^K, S = S0 + c1 (N+1)^K."""
    nr, nt = cfg.n_rx, cfg.n_tx
    k = _alignment_size(cfg, r, t, case)
    if case is SchemeCase.B:
        return binomial(nr - 1, r) * binomial(nt, t) * t, 1, k
    if case is SchemeCase.C_T_LESS:
        c0 = binomial(nr - 1, r) * binomial(nt, t) * binomial(nr - r - 1, t - 1) * t
        c1 = binomial(nr - 1, r + 1) * binomial(nr - r - 2, t - 1) * binomial(nt, t - 1)
        return c0, c1, k
    raise ValueError(f"case {case.value} has no alignment terms")


def slot_count(cfg: NetworkConfig, r: int, t: int, n: int, case: SchemeCase) -> Tuple[int, int]:
    """``(S0, S)``: desired symbols per receiver and symbol-extension length."""
    _check_case(cfg, r, t, case)
    nr, nt = cfg.n_rx, cfg.n_tx
    if case is SchemeCase.A:
        rho = binomial(nr - 1, r)
        return rho, rho
    if case is SchemeCase.C_T_FULL:
        s0 = binomial(nr - 1, r) * binomial(nr - r - 1, nt - 1)
        return s0, s0 + binomial(nr - 1, r + 1) * binomial(nr - r - 2, nt - 1)
    if n < 1:
        raise ValueError("alignment order N must be >= 1")
    c0, c1, k = _slot_terms(cfg, r, t, case)
    s0 = c0 * n ** k
    return s0, s0 + c1 * (n + 1) ** k


def finite_n_dof(cfg: NetworkConfig, r: int, t: int, n: int, case: SchemeCase) -> Fraction:
    """Per-user DoF S0 / S of a scheme at finite alignment order ``n``."""
    s0, s = slot_count(cfg, r, t, n, case)
    return Fraction(s0, s)


def finite_n_limit(cfg: NetworkConfig, r: int, t: int, case: SchemeCase) -> Fraction:
    """Limit of :func:`finite_n_dof` as n grows: ratio of the N^K leading coefficients."""
    _check_case(cfg, r, t, case)
    if case is SchemeCase.A:
        return Fraction(1)
    if case is SchemeCase.C_T_FULL:
        return finite_n_dof(cfg, r, t, 1, case)
    c0, c1, _ = _slot_terms(cfg, r, t, case)
    return Fraction(c0, c0 + c1)


# -- scheme description -------------------------------------------------------

AlphaKey = Tuple[Nodes, Nodes, Nodes]      # (rx group, tx group, neutralize set)
FactorKey = Tuple[AlphaKey, int]           # alpha class and the receiver whose bordered det it uses


@dataclass(frozen=True)
class MonomialSet:
    """Products of ``factors`` with every exponent in ``1..order``."""

    key: tuple
    factors: Tuple[FactorKey, ...]

    def exponents(self, order: int):
        return itertools.product(range(1, order + 1), repeat=len(self.factors))

    def contains(self, exps: Sequence[int], order: int) -> bool:
        return len(exps) == len(self.factors) and all(1 <= e <= order for e in exps)


@dataclass(frozen=True)
class SymbolSpec:
    rx_group: Nodes
    tx_group: Nodes
    neutralize: Nodes
    alpha: Optional[AlphaKey] = None
    monomial_set: Optional[tuple] = None
    exponents: Optional[Tuple[int, ...]] = None


@dataclass
class PrecoderScheme:
    """A constructed scheme: symbols, their precoders and the slot budget.

    ``precoders[s, u, p-1]`` is symbol s's weight at transmitter p in slot u.
    """

    case: SchemeCase
    cfg: NetworkConfig
    r: int
    t: int
    n: int
    slots: int
    desired_per_receiver: int
    symbols: List[SymbolSpec]
    precoders: np.ndarray
    channel: ChannelRealization
    monomial_sets: Dict[tuple, MonomialSet] = field(default_factory=dict)
    factor_values: Dict[FactorKey, np.ndarray] = field(default_factory=dict)

    @property
    def dof(self) -> Fraction:
        return Fraction(self.desired_per_receiver, self.slots)


@dataclass
class VerifyReport:
    case: SchemeCase
    slots: int
    desired_per_receiver: int
    finite_dof: Fraction
    limit_dof: Fraction
    max_residual: float
    min_rank_ratio: float
    max_decode_error: float
    max_alignment_error: float
    membership_ok: bool
    square: bool
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _complement(universe: int, nodes: Sequence[int]) -> Nodes:
    return tuple(x for x in range(1, universe + 1) if x not in nodes)


def _subsets(nodes: Sequence[int], k: int):
    return itertools.combinations(tuple(nodes), k)


def _eval_monomial(values: Dict[FactorKey, np.ndarray], mset: MonomialSet,
                   exps: Sequence[int], slots: int) -> np.ndarray:
    out = np.ones(slots, dtype=complex)
    for fk, e in zip(mset.factors, exps):
        out = out * values[fk] ** e
    return out


class _Builder:
    """Shared machinery: alpha draws, factor evaluation and precoder assembly."""

    def __init__(self, cfg, case, r, t, n, slots, seed):
        if slots > MAX_SLOTS:
            raise GuardError(f"S = {slots} exceeds the cap of {MAX_SLOTS} slots")
        self.cfg, self.case, self.r, self.t, self.n = cfg, case, r, t, n
        self.channel = sample_channel(cfg, slots, seed)
        self.alpha_rng = np.random.default_rng([seed, 1])
        self.alpha: Dict[AlphaKey, np.ndarray] = {}
        self.factor_values: Dict[FactorKey, np.ndarray] = {}
        self.sets: Dict[tuple, MonomialSet] = {}
        self.symbols: List[SymbolSpec] = []
        self.precoders: List[np.ndarray] = []

    @property
    def h(self):
        return self.channel.coeffs

    def draw_alphas(self, keys):
        for key in sorted(keys):
            self.alpha[key] = _complex_normal(self.alpha_rng, self.channel.slots)

    def factor(self, fk: FactorKey) -> np.ndarray:
        if fk not in self.factor_values:
            (rx_group, tx_group, neut), q = fk
            self.factor_values[fk] = self.alpha[fk[0]] * bordered_determinant(self.h, neut, tx_group, q)
        return self.factor_values[fk]

    def monomial(self, mset: MonomialSet, exps: Sequence[int]) -> np.ndarray:
        for fk in mset.factors:
            self.factor(fk)
        return _eval_monomial(self.factor_values, mset, exps, self.channel.slots)

    def add_symbol(self, spec: SymbolSpec, active_tx: Sequence[int]):
        c = cofactor_precoder(self.h, spec.neutralize, active_tx)
        scale = np.ones(self.channel.slots, dtype=complex)
        if spec.alpha is not None:
            scale = scale * self.alpha[spec.alpha]
        if spec.monomial_set is not None:
            scale = scale * self.monomial(self.sets[spec.monomial_set], spec.exponents)
        v = np.zeros((self.channel.slots, self.cfg.n_tx), dtype=complex)
        v[:, [p - 1 for p in active_tx]] = c * scale[:, None]
        self.symbols.append(spec)
        self.precoders.append(v)

    def finish(self, s0) -> PrecoderScheme:
        return PrecoderScheme(
            case=self.case, cfg=self.cfg, r=self.r, t=self.t, n=self.n,
            slots=self.channel.slots, desired_per_receiver=s0,
            symbols=self.symbols, precoders=np.array(self.precoders),
            channel=self.channel, monomial_sets=self.sets,
            factor_values=self.factor_values,
        )


def build_case_a(cfg: NetworkConfig, r: int, t: int, seed: int = 0,
                 tx_group: Optional[Sequence[int]] = None) -> PrecoderScheme:
    """Zero-forcing by cofactors when ``r + t >= n_rx``.

    One transmitter group (default ``1..t``) serves every receiver group of
    size r+1 over ``C(n_rx - 1, r)`` slots.  Only its first ``n_rx - r``
    members transmit.
    """
    case = SchemeCase.A
    _check_case(cfg, r, t, case)
    tx_group = tuple(tx_group) if tx_group is not None else tuple(range(1, t + 1))
    if len(tx_group) != t:
        raise ValueError(f"tx_group must have {t} members")
    s0, s = slot_count(cfg, r, t, 1, case)
    b = _Builder(cfg, case, r, t, 1, s, seed)
    active = tx_group[:cfg.n_rx - r]
    for rx_group in _subsets(range(1, cfg.n_rx + 1), r + 1):
        neut = _complement(cfg.n_rx, rx_group)
        b.add_symbol(SymbolSpec(rx_group, tx_group, neut), active)
    return b.finish(s0)


def build_case_b(cfg: NetworkConfig, r: int, t: int, n: int = 1, seed: int = 0) -> PrecoderScheme:
    """Neutralize at all but one undesired receiver, align the last leak, for ``r + t = n_rx - 1``."""
    case = SchemeCase.B
    _check_case(cfg, r, t, case)
    if not 1 <= n <= MAX_N:
        raise GuardError(f"alignment order N must lie in 1..{MAX_N}")
    s0, s = slot_count(cfg, r, t, n, case)
    b = _Builder(cfg, case, r, t, n, s, seed)
    receivers = range(1, cfg.n_rx + 1)
    rx_groups = list(_subsets(receivers, r + 1))
    tx_groups = list(_subsets(range(1, cfg.n_tx + 1), t))
    b.draw_alphas({(rg, tg, tuple(x for x in _complement(cfg.n_rx, rg) if x != leak))
                   for rg in rx_groups for tg in tx_groups
                   for leak in _complement(cfg.n_rx, rg)})
    # one monomial set per receiver: factors from every (rx group, tx group) that leaks there
    for q in receivers:
        factors = tuple(
            ((rg, tg, tuple(x for x in _complement(cfg.n_rx, rg) if x != q)), q)
            for rg in rx_groups if q not in rg for tg in tx_groups
        )
        b.sets[("leak", q)] = MonomialSet(("leak", q), factors)
    for rg in rx_groups:
        undesired = _complement(cfg.n_rx, rg)
        for tg in tx_groups:
            for leak in undesired:
                neut = tuple(x for x in undesired if x != leak)
                mset = b.sets[("leak", leak)]
                for exps in mset.exponents(n):
                    b.add_symbol(SymbolSpec(rg, tg, neut, (rg, tg, neut), mset.key, exps), tg)
    return b.finish(s0)


def build_case_c(cfg: NetworkConfig, r: int, t: int, n: int = 1, seed: int = 0) -> PrecoderScheme:
    """Partial neutralization for ``r + t <= n_rx - 2``.

    With ``t < n_tx`` the residual leaks are aligned per
    (rx group, neutralize set, t-1 transmitters); with ``t = n_tx`` they are
    not aligned and the extension length is finite.
    """
    case = SchemeCase.C_T_FULL if t == cfg.n_tx else SchemeCase.C_T_LESS
    _check_case(cfg, r, t, case)
    if case is SchemeCase.C_T_LESS and not 1 <= n <= MAX_N:
        raise GuardError(f"alignment order N must lie in 1..{MAX_N}")
    s0, s = slot_count(cfg, r, t, n, case)
    b = _Builder(cfg, case, r, t, n, s, seed)
    all_tx = tuple(range(1, cfg.n_tx + 1))
    rx_groups = list(_subsets(range(1, cfg.n_rx + 1), r + 1))
    tx_groups = list(_subsets(all_tx, t))
    classes = [(rg, tg, neut)
               for rg in rx_groups for tg in tx_groups
               for neut in _subsets(_complement(cfg.n_rx, rg), t - 1)]
    b.draw_alphas(classes)
    if case is SchemeCase.C_T_FULL:
        for rg, tg, neut in classes:
            b.add_symbol(SymbolSpec(rg, tg, neut, (rg, tg, neut)), tg)
        return b.finish(s0)

    for rg in rx_groups:
        for neut in _subsets(_complement(cfg.n_rx, rg), t - 1):
            leaks = tuple(x for x in _complement(cfg.n_rx, rg) if x not in neut)
            for tc in _subsets(all_tx, t - 1):
                factors = tuple(
                    ((rg, tuple(sorted(tc + (p,))), neut), q)
                    for p in all_tx if p not in tc for q in leaks
                )
                key = ("block", rg, neut, tc)
                b.sets[key] = MonomialSet(key, factors)
    for rg, tg, neut in classes:
        for tc in _subsets(tg, t - 1):
            mset = b.sets[("block", rg, neut, tc)]
            for exps in mset.exponents(n):
                b.add_symbol(SymbolSpec(rg, tg, neut, (rg, tg, neut), mset.key, exps), tg)
    return b.finish(s0)


def build_scheme(cfg: NetworkConfig, r: int, t: int, n: int = 1, seed: int = 0) -> PrecoderScheme:
    """Dispatch to the construction matching (r, t)."""
    case = _case_of(cfg, r, t)
    if case is SchemeCase.A:
        return build_case_a(cfg, r, t, seed)
    if case is SchemeCase.B:
        return build_case_b(cfg, r, t, n, seed)
    return build_case_c(cfg, r, t, n, seed)


# -- verification ---------------------------------------------------------------

def _received(scheme: PrecoderScheme) -> np.ndarray:
    """``out[s, q-1, u]``: effective gain of symbol s at receiver q in slot u."""
    return np.einsum("uqp,sup->squ", scheme.channel.coeffs, scheme.precoders)


def _equilibrate(mat: np.ndarray, sweeps: int = 50):
    """Alternate row and column normalization; returns ``(scaled, row_scale, col_scale)``.

    ``scaled = diag(row_scale) @ mat @ diag(col_scale)`` has the rank of ``mat``.
    """
    scaled = mat.copy()
    row_scale = np.ones(mat.shape[0])
    col_scale = np.ones(mat.shape[1])
    for _ in range(sweeps):
        rn = np.linalg.norm(scaled, axis=1)
        rn[rn == 0] = 1.0
        scaled /= rn[:, None]
        row_scale /= rn
        cn = np.linalg.norm(scaled, axis=0)
        cn[cn == 0] = 1.0
        scaled /= cn
        col_scale /= cn
    return scaled, row_scale, col_scale


def _rank_ratio(scaled: np.ndarray) -> float:
    sv = np.linalg.svd(scaled, compute_uv=False)
    return float(sv.min() / sv.max())


def verify_scheme(scheme: PrecoderScheme, symbol_seed: int = 0) -> VerifyReport:
    """Run the neutralization, alignment, rank and decoding checks on one scheme."""
    cfg = scheme.cfg
    rec = _received(scheme)
    n_sym, _, slots = rec.shape
    failures: List[str] = []

    # neutralization, relative to each symbol's strongest desired gain
    max_res = 0.0
    for s, spec in enumerate(scheme.symbols):
        ref = max(np.abs(rec[s, q - 1]).max() for q in spec.rx_group)
        for q in spec.neutralize:
            max_res = max(max_res, float(np.abs(rec[s, q - 1]).max() / ref))
    if max_res >= RESIDUAL_TOL:
        failures.append(f"neutralization residual {max_res:.3e} >= {RESIDUAL_TOL}")

    aligned = bool(scheme.monomial_sets)
    membership_ok = True
    max_align = 0.0
    rng = np.random.default_rng([symbol_seed, 2])
    x = (rng.choice([-1.0, 1.0], n_sym) + 1j * rng.choice([-1.0, 1.0], n_sym)) / np.sqrt(2)

    min_ratio = np.inf
    max_err = 0.0
    square = True
    for q in range(1, cfg.n_rx + 1):
        desired = [s for s, sp in enumerate(scheme.symbols) if q in sp.rx_group]
        leaking = [s for s, sp in enumerate(scheme.symbols)
                   if q not in sp.rx_group and q not in sp.neutralize]
        cols = [rec[s, q - 1] for s in desired]
        if aligned:
            relevant = [m for m in scheme.monomial_sets.values() if any(fq == q for _, fq in m.factors)]
            col_of = {}
            for mset in relevant:
                for exps in mset.exponents(scheme.n + 1):
                    col_of[(mset.key, exps)] = len(cols)
                    cols.append(_eval_monomial(scheme.factor_values, mset, exps, slots))
            for s in leaking:
                sp = scheme.symbols[s]
                mset = scheme.monomial_sets[sp.monomial_set]
                try:
                    pos = mset.factors.index((sp.alpha, q))
                except ValueError:
                    membership_ok = False
                    continue
                bumped = tuple(e + (i == pos) for i, e in enumerate(sp.exponents))
                if not mset.contains(bumped, scheme.n + 1):
                    membership_ok = False
                    continue
                target = cols[col_of[(mset.key, bumped)]]
                err = np.abs(rec[s, q - 1] - target).max() / np.abs(target).max()
                max_align = max(max_align, float(err))
        else:
            cols.extend(rec[s, q - 1] for s in leaking)
        mat = np.array(cols).T
        if mat.shape != (slots, slots):
            square = False
            failures.append(f"receiver {q}: matrix shape {mat.shape}, expected ({slots}, {slots})")
            continue
        scaled, row_scale, col_scale = _equilibrate(mat)
        ratio = _rank_ratio(scaled)
        min_ratio = min(min_ratio, ratio)
        if ratio <= RANK_TOL:
            failures.append(f"receiver {q}: rank ratio {ratio:.3e} <= {RANK_TOL}")
            continue
        y = rec[:, q - 1, :].T @ x
        z = col_scale * np.linalg.solve(scaled, row_scale * y)
        xd = x[desired]
        err = float(np.linalg.norm(z[:len(desired)] - xd) / np.linalg.norm(xd))
        max_err = max(max_err, err)
        if err >= DECODE_TOL:
            failures.append(f"receiver {q}: decode error {err:.3e} >= {DECODE_TOL}")
    if not membership_ok:
        failures.append("a leaking symbol falls outside its enlarged monomial set")
    if aligned and max_align >= RESIDUAL_TOL:
        failures.append(f"aligned leak deviates from its monomial by {max_align:.3e}")

    if scheme.case is SchemeCase.A:
        limit = Fraction(1)
    else:
        limit = finite_n_limit(cfg, scheme.r, scheme.t, scheme.case)
    return VerifyReport(
        case=scheme.case,
        slots=scheme.slots,
        desired_per_receiver=scheme.desired_per_receiver,
        finite_dof=scheme.dof,
        limit_dof=limit,
        max_residual=max_res,
        min_rank_ratio=float(min_ratio),
        max_decode_error=max_err,
        max_alignment_error=max_align,
        membership_ok=membership_ok,
        square=square,
        failures=failures,
    )


# -- cooperation-size reduction -------------------------------------------------

def message_split_plan(cfg: NetworkConfig, r: int, t: int, t_small: int) -> Dict[Nodes, List[Tuple[Nodes, Nodes]]]:
    """Regroup messages of the size-t channel into super-messages for size-``t_small`` groups.

    Each message (rx group R, tx group T) is cut into C(t, t_small) pieces,
    one per subset T' of T; the super-message for (R, T') gathers the
    pieces of every T containing T'.  Returns ``T' -> [(R, T), ...]``.
    """
    if not 1 <= t_small <= t <= cfg.n_tx:
        raise ValueError("need 1 <= t_small <= t <= n_tx")
    plan: Dict[Nodes, List[Tuple[Nodes, Nodes]]] = {}
    rx_groups = list(_subsets(range(1, cfg.n_rx + 1), r + 1))
    for tg in _subsets(range(1, cfg.n_tx + 1), t):
        for sub in _subsets(tg, t_small):
            plan.setdefault(sub, []).extend((rg, tg) for rg in rx_groups)
    return dict(sorted(plan.items()))
