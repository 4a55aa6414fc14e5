from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from _support import feasible_grid, square
from cachendt import CachePoint, NetworkConfig, feasible_cache_point, validate_split
from cachendt.bounds import (
    InfeasibleCachePoint,
    assemble_ndt_lp,
    full_tx_cache_ratios,
    gap,
    gap_bound_class,
    ndt_from_ratios,
    ndt_lower_coded,
    ndt_lower_uncoded,
    ndt_report,
    ndt_upper,
    objective_coefficient,
    optimality_check,
)
from cachendt.core import binomial, index_set

CFG22 = square(2)
CFG33 = square(3)


def _lower_terms(cfg, pt, uncoded):
    """Every (l, s1, s2) term of the lower-bound expression; written independently of the module."""
    nt, nr = cfg.n_tx, cfg.n_rx
    mu_r, mu_t = pt.mu_r, pt.mu_t
    slack = max(F(0), 1 - nt * mu_t)
    for l in range(1, min(nt, nr) + 1):
        for s1 in range(l + 1):
            for s2 in range(nr - l + 1):
                val = (s1 + s2) - (nt - l) * s2 * mu_t \
                    - (F(2 * s2 + s1 + 1, 2) * s1 + s2 * s2) * mu_r
                if uncoded:
                    val += (F(2 * s2 + s1, 2) * (s1 - 1) + s2 * s2) * slack
                yield (l, s1, s2), val / l


def _lower_oracle(cfg, pt, uncoded):
    return max([F(0)] + [v for _, v in _lower_terms(cfg, pt, uncoded)])


@st.composite
def configs_and_points(draw, max_n=4):
    nt = draw(st.integers(2, max_n))
    nr = draw(st.integers(2, max_n))
    cfg = NetworkConfig(nt, nr, nr)
    mu_t = draw(st.fractions(0, 1, max_denominator=24))
    lo = max(F(0), 1 - nt * mu_t)
    mu_r = draw(st.fractions(lo, 1, max_denominator=24))
    return cfg, CachePoint(mu_r, mu_t)


# -- LP assembly ---------------------------------------------------------------------

def test_lp_shape_3x3():
    lp = assemble_ndt_lp(CFG33, CachePoint(F(1, 2), F(1, 2)))
    assert lp.n_vars == 13
    assert len(lp.eq_rows) == 1 and len(lp.le_rows) == 2
    assert all(b == (0, 1) for b in lp.var_bounds)


def test_objective_coefficients():
    assert objective_coefficient(CFG22, 0, 1) == 3
    lp = assemble_ndt_lp(CFG33, CachePoint(1, 1))
    idx = index_set(CFG33).index((3, 0))
    assert lp.objective[idx] == 0


def test_lp_rejects_infeasible_point():
    with pytest.raises(InfeasibleCachePoint):
        assemble_ndt_lp(CFG33, CachePoint(0, F(1, 4)))


# -- upper bound ------------------------------------------------------------------------

@pytest.mark.parametrize("cfg,pt,expected", [
    (CFG33, (0, F(1, 2)), F(17, 12)),
    (CFG33, (F(1, 3), F(2, 3)), F(2, 3)),
    (CFG22, (0, F(1, 2)), F(3, 2)),
    (CFG33, (1, 0), F(0)),
])
def test_upper_examples(cfg, pt, expected):
    tau, ratios = ndt_upper(cfg, CachePoint(*pt))
    assert tau == expected
    assert validate_split(cfg, CachePoint(*pt), ratios).ok
    assert ndt_from_ratios(cfg, ratios) == tau


@pytest.mark.parametrize("ratios,expected", [
    ({(0, 3): F(2, 3), (3, 0): F(1, 3)}, F(2, 3)),
    ({(1, 2): F(1, 9)}, F(2, 3)),
    ({(3, 0): F(1)}, F(0)),
])
def test_ndt_from_ratios_examples(ratios, expected):
    assert ndt_from_ratios(CFG33, ratios) == expected


def test_ndt_from_ratios_rejects_unknown_state():
    with pytest.raises(ValueError):
        ndt_from_ratios(CFG33, {(0, 0): F(1)})


@pytest.mark.parametrize("mu_t", [F(k, 12) for k in range(4, 13)])
def test_transmitter_only_curve_3x3(mu_t):
    expected = F(13, 6) - F(3, 2) * mu_t if mu_t <= F(2, 3) else F(3, 2) - mu_t / 2
    assert ndt_upper(CFG33, CachePoint(0, mu_t))[0] == expected


@pytest.mark.parametrize("nt,nr", [(nt, nr) for nt, nr in product(range(2, 6), repeat=2) if nt >= nr])
def test_full_tx_cache_enough_transmitters(nt, nr):
    cfg = NetworkConfig(nt, nr, nr)
    for k in range(0, 13):
        mu_r = F(k, 12)
        assert ndt_upper(cfg, CachePoint(mu_r, 1))[0] == 1 - mu_r


def _full_tx_formula(nt, nr, m):
    mu_r = F(m, nr)
    if m <= nr - nt - 2:
        return nr * (1 - mu_r) / (nt + nr * mu_r)
    if m == nr - nt - 1:
        return 1 - mu_r + F(1, nt * binomial(nr, m))
    return 1 - mu_r


@pytest.mark.parametrize("nt,nr", [(nt, nr) for nt, nr in product(range(2, 6), range(2, 7)) if nt < nr])
def test_full_tx_cache_few_transmitters(nt, nr):
    cfg = NetworkConfig(nt, nr, nr)
    for m in range(nr + 1):
        s = full_tx_cache_ratios(cfg, m)
        pt = CachePoint(F(m, nr), 1)
        assert validate_split(cfg, pt, s).ok
        assert ndt_from_ratios(cfg, s) == _full_tx_formula(nt, nr, m)
        assert ndt_upper(cfg, pt)[0] <= _full_tx_formula(nt, nr, m)


# -- lower bounds ---------------------------------------------------------------------------

def test_lower_coded_corner():
    tau, arg = ndt_lower_coded(CFG33, CachePoint(0, F(1, 3)))
    assert tau == F(5, 3) and arg == (1, 1, 2)


def test_lower_coded_examples():
    assert ndt_lower_coded(CFG22, CachePoint(0, 1))[0] == 1
    assert ndt_lower_coded(CFG33, CachePoint(1, 1))[0] == 0


def test_lower_uncoded_on_tight_line():
    assert ndt_lower_uncoded(CFG33, CachePoint(F(1, 4), F(1, 4)))[0] == F(5, 4)


def test_lower_uncoded_2x2_corner():
    # frozen from the brute-force oracle above
    assert _lower_oracle(CFG22, CachePoint(0, F(1, 2)), True) == F(3, 2)
    assert ndt_lower_uncoded(CFG22, CachePoint(0, F(1, 2)))[0] == F(3, 2)


def test_argmax_is_lexicographically_smallest():
    cfg = NetworkConfig(3, 4, 4)
    for pt in feasible_grid(cfg, F(1, 6)):
        tau, arg = ndt_lower_coded(cfg, pt)
        assert tau == _lower_oracle(cfg, pt, False)
        if tau > 0:
            hits = sorted(k for k, v in _lower_terms(cfg, pt, False) if v == tau)
            assert arg == hits[0]


@given(configs_and_points(max_n=5))
def test_lower_bounds_match_oracle(cp):
    cfg, pt = cp
    assert ndt_lower_coded(cfg, pt)[0] == _lower_oracle(cfg, pt, False)
    assert ndt_lower_uncoded(cfg, pt)[0] == _lower_oracle(cfg, pt, True)


@given(configs_and_points())
def test_uncoded_equals_coded_when_tx_caches_cover_library(cp):
    cfg, pt = cp
    if cfg.n_tx * pt.mu_t >= 1:
        assert ndt_lower_uncoded(cfg, pt) == ndt_lower_coded(cfg, pt)


@given(configs_and_points())
def test_bound_ordering(cp):
    cfg, pt = cp
    upper = ndt_upper(cfg, pt)[0]
    l1 = ndt_lower_coded(cfg, pt)[0]
    l2 = ndt_lower_uncoded(cfg, pt)[0]
    assert l1 <= l2 <= upper
    assert upper >= 1 - pt.mu_r


# -- optimality / gap -------------------------------------------------------------------------

@pytest.mark.parametrize("cfg,pt,expected", [
    (CFG33, (F(1, 3), F(2, 3)), (1, F(2, 3))),
    (CFG33, (F(1, 2), F(1, 2)), (1, F(1, 2))),
    (CFG33, (0, F(1, 3)), (3, F(5, 3))),
])
def test_optimality_examples(cfg, pt, expected):
    assert optimality_check(cfg, CachePoint(*pt)) == expected


def test_first_matching_case_wins():
    # (0, 1) with 4 transmitters and 2 receivers meets cases 1 and 2; both give 1
    cfg = NetworkConfig(4, 2, 4)
    assert optimality_check(cfg, CachePoint(0, 1)) == (1, F(1))
    assert F(cfg.n_rx, min(cfg.n_tx, cfg.n_rx)) == 1


def test_case_four_only_without_intra_file_coding():
    pt = CachePoint(F(1, 4), F(1, 4))
    assert optimality_check(CFG33, pt) is None
    assert optimality_check(CFG33, pt, intra_file_coding=False) == (4, F(5, 4))


def test_gap_examples():
    assert gap(CFG33, CachePoint(0, F(1, 3))) == (F(1), F(2))
    assert gap(CFG33, CachePoint(1, 1)) == (F(1), F(2))
    value, cls = gap(NetworkConfig(2, 3, 3), CachePoint(0, F(1, 2)))
    # mu_t = 1/n_tx sits in the "mu_t >= 1/n_tx" class
    assert cls == 12
    assert value <= F(2)


def test_gap_classes():
    assert gap_bound_class(NetworkConfig(3, 2, 2), CachePoint(0, 1)) == 2
    assert gap_bound_class(NetworkConfig(2, 3, 3), CachePoint(0, 1)) == 12
    assert gap_bound_class(NetworkConfig(2, 3, 3), CachePoint(1, F(1, 3))) == 2


def test_report_bundles_everything():
    rep = ndt_report(CFG33, CachePoint(0, F(1, 3)))
    assert (rep.tau_upper, rep.tau_lower_coded, rep.tau_lower_uncoded) == (F(5, 3),) * 3
    assert rep.gap == 1 and rep.optimality == (3, F(5, 3))
    assert rep.lower_argmax == (1, 1, 2)
    assert not rep.both_zero
    assert ndt_report(CFG33, CachePoint(1, 0)).both_zero


@given(configs_and_points())
def test_gap_within_class(cp):
    cfg, pt = cp
    value, cls = gap(cfg, pt)
    assert 1 <= value <= cls


@given(configs_and_points(), st.fractions(0, 1, max_denominator=24), st.fractions(0, 1, max_denominator=24))
def test_upper_non_increasing(cp, dr, dt):
    cfg, pt = cp
    up = CachePoint(min(F(1), pt.mu_r + dr), min(F(1), pt.mu_t + dt))
    assert feasible_cache_point(cfg, up)
    assert ndt_upper(cfg, up)[0] <= ndt_upper(cfg, pt)[0]
