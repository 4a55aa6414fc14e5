from fractions import Fraction as F
from itertools import product
from math import factorial

import pytest
from hypothesis import given, strategies as st

from cachendt.core import (
    CachePoint,
    CacheStateIndex,
    NetworkConfig,
    SplitRatios,
    binomial,
    feasible_cache_point,
    index_set,
    receiver_load,
    to_fraction,
    total_mass,
    transmitter_load,
    validate_split,
)

CFG33 = NetworkConfig(3, 3, 3)

fractions01 = st.fractions(min_value=0, max_value=1, max_denominator=48)
sizes = st.integers(min_value=2, max_value=6)


def _brute_index_set(cfg):
    return [(r, t) for r in range(cfg.n_rx + 1) for t in range(cfg.n_tx + 1)
            if r + cfg.n_rx * t >= cfg.n_rx]


# -- binomial / parsing ---------------------------------------------------------

@pytest.mark.parametrize("n,k,expected", [(4, 2, 6), (3, 0, 1), (2, 3, 0), (5, -1, 0)])
def test_binomial_examples(n, k, expected):
    assert binomial(n, k) == expected


@given(st.integers(0, 20), st.integers(0, 20))
def test_binomial_matches_factorial_formula(n, k):
    expected = factorial(n) // (factorial(k) * factorial(n - k)) if k <= n else 0
    assert binomial(n, k) == expected


@pytest.mark.parametrize("text,value", [("1/3", F(1, 3)), ("0.25", F(1, 4)), (" 2/6 ", F(1, 3)),
                                        ("1", F(1)), (3, F(3)), (F(2, 5), F(2, 5))])
def test_to_fraction_parses_exactly(text, value):
    assert to_fraction(text) == value


@pytest.mark.parametrize("bad", [0.5, True, "abc", None])
def test_to_fraction_rejects(bad):
    with pytest.raises((TypeError, ValueError)):
        to_fraction(bad)


# -- config / point -----------------------------------------------------------------

def test_config_rejects_degenerate():
    with pytest.raises(ValueError):
        NetworkConfig(1, 3, 3)
    with pytest.raises(ValueError):
        NetworkConfig(3, 3, 2)
    assert NetworkConfig.square(4) == NetworkConfig(4, 4, 4)


def test_cache_point_range_and_unpacking():
    mu_r, mu_t = CachePoint("1/3", "2/3")
    assert (mu_r, mu_t) == (F(1, 3), F(2, 3))
    with pytest.raises(ValueError):
        CachePoint(F(3, 2), 0)


def test_cache_state_index_round_trip():
    key = CacheStateIndex(1, 2)
    assert str(key) == "1,2"
    assert CacheStateIndex.parse("1,2") == key


# -- feasibility ----------------------------------------------------------------------

@pytest.mark.parametrize("pt,expected", [((0, F(1, 3)), True), ((1, 0), True), ((0, F(1, 4)), False)])
def test_feasible_cache_point_examples(pt, expected):
    assert feasible_cache_point(CFG33, CachePoint(*pt)) is expected


@given(sizes, sizes, fractions01, fractions01, fractions01, fractions01)
def test_feasibility_is_monotone(nt, nr, a, b, da, db):
    cfg = NetworkConfig(nt, nr, nr)
    lo = CachePoint(a, b)
    hi = CachePoint(min(F(1), a + da), min(F(1), b + db))
    if feasible_cache_point(cfg, lo):
        assert feasible_cache_point(cfg, hi)


# -- index set ------------------------------------------------------------------------

def test_index_set_2x2_exact():
    got = [tuple(k) for k in index_set(NetworkConfig(2, 2, 2))]
    assert got == [(0, 1), (0, 2), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]


def test_index_set_3x3_has_13_members():
    got = index_set(CFG33)
    assert len(got) == 13
    assert set(got) == {(3, 0)} | {(r, t) for r in range(4) for t in range(1, 4)}


@pytest.mark.parametrize("nt,nr", list(product(range(2, 7), repeat=2)))
def test_index_set_matches_definition(nt, nr):
    cfg = NetworkConfig(nt, nr, nr)
    got = [tuple(k) for k in index_set(cfg)]
    assert got == _brute_index_set(cfg)
    assert len(got) == (nr + 1) * nt + 1
    assert (nr, 0) in got


# -- split ratios ------------------------------------------------------------------------

def test_split_ratios_mapping_behaviour():
    s = SplitRatios({(1, 2): F(1, 9), "0,1": 0, (3, 0): "1/3"})
    assert list(s) == [(1, 2), (3, 0)]
    assert s[(0, 1)] == 0
    assert s[(3, 0)] == F(1, 3)
    assert s.to_json() == {"1,2": "1/9", "3,0": "1/3"}
    with pytest.raises(ValueError):
        SplitRatios({(0, 1): F(3, 2)})


def test_validate_two_subfile_split():
    pt = CachePoint(F(1, 3), F(2, 3))
    assert validate_split(CFG33, pt, {(0, 3): F(2, 3), (3, 0): F(1, 3)}).ok


def test_validate_nine_subfile_split():
    pt = CachePoint(F(1, 3), F(2, 3))
    assert validate_split(CFG33, pt, {(1, 2): F(1, 9)}).ok


def test_validate_reports_mass_violation_with_lhs():
    res = validate_split(NetworkConfig(2, 2, 2), CachePoint(0, F(1, 2)), {(0, 1): F(1, 4)})
    assert not res.ok
    (v,) = res.violations
    assert v.constraint.startswith("file size")
    assert v.lhs == F(1, 2)


def test_validate_reports_cache_overflow():
    res = validate_split(CFG33, CachePoint(0, F(1, 3)), {(3, 0): F(1)})
    names = [v.constraint for v in res.violations]
    assert any(n.startswith("receiver cache") for n in names)


def test_validate_flags_illegal_state():
    res = validate_split(CFG33, CachePoint(1, 1), {(0, 0): F(1)})
    assert any("illegal" in v.constraint for v in res.violations)


def _loads_by_enumeration(cfg, s):
    """Count subfiles per node by listing every (receiver set, transmitter set)."""
    from itertools import combinations
    rx = range(cfg.n_rx)
    tx = range(cfg.n_tx)
    mass = F(0)
    rx0 = F(0)
    tx0 = F(0)
    for (r, t), a in s.items():
        for phi in combinations(rx, r):
            for psi in combinations(tx, t):
                mass += a
                rx0 += a if 0 in phi else 0
                tx0 += a if 0 in psi else 0
    return mass, rx0, tx0


@given(sizes, sizes, st.data())
def test_loads_match_enumeration(nt, nr, data):
    cfg = NetworkConfig(nt, nr, nr)
    keys = index_set(cfg)
    picked = data.draw(st.lists(st.sampled_from(keys), min_size=1, max_size=4, unique=True))
    s = SplitRatios({k: data.draw(st.fractions(0, 1, max_denominator=30)) for k in picked})
    assert (total_mass(cfg, s), receiver_load(cfg, s), transmitter_load(cfg, s)) == \
        _loads_by_enumeration(cfg, s)


@given(st.data())
def test_tight_split_cannot_grow(data):
    # Any valid split with cache constraints tight: raising one ratio breaks the mass equality.
    pt = CachePoint(F(1, 3), F(2, 3))
    s = {(1, 2): F(1, 9)}
    assert validate_split(CFG33, pt, s).ok
    key = data.draw(st.sampled_from(index_set(CFG33)))
    eps = data.draw(st.fractions(min_value=F(1, 1000), max_value=F(1, 10)))
    bumped = dict(s)
    bumped[key] = bumped.get(key, F(0)) + eps
    assert not validate_split(CFG33, pt, bumped).ok
