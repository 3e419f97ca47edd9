import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from nuca.errors import ContractError
from nuca.gallery import build_entry, xor3_rule
from nuca.rules import (
    BINARY,
    Alphabet,
    Interval,
    LocalRule,
    MirroredPyramid,
    RuleDistribution,
    RuleSet,
    TwoSided,
    Uniform,
    center_projection,
    distribution_at,
    eval_rule,
    neighborhood_of,
    normalize_ruleset,
    recurrence_witness,
    rules_identical,
    shift_distribution,
    uniform_distribution,
    uniform_recurrence_probe,
)


def pyramid():
    return build_entry("example1").distribution


def test_alphabet_glyphs():
    a = Alphabet.from_glyphs("ab")
    assert a.encode("ba") == (1, 0)
    assert a.decode((0, 1, 1)) == "abb"
    with pytest.raises(ContractError):
        Alphabet.from_glyphs("aa")
    with pytest.raises(ContractError):
        a.symbol("z")
    assert Alphabet(1).glyphs == ("0",)


def test_interval_basics():
    d = Interval(2, 5)
    assert len(d) == 4 and list(d) == [2, 3, 4, 5]
    assert 2 in d and 6 not in d
    assert Interval(3, 1).is_empty and len(Interval(3, 1)) == 0
    assert d.widen(1) == Interval(1, 6)
    assert d.shift(-2) == Interval(0, 3)


def test_table_is_total_and_ordered():
    rule = xor3_rule()
    assert len(rule.table) == 8
    assert list(rule.windows())[:3] == [(0, 0, 0), (0, 0, 1), (0, 1, 0)]
    with pytest.raises(ContractError):
        LocalRule("bad", 1, 2, (0,) * 7)
    with pytest.raises(ContractError):
        LocalRule("bad", 1, 2, (0,) * 7 + (2,))


def test_eval_rule_examples():
    tau = build_entry("traffic_halfplane").rule("tau")
    g = build_entry("example1").rule("g")
    f = build_entry("balance_counterexample").rule("f")
    assert eval_rule(tau, (0, 1, 1)) == 0
    assert eval_rule(g, (1, 0, 1)) == 0
    assert eval_rule(f, (1, 1, 0)) == 0
    with pytest.raises(ContractError):
        eval_rule(tau, (0, 1))
    with pytest.raises(ContractError):
        eval_rule(tau, (0, 1, 2))


def test_radius_zero_rule():
    flip = LocalRule.from_function("flip", 0, 2, lambda b: 1 - b)
    theta = uniform_distribution(flip)
    assert eval_rule(flip, (0,)) == 1
    assert neighborhood_of(theta, Interval(3, 3)) == Interval(3, 3)


def test_rules_identical_examples():
    e1 = build_entry("example1")
    h = center_projection("h", 2)
    assert rules_identical(center_projection("f", 1), h)
    assert rules_identical(h, center_projection("f", 1))
    assert not rules_identical(e1.rule("fL"), e1.rule("fR"))
    for r in e1.ruleset.rules:
        assert rules_identical(r, r)
    with pytest.raises(ContractError):
        rules_identical(center_projection("a", 1, 2), center_projection("b", 1, 3))


def _small_rules():
    rules = [center_projection("p1", 1), center_projection("p2", 2), center_projection("p0", 0)]
    rules.append(LocalRule.from_function("xl", 1, 2, lambda a, b, c: a ^ b))
    rules.append(LocalRule.from_function("xl2", 2, 2, lambda a, b, c, d, e: b ^ c))
    rules.append(LocalRule.from_function("xr2", 2, 2, lambda a, b, c, d, e: c ^ d))
    rules.append(LocalRule.from_function("k0", 1, 2, lambda a, b, c: 0))
    rules.append(LocalRule.from_function("k0b", 0, 2, lambda b: 0))
    return rules


def test_identical_is_an_equivalence():
    rules = _small_rules()
    for f in rules:
        assert rules_identical(f, f)
    for f, g in itertools.product(rules, repeat=2):
        assert rules_identical(f, g) == rules_identical(g, f)
    for f, g, h in itertools.product(rules, repeat=3):
        if rules_identical(f, g) and rules_identical(g, h):
            assert rules_identical(f, h)


def test_normalize_ruleset():
    rs = RuleSet(BINARY, tuple(_small_rules()))
    out, renaming = normalize_ruleset(rs)
    assert set(out.names) == {"p0", "xl", "xr2", "k0b"}
    assert renaming["p2"] == "p0" and renaming["p1"] == "p0"
    assert renaming["xl2"] == "xl" and renaming["k0"] == "k0b"
    for f, g in itertools.combinations(out.rules, 2):
        assert not rules_identical(f, g)

    pair = RuleSet(BINARY, (center_projection("a", 1), center_projection("b", 2)))
    assert normalize_ruleset(pair)[0].names == ("a",)

    e1 = build_entry("example1").ruleset
    out, renaming = normalize_ruleset(e1)
    assert out == e1 and all(k == v for k, v in renaming.items())

    empty = RuleSet(BINARY, ())
    assert len(normalize_ruleset(empty)[0]) == 0


def test_ruleset_contracts():
    with pytest.raises(ContractError):
        RuleSet(BINARY, (center_projection("a"), center_projection("a", 2)))
    with pytest.raises(ContractError):
        RuleSet(BINARY, (center_projection("a", 1, 3),))
    with pytest.raises(ContractError):
        RuleDistribution(RuleSet(BINARY, (center_projection("a"),)), Uniform("b"))


def test_distribution_at_examples():
    traffic = build_entry("traffic_halfplane").distribution
    assert distribution_at(traffic, 1).name == "tau"
    assert distribution_at(traffic, 0).name == "id"
    assert traffic.name_at(-50) == "id" and traffic.name_at(50) == "tau"
    theta = pyramid()
    assert theta.names_on(Interval(0, 2)) == ("fR", "g", "fL")
    xor = uniform_distribution(xor3_rule())
    assert all(xor.name_at(x) == "f" for x in range(-20, 20))


def test_pyramid_matches_explicit_word():
    lo, word = oracle.pyramid_word(9)
    theta = pyramid()
    assert theta.names_on(Interval(lo, lo + len(word) - 1)) == tuple(word)


def test_pyramid_block_lengths():
    # w2 sits immediately left of 0 on [-8, -1]
    theta = pyramid()
    assert theta.names_on(Interval(-8, -1)) == ("fR", "g", "fL", "fR", "fR", "g", "fL", "fL")
    assert theta.names_on(Interval(3, 10)) == theta.names_on(Interval(-8, -1))


def test_two_sided_left_tail_reading():
    d = TwoSided(("a", "b"), ("c",), 0, ("d", "e"))
    # left period appears in reading order: ... a b a b c d e d e ...
    assert [d.at(x) for x in range(-4, 5)] == list("ababcdede")


def test_neighborhood_examples():
    xor = uniform_distribution(xor3_rule())
    assert neighborhood_of(xor, Interval(0, 0)) == Interval(-1, 1)
    assert neighborhood_of(xor, Interval(2, 5)) == Interval(1, 6)
    assert neighborhood_of(xor, Interval.empty()).is_empty
    rs = RuleSet(BINARY, (center_projection("a", 1), center_projection("b", 2)))
    mixed = RuleDistribution(rs, TwoSided(("a",), ("a", "b"), 0, ("a",)))
    assert neighborhood_of(mixed, Interval(0, 1)) == Interval(-1, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(-30, 30), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_neighborhood_monotone(lo, n, extra_lo, extra_hi):
    theta = pyramid()
    d = Interval(lo, lo + n)
    bigger = Interval(lo - extra_lo, lo + n + extra_hi)
    assert neighborhood_of(theta, d).issubset(neighborhood_of(theta, bigger))


def test_shift_distribution_examples():
    xor = uniform_distribution(xor3_rule())
    assert shift_distribution(xor, 7).description == xor.description
    traffic = build_entry("traffic_halfplane").distribution
    assert shift_distribution(traffic, 1).name_at(0) == "tau"
    theta = pyramid()
    assert shift_distribution(theta, 0).names_on(Interval(-40, 40)) == theta.names_on(Interval(-40, 40))


def test_shift_distribution_random_probes():
    rng = random.Random(11)
    dists = [pyramid(), build_entry("traffic_halfplane").distribution,
             build_entry("balance_counterexample").distribution]
    for _ in range(1000):
        theta = rng.choice(dists)
        k, x = rng.randint(-200, 200), rng.randint(-200, 200)
        assert shift_distribution(theta, k).name_at(x) == theta.name_at(x + k)


def test_recurrence_witness_examples():
    xor = uniform_distribution(xor3_rule())
    assert recurrence_witness(xor, Interval(0, 3), 5) == 1
    k = recurrence_witness(pyramid(), Interval(0, 2), 100)
    assert k is not None and k != 0 and abs(k) <= 100
    theta = pyramid()
    assert theta.names_on(Interval(0, 2).shift(k)) == ("fR", "g", "fL")
    traffic = build_entry("traffic_halfplane").distribution
    assert recurrence_witness(traffic, Interval(-1, 1), 10_000) is None
    with pytest.raises(ContractError):
        recurrence_witness(xor, Interval.empty(), 3)


def test_uniform_recurrence_probe_examples():
    xor = uniform_distribution(xor3_rule())
    assert uniform_recurrence_probe(xor, Interval(0, 2), 3, Interval(-50, 50)) == (True, None)

    theta = pyramid()
    start = 19
    assert theta.names_on(Interval(start, start + 2)) == ("fR",) * 3
    ok, x = uniform_recurrence_probe(theta, Interval(start, start + 2), 30, Interval(0, 10_000))
    assert not ok
    # the reported window really lacks the pattern, and it is the first such
    names = theta.names_on(Interval(x, x + 29))
    assert all(names[i : i + 3] != ("fR",) * 3 for i in range(28))

    rs = RuleSet(BINARY, (center_projection("a"), center_projection("b", 2)))
    periodic = RuleDistribution(rs, TwoSided(("a", "b", "b"), (), 0, ("a", "b", "b")))
    d = Interval(5, 6)
    assert uniform_recurrence_probe(periodic, d, len(d) + 3, Interval(-100, 100)) == (True, None)


def test_uniform_recurrence_probe_matches_scan():
    theta = pyramid()
    d = Interval(19, 21)
    target = theta.names_on(d)
    for gap in (8, 12, 20):
        ok, x = uniform_recurrence_probe(theta, d, gap, Interval(-300, 300))
        first = None
        for y in range(-300, 301):
            names = theta.names_on(Interval(y, y + gap - 1))
            if not any(names[i : i + 3] == target for i in range(gap - 2)):
                first = y
                break
        assert (ok, x) == (first is None, first)


def test_mirrored_pyramid_offset_shift():
    d = MirroredPyramid("fR", "g", "fL")
    assert d.shifted(5).at(0) == d.at(5)
    assert d.shifted(-5).shifted(5) == d
