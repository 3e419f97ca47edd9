import random

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from nuca.configs import (
    Configuration,
    Cylinder,
    Pattern,
    cylinder_member,
    evolution,
    evolve_cell,
    evolve_window,
    random_configuration,
    shift_config,
    spacetime,
    step_config,
)
from nuca.errors import ContractError, UnsupportedClosedForm
from nuca.gallery import build_entry, fourstate_blocking, xor3_rule
from nuca.rules import (
    BINARY,
    Interval,
    LocalRule,
    RuleDistribution,
    RuleSet,
    TwoSided,
    center_projection,
    shift_distribution,
    uniform_distribution,
)

ZERO = Configuration.constant(BINARY, 0)
ONE = Configuration.constant(BINARY, 1)


def _funcs(name):
    return {
        "fL": oracle.xor_left, "fR": oracle.xor_right, "g": oracle.centre, "id": oracle.centre,
        "tau": oracle.tau, "xor3": oracle.xor3, "f": oracle.xor3, "max": oracle.max_bc,
    }[name]


def naive(theta, c, window, t, funcs=_funcs):
    return oracle.naive_evolve(
        lambda x: funcs(theta.name_at(x)),
        lambda x: 1,
        c.value_at,
        (window.lo, window.hi),
        t,
    )


def test_value_at_examples():
    assert all(ONE.value_at(x) == 1 for x in range(-9, 9))
    c = Configuration.from_glyphs(BINARY, "0", "101", 0, "0")
    assert c.value_at(1) == 0 and c.value_at(2) == 1 and c.value_at(-3) == 0
    p = Configuration.from_glyphs(BINARY, "01", "", 0, "01")
    assert p.value_at(-1) == 1 and p.value_at(-2) == 0


def test_configuration_contracts():
    with pytest.raises(ContractError):
        Configuration(BINARY, (), (), 0, (0,))
    with pytest.raises(ContractError):
        Configuration(BINARY, (0,), (2,), 0, (0,))


def test_evolve_cell_examples():
    xor = uniform_distribution(xor3_rule())
    assert evolve_cell(xor, ONE, 3, 5) == 1
    traffic = build_entry("traffic_halfplane").distribution
    assert evolve_cell(traffic, ONE, 5, 3) == 1
    c = Configuration.from_glyphs(BINARY, "1", "0", 0, "1")
    assert evolve_cell(traffic, c, 1, 1) == oracle.tau(c.value_at(0), c.value_at(1), c.value_at(2))
    assert evolve_cell(traffic, c, 1, 0) == c.value_at(1)


def test_evolve_window_examples():
    e1 = build_entry("example1").distribution
    w = Interval(-5, 5)
    assert evolve_window(e1, ZERO, w, 0) == Pattern.of(ZERO, w)
    ident = uniform_distribution(center_projection())
    c = Configuration.from_glyphs(BINARY, "01", "1101", -2, "011")
    assert evolve_window(ident, c, w, 4) == Pattern.of(c, w)
    assert evolve_window(e1, ZERO, w, 2).symbols == (0,) * 11


@pytest.mark.parametrize("entry", ["example1", "traffic_halfplane", "balance_counterexample"])
def test_evolve_window_matches_naive_simulator(entry):
    theta = build_entry(entry).distribution
    if entry == "balance_counterexample":
        funcs = lambda n: {"f": oracle.xor3, "g": oracle.max_bc}[n]
    else:
        funcs = _funcs
    rng = random.Random(5)
    for _ in range(40):
        c = random_configuration(rng, BINARY, Interval(-12, 12))
        lo = rng.randint(-30, 20)
        w = Interval(lo, lo + rng.randint(0, 12))
        t = rng.randint(0, 6)
        assert evolve_window(theta, c, w, t).symbols == naive(theta, c, w, t, funcs)


def test_fourstate_matches_naive_simulator():
    theta = build_entry("fourstate_halfplane").distribution
    funcs = lambda n: {"id": oracle.centre, "f": oracle.fourstate}[n]
    rng = random.Random(9)
    for _ in range(40):
        c = random_configuration(rng, theta.alphabet, Interval(-6, 10))
        w = Interval(-3, 9)
        t = rng.randint(0, 6)
        assert evolve_window(theta, c, w, t).symbols == naive(theta, c, w, t, funcs)


def test_spacetime_examples():
    traffic = build_entry("traffic_halfplane")
    theta = traffic.distribution
    grid = spacetime(theta, traffic.configs["single_one"], Interval(0, 8), 4)
    assert grid.steps == 4
    assert grid.to_text().splitlines() == [
        "000010000",
        "000100000",
        "001000000",
        "010000000",
        "000000000",
    ]
    one_row = spacetime(theta, ONE, Interval(0, 8), 0)
    assert one_row.rows == (Pattern.of(ONE, Interval(0, 8)).symbols,)


def test_spacetime_blocking_columns_constant():
    four = build_entry("fourstate_halfplane")
    c = fourstate_blocking(8)
    grid = spacetime(four.distribution, c, Interval(0, 8), 12)
    for row in grid.rows:
        assert row == grid.rows[0]


def test_pgm_levels():
    four = build_entry("fourstate_halfplane")
    c = Configuration.finite(four.alphabet, 0, (0, 1, 2, 3), 0)
    grid = spacetime(four.distribution, c, Interval(0, 3), 0)
    lines = grid.to_pgm().splitlines()
    assert lines[:3] == ["P2", "4 1", "255"]
    assert lines[3] == "0 85 170 255"


def test_step_config_examples():
    ident = uniform_distribution(center_projection())
    c = Configuration.from_glyphs(BINARY, "01", "1101", -2, "011")
    stepped = step_config(ident, c)
    assert all(stepped.value_at(x) == c.value_at(x) for x in range(-40, 40))
    traffic = build_entry("traffic_halfplane").distribution
    assert all(step_config(traffic, ONE).value_at(x) == 1 for x in range(-30, 30))
    bal = build_entry("balance_counterexample").distribution
    assert all(step_config(bal, ZERO).value_at(x) == 0 for x in range(-30, 30))
    with pytest.raises(UnsupportedClosedForm):
        step_config(build_entry("example1").distribution, ZERO)


def test_step_config_consistency():
    rng = random.Random(3)
    thetas = [build_entry(n).distribution for n in ("traffic_halfplane", "balance_counterexample", "uniform_xor3")]
    for _ in range(30):
        theta = rng.choice(thetas)
        c = random_configuration(rng, BINARY, Interval(rng.randint(-5, 5), rng.randint(5, 10)))
        img = step_config(theta, c)
        for _ in range(34):
            x = rng.randint(-200, 200)
            assert img.value_at(x) == evolve_cell(theta, c, x, 1)


def test_shift_config_examples():
    assert shift_config(ONE, 5).value_at(0) == 1
    single = Configuration.finite(BINARY, 0, (1,), 0)
    moved = shift_config(single, 1)
    assert moved.value_at(-1) == 1 and moved.value_at(0) == 0
    assert all(shift_config(single, 0).value_at(x) == single.value_at(x) for x in range(-5, 5))


def test_cylinder_membership():
    base = Configuration.from_glyphs(BINARY, "0", "1011", 0, "0")
    cyl = Cylinder(base, Interval(0, 3))
    assert cylinder_member(cyl, base)
    inside = base.patched(Pattern(Interval(1, 1), (1,)))
    assert not cylinder_member(cyl, inside)
    outside = base.patched(Pattern(Interval(7, 7), (1,)))
    assert cylinder_member(cyl, outside)


def _two_rule_distribution(rng):
    rules = []
    for name in ("a", "b"):
        r = rng.choice([0, 1, 1])
        table = tuple(rng.randrange(2) for _ in range(2 ** (2 * r + 1)))
        rules.append(LocalRule(name, r, 2, table))
    rs = RuleSet(BINARY, tuple(rules))

    def word(n):
        return tuple(rng.choice("ab") for _ in range(n))

    desc = TwoSided(word(rng.randint(1, 3)), word(rng.randint(0, 5)), rng.randint(-4, 4), word(rng.randint(1, 3)))
    return RuleDistribution(rs, desc)


def test_shift_commutation_window_level():
    rng = random.Random(21)
    for _ in range(200):
        theta = _two_rule_distribution(rng)
        c = random_configuration(rng, BINARY, Interval(-6, 6))
        lo = rng.randint(-10, 10)
        w = Interval(lo, lo + rng.randint(0, 6))
        t = rng.randint(1, 3)
        lhs = evolve_window(shift_distribution(theta, 1), shift_config(c, 1), w, t).symbols
        rhs = evolve_window(theta, c, w.shift(1), t).symbols
        assert lhs == rhs


def test_cone_correctness_under_outside_corruption():
    rng = random.Random(8)
    theta = build_entry("example1").distribution
    for _ in range(60):
        c = random_configuration(rng, BINARY, Interval(-10, 10))
        x, t = rng.randint(-15, 15), rng.randint(0, 5)
        r = theta.radius_bound
        cone = Interval(x - r * t, x + r * t)
        noise = random_configuration(rng, BINARY, cone.widen(6))
        corrupted = noise.patched(Pattern.of(c, cone))
        assert evolve_cell(theta, corrupted, x, t) == evolve_cell(theta, c, x, t)


def test_evolution_rows_and_determinism():
    theta = build_entry("traffic_halfplane").distribution
    c = Configuration.from_glyphs(BINARY, "0", "1101001", -2, "10")
    rows = evolution(theta, c, Interval(-4, 6), 5)
    assert rows == evolution(theta, c, Interval(-4, 6), 5)
    for t, row in enumerate(rows):
        assert row == evolve_window(theta, c, Interval(-4, 6), t).symbols
    with pytest.raises(ContractError):
        evolve_cell(theta, c, 0, -1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=10), st.integers(-5, 5), st.integers(-10, 10))
def test_shift_then_read(center, anchor, k):
    c = Configuration(BINARY, (0, 1), tuple(center), anchor, (1, 1, 0))
    s = shift_config(c, k)
    for x in range(-15, 15):
        assert s.value_at(x) == c.value_at(x + k)
