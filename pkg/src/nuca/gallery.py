"""Named automata with pinned, machine-checkable facts.

Rule tables are transcribed case by case from their defining clauses; the
4-state rule's catch-all clause is expanded into an explicit total table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .configs import Configuration, Pattern, evolve_cell
from .dynamics import cylinder_invariance_check, divergence_search
from .finitemaps import balance_audit, mutual_erasability_search, preimage_count
from .inverse import Conflict, assemble_inverse, local_inverse_candidate, verify_conflict_with_configs
from .rules import (
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
    find_run,
)

QUATERNARY = Alphabet(4)


@dataclass(frozen=True)
class PinnedFact:
    description: str
    check: Callable[[], bool] = field(compare=False)


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    ruleset: RuleSet
    distribution: RuleDistribution
    configs: dict = field(compare=False)
    facts: tuple[PinnedFact, ...] = field(compare=False, default=())

    @property
    def alphabet(self) -> Alphabet:
        return self.ruleset.alphabet

    def rule(self, name: str) -> LocalRule:
        return self.ruleset[name]


# -- rule transcriptions -------------------------------------------------------


def xor_left_rule() -> LocalRule:
    return LocalRule.from_function("fL", 1, 2, lambda a, b, c: a ^ b)


def xor_right_rule() -> LocalRule:
    return LocalRule.from_function("fR", 1, 2, lambda a, b, c: b ^ c)


def xor3_rule(name: str = "f") -> LocalRule:
    return LocalRule.from_function(name, 1, 2, lambda a, b, c: a ^ b ^ c)


def max_rule(name: str = "g") -> LocalRule:
    return LocalRule.from_function(name, 1, 2, lambda a, b, c: max(b, c))


def traffic_rule(name: str = "tau") -> LocalRule:
    def tau(a, b, c):
        if a == 0 and b == 1:
            return 0
        if b == 0 and c == 1:
            return 1
        return b

    return LocalRule.from_function(name, 1, 2, tau)


def fourstate_rule(name: str = "f") -> LocalRule:
    def f(a, b, c):
        if b == 0 and c == 3:
            return 3
        if (a, b, c) in ((1, 1, 1), (1, 1, 2)):
            return 1
        if b == 1 and c == 3:
            return 3
        if a == 1 and b == 2:
            return 2
        if b == 3 and c == 3:
            return 3
        return 0

    return LocalRule.from_function(name, 1, 4, f)


# -- entries -------------------------------------------------------------------


def _example1() -> GalleryEntry:
    rs = RuleSet(BINARY, (xor_left_rule(), xor_right_rule(), center_projection("g")))
    theta = RuleDistribution(rs, MirroredPyramid("fR", "g", "fL"), "example1")
    zero = Configuration.constant(BINARY, 0)
    one = Configuration.constant(BINARY, 1)

    def conflict_certified(R=2):
        start = find_run(theta, "fR", 2 * R + 1, Interval(0, 1000))
        x = start + R
        outcome = local_inverse_candidate(theta, x, R)
        return isinstance(outcome, Conflict) and verify_conflict_with_configs(theta, x, R, zero, one)

    facts = (
        PinnedFact("fL(1,0,0) = 1 and fR(1,0,0) = 0", lambda: rs["fL"](1, 0, 0) == 1 and rs["fR"](1, 0, 0) == 0),
        PinnedFact("cells 0,1,2 carry fR, g, fL", lambda: theta.names_on(Interval(0, 2)) == ("fR", "g", "fL")),
        PinnedFact("no mutually erasable pair on [0,6] with pad 0",
                   lambda: mutual_erasability_search(theta, Interval(0, 6), 0) is None),
        PinnedFact("balanced on [0,4]", lambda: balance_audit(theta, Interval(0, 4)).balanced),
        PinnedFact("radius-2 conflict at the centre of an fR run, certified by all-0 / all-1",
                   conflict_certified),
    )
    return GalleryEntry("example1", rs, theta, {"all_zero": zero, "all_one": one}, facts)


def example1_nonrecurrent() -> RuleDistribution:
    """``...fR fR g fL fL...`` with ``g`` at cell 0."""
    rs = _example1().ruleset
    return RuleDistribution(rs, TwoSided(("fR",), ("g",), 0, ("fL",)), "example1_nonrecurrent")


def _balance_counterexample() -> GalleryEntry:
    rs = RuleSet(BINARY, (xor3_rule("f"), max_rule("g")))
    theta = RuleDistribution(rs, TwoSided(("f",), ("g",), 0, ("f",)), "balance_counterexample")
    zero = Configuration.constant(BINARY, 0)
    d0 = Interval(0, 0)

    def audit_witness():
        report = balance_audit(theta, d0)
        p, n = report.witness
        return not report.balanced and p.symbols == (1,) and n == 6 and report.expected == 4

    facts = (
        PinnedFact("cell 0 uses g, cell 1 uses f", lambda: theta.name_at(0) == "g" and theta.name_at(1) == "f"),
        PinnedFact("pattern 1 on {0} has 6 pre-images, 4 expected",
                   lambda: (lambda r: (r.count, r.expected) == (6, 4))(preimage_count(theta, d0, Pattern(d0, (1,))))),
        PinnedFact("balance audit on {0} is Unbalanced with witness (1, 6, 4)", audit_witness),
    )
    configs = {"all_zero": zero, "single_one": Configuration.finite(BINARY, 0, (1,), 0)}
    return GalleryEntry("balance_counterexample", rs, theta, configs, facts)


def _halfplane(name: str, rule: LocalRule, alphabet: Alphabet) -> RuleDistribution:
    rs = RuleSet(alphabet, (center_projection("id", 1, alphabet.size), rule))
    # id on x <= 0, rule on x > 0
    return RuleDistribution(rs, TwoSided(("id",), (), 1, (rule.name,)), name)


def _traffic_halfplane() -> GalleryEntry:
    theta = _halfplane("traffic_halfplane", traffic_rule(), BINARY)
    rs = theta.ruleset
    ones = Configuration.constant(BINARY, 1)
    zeros = Configuration.constant(BINARY, 0)

    def diverges():
        w = divergence_search(theta, zeros, Interval(-3, 3), Interval(1, 1), [0, 1], 64)
        return w is not None and w.replay(theta, zeros)

    facts = (
        PinnedFact("tau(0,1,1) = 0 and tau(1,0,1) = 1", lambda: rs["tau"](0, 1, 1) == 0 and rs["tau"](1, 0, 1) == 1),
        PinnedFact("theta(1) = tau, theta(0) = id", lambda: theta.name_at(1) == "tau" and theta.name_at(0) == "id"),
        PinnedFact("all-ones is fixed", lambda: evolve_cell(theta, ones, 5, 3) == 1),
        PinnedFact("Cyl(all-ones, [0,4]) is invariant",
                   lambda: cylinder_invariance_check(theta, ones, Interval(0, 4)).invariant),
        PinnedFact("divergence at cell 1 from all-zeros with probes 0,1", diverges),
    )
    configs = {
        "all_ones": ones,
        "all_zeros": zeros,
        "single_one": Configuration.finite(BINARY, 0, (1,), 4),
    }
    return GalleryEntry("traffic_halfplane", rs, theta, configs, facts)


def fourstate_blocking(j: int = 8) -> Configuration:
    """All 1s except a 2 at cell ``j``."""
    return Configuration.finite(QUATERNARY, 1, (2,), j)


def fourstate_flood(x1: int, d: int, background: int = 1) -> Configuration:
    """``c(x1) = 0``, 1s on ``(x1, x1+d)``, 2 at ``x1+d``, ``background`` elsewhere."""
    return Configuration.finite(QUATERNARY, background, (0,) + (1,) * (d - 1) + (2,), x1)


def _fourstate_halfplane() -> GalleryEntry:
    theta = _halfplane("fourstate_halfplane", fourstate_rule(), QUATERNARY)
    rs = theta.ruleset
    blocking = fourstate_blocking(8)
    ones = Configuration.constant(QUATERNARY, 1)

    def flood(d=5):
        return evolve_cell(theta, fourstate_flood(0, d), d, d) == 0

    def diverges():
        w = divergence_search(theta, ones, Interval(-3, 8), Interval(1, 1), [0, 3], 64)
        return w is not None and w.replay(theta, ones)

    facts = (
        PinnedFact("f(0,0,3) = 3", lambda: rs["f"](0, 0, 3) == 3),
        PinnedFact("f(1,2,0) = 2 and f(2,2,0) = 0", lambda: rs["f"](1, 2, 0) == 2 and rs["f"](2, 2, 0) == 0),
        PinnedFact("Cyl(blocking, [0,8]) is invariant",
                   lambda: cylinder_invariance_check(theta, blocking, Interval(0, 8)).invariant),
        PinnedFact("a 2 behind a non-1 floods to 0 after d = 5 steps", flood),
        PinnedFact("divergence at cell 1 from all-ones with probes 0,3", diverges),
    )
    configs = {
        "blocking": blocking,
        "all_ones": ones,
        "flood": fourstate_flood(0, 5),
    }
    return GalleryEntry("fourstate_halfplane", rs, theta, configs, facts)


def shift_rule(name: str = "shift") -> LocalRule:
    """Each cell copies its right neighbour: the left shift."""
    return LocalRule.from_function(name, 1, 2, lambda a, b, c: c)


def _uniform(name: str, rule: LocalRule, facts_fn) -> GalleryEntry:
    rs = RuleSet(BINARY, (rule,))
    theta = RuleDistribution(rs, Uniform(rule.name), name)
    configs = {
        "all_zero": Configuration.constant(BINARY, 0),
        "periodic": Configuration(BINARY, (0, 0, 1), (), 0, (0, 0, 1)),
    }
    return GalleryEntry(name, rs, theta, configs, tuple(facts_fn(theta)))


def _shift_facts(theta):
    yield PinnedFact("balanced on [0,3]", lambda: balance_audit(theta, Interval(0, 3)).balanced)
    yield PinnedFact("radius-1 inverse assembles on [-3,3] into one rule",
                     lambda: (lambda p: p.ok and len(p.ruleset) == 1)(assemble_inverse(theta, Interval(-3, 3), 1)))


def _xor3_facts(theta):
    d0 = Interval(0, 0)
    yield PinnedFact("pattern 1 on {0} has 4 pre-images",
                     lambda: preimage_count(theta, d0, Pattern(d0, (1,))).count == 4)
    yield PinnedFact("no mutually erasable pair on [0,4]",
                     lambda: mutual_erasability_search(theta, Interval(0, 4), 0) is None)


def _and_facts(theta):
    yield PinnedFact("mutually erasable pair on [0,2] with pad 0",
                     lambda: mutual_erasability_search(theta, Interval(0, 2), 0) is not None)


_BUILDERS = {
    "example1": _example1,
    "balance_counterexample": _balance_counterexample,
    "traffic_halfplane": _traffic_halfplane,
    "fourstate_halfplane": _fourstate_halfplane,
    "uniform_shift": lambda: _uniform("uniform_shift", shift_rule(), _shift_facts),
    "uniform_xor3": lambda: _uniform("uniform_xor3", xor3_rule("xor3"), _xor3_facts),
    "uniform_and": lambda: _uniform(
        "uniform_and", LocalRule.from_function("and", 1, 2, lambda a, b, c: b & c), _and_facts
    ),
}

ENTRY_NAMES = tuple(_BUILDERS)


def build_entry(name: str) -> GalleryEntry:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown gallery entry {name!r}; known: {', '.join(ENTRY_NAMES)}") from None
    return builder()


@dataclass(frozen=True)
class FactResult:
    description: str
    passed: bool
    error: str | None = None


def run_pinned_facts(entry: GalleryEntry) -> list[FactResult]:
    results = []
    for fact in entry.facts:
        try:
            results.append(FactResult(fact.description, bool(fact.check())))
        except Exception as exc:  # a crashing fact is a failed fact
            results.append(FactResult(fact.description, False, f"{type(exc).__name__}: {exc}"))
    return results
