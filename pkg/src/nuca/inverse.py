"""Local inverse search around single cells and assembly over intervals.

A radius-``R`` inverse at cell ``x`` must recover ``c(x)`` from
``H_theta(c)`` on ``[x-R, x+R]``. Enumerating every pattern on the
neighbourhood of that window either yields such a table or two patterns
that the window cannot tell apart (a :class:`Conflict`). Pattern-level
conflicts are only advisory because a window need not extend to a
configuration; :func:`verify_conflict_with_configs` certifies them with
actual configurations.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Union

from .configs import Configuration, Pattern, evolve_window, random_configuration
from .errors import ContractError, check_cap
from .finitemaps import FiniteNucaMap
from .rules import Interval, LocalRule, RuleDistribution, RuleSet, normalize_ruleset, window_index


@dataclass(frozen=True)
class CandidateRule:
    cell: int
    rule: LocalRule


@dataclass(frozen=True)
class Conflict:
    cell: int
    radius: int
    first: Pattern
    second: Pattern
    image: Pattern


InverseSearchOutcome = Union[CandidateRule, Conflict]


def _cell_name(x: int) -> str:
    return f"phi_{x}" if x >= 0 else f"phi_m{-x}"


def local_inverse_candidate(
    theta: RuleDistribution, x: int, radius: int, cap: int | None = None
) -> InverseSearchOutcome:
    if radius < 0:
        raise ContractError("inverse radius must be non-negative")
    s = theta.states
    window = Interval(x - radius, x + radius)
    fmap = FiniteNucaMap.of(theta, window)
    ext = fmap.extended.hull(Interval(x, x))
    check_cap(f"local inverse at {x}", s ** len(ext), cap)
    before = fmap.extended.lo - ext.lo
    centre = x - ext.lo
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for w in itertools.product(range(s), repeat=len(ext)):
        image = fmap.apply_word(w[before : before + len(fmap.extended)])
        first = seen.get(image)
        if first is None:
            seen[image] = w
        elif first[centre] != w[centre]:
            return Conflict(x, radius, Pattern(ext, first), Pattern(ext, w), Pattern(window, image))
    table = [0] * s ** (2 * radius + 1)
    for image, w in seen.items():
        table[window_index(image, s)] = w[centre]
    return CandidateRule(x, LocalRule(_cell_name(x), radius, s, tuple(table)))


def verify_conflict_with_configs(
    theta: RuleDistribution, x: int, radius: int, c: Configuration, e: Configuration
) -> bool:
    """True iff ``c`` and ``e`` differ at ``x`` but look the same to any radius-``radius`` inverse."""
    if c.value_at(x) == e.value_at(x):
        return False
    window = Interval(x - radius, x + radius)
    return evolve_window(theta, c, window, 1) == evolve_window(theta, e, window, 1)


@dataclass(frozen=True)
class PartialInverseDistribution:
    theta: RuleDistribution
    interval: Interval
    radius: int
    ruleset: RuleSet | None
    assignment: tuple[tuple[int, str], ...]
    failure: Conflict | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def rule_at(self, x: int) -> LocalRule:
        for cell, name in self.assignment:
            if cell == x:
                return self.ruleset[name]
        raise ContractError(f"no inverse rule assigned to cell {x}")

    def with_rule(self, x: int, rule: LocalRule) -> PartialInverseDistribution:
        """Copy with cell ``x`` reassigned to ``rule`` (used to build faulty inverses)."""
        rules = tuple(r for r in self.ruleset.rules if r.name != rule.name) + (rule,)
        assignment = tuple((c, rule.name if c == x else n) for c, n in self.assignment)
        return PartialInverseDistribution(
            self.theta, self.interval, self.radius, RuleSet(self.ruleset.alphabet, rules),
            assignment, self.failure,
        )


def assemble_inverse(
    theta: RuleDistribution, interval: Interval, radius: int, cap: int | None = None
) -> PartialInverseDistribution:
    rules = []
    for x in interval:
        outcome = local_inverse_candidate(theta, x, radius, cap)
        if isinstance(outcome, Conflict):
            return PartialInverseDistribution(theta, interval, radius, None, (), outcome)
        rules.append(outcome.rule)
    raw = RuleSet(theta.alphabet, tuple(rules))
    ruleset, renaming = normalize_ruleset(raw)
    assignment = tuple((x, renaming[r.name]) for x, r in zip(interval, rules))
    return PartialInverseDistribution(theta, interval, radius, ruleset, assignment)


@dataclass(frozen=True)
class CompositionCounterexample:
    trial: int
    config: Configuration
    cell: int
    expected: int
    got: int


def compose_check(
    theta: RuleDistribution,
    phi: PartialInverseDistribution,
    trials: int,
    seed: int = 0,
) -> tuple[bool, CompositionCounterexample | None]:
    """Spot-check ``phi(x)(H_theta(c)|[x-R, x+R]) == c(x)`` on random configurations.

    Cells checked are the ``R``-interior of the interval.
    """
    if not phi.ok:
        raise ContractError("cannot check a failed inverse assembly")
    R = phi.radius
    cells = Interval(phi.interval.lo + R, phi.interval.hi - R)
    if cells.is_empty:
        return True, None
    rng = random.Random(seed)
    around = phi.interval.widen(R + theta.radius_bound + 2)
    s = theta.states
    rules = {x: phi.rule_at(x) for x in cells}
    for trial in range(trials):
        c = random_configuration(rng, theta.alphabet, around)
        image = evolve_window(theta, c, cells.widen(R), 1)
        for x in cells:
            window = image.restrict(Interval(x - R, x + R)).symbols
            got = rules[x].table[window_index(window, s)]
            if got != c.value_at(x):
                return False, CompositionCounterexample(trial, c, x, c.value_at(x), got)
    return True, None
