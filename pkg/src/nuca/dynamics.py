"""Equicontinuity and sensitivity experiments.

Both searches here are semi-decisions: an ``Invariant`` certificate proves
that a cylinder is mapped into itself (one step suffices since the image
on ``D`` depends only on ``N(D)``), but a missing divergence witness only
means none appeared before ``t_max``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm
from typing import Sequence

from .configs import Configuration, Pattern, evolution, evolve_cell
from .errors import ContractError, check_cap
from .finitemaps import FiniteNucaMap
from .rules import Alphabet, GLYPH_POOL, Interval, LocalRule, RuleDistribution, RuleSet

INVARIANT = "Invariant"
ESCAPES = "Escapes"


@dataclass(frozen=True)
class InvarianceCertificate:
    base: Configuration
    domain: Interval
    result: str
    witness: Pattern | None = None  # the escaping pattern on N(D)
    image: Pattern | None = None

    @property
    def invariant(self) -> bool:
        return self.result == INVARIANT


def cylinder_invariance_check(
    theta: RuleDistribution, c: Configuration, domain: Interval, cap: int | None = None
) -> InvarianceCertificate:
    fmap = FiniteNucaMap.of(theta, domain)
    ext = fmap.extended
    target = c.values(domain)
    free = [x for x in ext if x not in domain]
    check_cap(f"boundary extensions of {domain}", theta.states ** len(free), cap)
    word = [c.value_at(x) for x in ext]
    slots = [x - ext.lo for x in free]
    for fill in itertools.product(range(theta.states), repeat=len(free)):
        for i, a in zip(slots, fill):
            word[i] = a
        image = fmap.apply_word(word)
        if image != target:
            return InvarianceCertificate(
                c, domain, ESCAPES, Pattern(ext, word), Pattern(domain, image)
            )
    return InvarianceCertificate(c, domain, INVARIANT)


def probe_configuration(
    c: Configuration, domain: Interval, background: int | Sequence[int]
) -> Configuration:
    """The member of ``Cyl(c, D)`` that shows ``background`` everywhere outside ``D``."""
    fill = Configuration.finite(c.alphabet, background, ())
    return fill.patched(Pattern.of(c, domain))


@dataclass(frozen=True)
class DivergenceWitness:
    probe: Configuration
    background: tuple[int, ...]
    time: int
    cell: int
    base_value: int
    probe_value: int
    domain: Interval
    observed: Interval
    t_max: int

    def replay(self, theta: RuleDistribution, c: Configuration) -> bool:
        a = evolve_cell(theta, c, self.cell, self.time)
        b = evolve_cell(theta, self.probe, self.cell, self.time)
        return a == self.base_value and b == self.probe_value and a != b


def divergence_search(
    theta: RuleDistribution,
    c: Configuration,
    domain: Interval,
    observed: Interval,
    probes: Sequence[int | Sequence[int]],
    t_max: int,
) -> DivergenceWitness | None:
    """First ``(probe, n, x)`` with ``H^n(e)(x) != H^n(c)(x)`` for ``x`` in ``observed``, ``1 <= n <= t_max``."""
    if t_max < 1:
        raise ContractError("t_max must be positive")
    base_rows = evolution(theta, c, observed, t_max)
    for bg in probes:
        bg = (bg,) if isinstance(bg, int) else tuple(bg)
        e = probe_configuration(c, domain, bg)
        rows = evolution(theta, e, observed, t_max)
        for n in range(1, t_max + 1):
            for x, a, b in zip(observed, base_rows[n], rows[n]):
                if a != b:
                    return DivergenceWitness(e, bg, n, x, a, b, domain, observed, t_max)
    return None


def temporal_recurrence_search(
    theta: RuleDistribution, c: Configuration, domain: Interval, t_max: int
) -> int | None:
    rows = evolution(theta, c, domain, t_max)
    for n in range(1, t_max + 1):
        if rows[n] == rows[0]:
            return n
    return None


# -- the product automaton -----------------------------------------------------


def paired_alphabet(alphabet: Alphabet) -> Alphabet:
    """``Sigma x Sigma`` with ``(a, b)`` encoded as ``a * s + b``."""
    size = alphabet.size**2
    if size > len(GLYPH_POOL):
        raise ContractError(f"cannot label {size} paired symbols")
    return Alphabet(size)


def pair_rule(rule: LocalRule) -> LocalRule:
    s = rule.states

    def paired(*window):
        first = tuple(v // s for v in window)
        second = tuple(v % s for v in window)
        return rule(*first) * s + rule(*second)

    return LocalRule.from_function(rule.name, rule.radius, s * s, paired)


def product_pairing(theta: RuleDistribution) -> RuleDistribution:
    alphabet = paired_alphabet(theta.alphabet)
    rules = RuleSet(alphabet, tuple(pair_rule(r) for r in theta.ruleset.rules))
    return RuleDistribution(rules, theta.description, theta.name + "_pair")


def pair_configurations(c: Configuration, e: Configuration) -> Configuration:
    if c.alphabet != e.alphabet:
        raise ContractError("paired configurations must share an alphabet")
    s = c.alphabet.size
    lo = min(c.anchor, e.anchor)
    hi = max(c.end, e.end)
    left = lcm(len(c.left), len(e.left))
    right = lcm(len(c.right), len(e.right))
    c2 = c.reframed(lo, hi, left, right)
    e2 = e.reframed(lo, hi, left, right)

    def zipped(u, v):
        return tuple(a * s + b for a, b in zip(u, v))

    return Configuration(
        paired_alphabet(c.alphabet),
        zipped(c2.left, e2.left),
        zipped(c2.center, e2.center),
        lo,
        zipped(c2.right, e2.right),
    )


def unpair_symbol(v: int, states: int) -> tuple[int, int]:
    return divmod(v, states)
