"""Finite-domain restrictions of a NUCA and exhaustive audits over them.

All enumerations walk ``Sigma^E`` in lexicographic order, leftmost cell
most significant, so every reported witness is reproducible.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .configs import Pattern
from .errors import ContractError, check_cap
from .rules import Interval, RuleDistribution, neighborhood_of, window_index

BALANCED = "Balanced"
UNBALANCED = "Unbalanced"


@dataclass(frozen=True)
class FiniteNucaMap:
    """``H_{theta|D}``: patterns on ``N_theta(D)`` to patterns on ``D``."""

    theta: RuleDistribution
    domain: Interval
    extended: Interval

    @classmethod
    def of(cls, theta: RuleDistribution, domain: Interval) -> FiniteNucaMap:
        return cls(theta, domain, neighborhood_of(theta, domain))

    def __post_init__(self):
        # (table, offset of the window inside E, width) per cell of D
        cells = []
        for x in self.domain:
            rule = self.theta.at(x)
            cells.append((rule.table, x - rule.radius - self.extended.lo, rule.width))
        object.__setattr__(self, "_cells", tuple(cells))

    @property
    def states(self) -> int:
        return self.theta.states

    def apply_word(self, word) -> tuple[int, ...]:
        s = self.states
        return tuple(table[window_index(word[i : i + w], s)] for table, i, w in self._cells)

    def apply(self, q: Pattern) -> Pattern:
        if q.domain != self.extended:
            raise ContractError(f"pattern lives on {q.domain}, map expects {self.extended}")
        return Pattern(self.domain, self.apply_word(q.symbols))

    def words(self, cap: int | None = None) -> Iterator[tuple[int, ...]]:
        size = 0 if self.extended.is_empty else len(self.extended)
        check_cap(f"enumerating Sigma^{self.extended}", self.states**size, cap)
        return itertools.product(range(self.states), repeat=size)

    @property
    def expected(self) -> int:
        """Pre-image count every pattern has when the map is balanced."""
        e = 0 if self.extended.is_empty else len(self.extended)
        d = 0 if self.domain.is_empty else len(self.domain)
        return self.states ** (e - d)


def finite_map_apply(theta: RuleDistribution, domain: Interval, q: Pattern) -> Pattern:
    return FiniteNucaMap.of(theta, domain).apply(q)


@dataclass(frozen=True)
class PreimageCount:
    pattern: Pattern
    count: int
    expected: int
    preimages: tuple[Pattern, ...] | None = None


def preimage_count(
    theta: RuleDistribution,
    domain: Interval,
    p: Pattern,
    list_witnesses: bool = False,
    cap: int | None = None,
) -> PreimageCount:
    fmap = FiniteNucaMap.of(theta, domain)
    if p.domain != domain:
        raise ContractError(f"pattern lives on {p.domain}, expected {domain}")
    count = 0
    found = [] if list_witnesses else None
    for q in fmap.words(cap):
        if fmap.apply_word(q) == p.symbols:
            count += 1
            if found is not None:
                found.append(Pattern(fmap.extended, q))
    return PreimageCount(p, count, fmap.expected, None if found is None else tuple(found))


def preimage_tally(
    theta: RuleDistribution, domain: Interval, cap: int | None = None
) -> dict[tuple[int, ...], int]:
    """Pre-image count of every pattern on ``domain``, zeros included, in lexicographic order."""
    fmap = FiniteNucaMap.of(theta, domain)
    counts = Counter(fmap.apply_word(q) for q in fmap.words(cap))
    size = 0 if domain.is_empty else len(domain)
    return {p: counts.get(p, 0) for p in itertools.product(range(theta.states), repeat=size)}


@dataclass(frozen=True)
class BalanceReport:
    domain: Interval
    extended: Interval
    verdict: str
    expected: int
    witness: tuple[Pattern, int] | None = None
    tally: dict | None = None

    @property
    def balanced(self) -> bool:
        return self.verdict == BALANCED


def balance_audit(
    theta: RuleDistribution, domain: Interval, cap: int | None = None, keep_tally: bool = True
) -> BalanceReport:
    """Exhaustive balance check of ``H_{theta|D}``.

    On failure the witness is the lexicographically first pattern with too
    many pre-images (one always exists when the counts are not all equal).
    """
    fmap = FiniteNucaMap.of(theta, domain)
    tally = preimage_tally(theta, domain, cap)
    expected = fmap.expected
    witness = None
    for p, n in tally.items():
        if n > expected:
            witness = (Pattern(domain, p), n)
            break
    verdict = UNBALANCED if witness else BALANCED
    return BalanceReport(
        domain, fmap.extended, verdict, expected, witness, tally if keep_tally else None
    )


def surjectivity_window_check(
    theta: RuleDistribution, domain: Interval, cap: int | None = None
) -> tuple[bool, Pattern | None]:
    """``False`` plus an orphan if some pattern on ``domain`` has no pre-image."""
    for p, n in preimage_tally(theta, domain, cap).items():
        if n == 0:
            return False, Pattern(domain, p)
    return True, None


@dataclass(frozen=True)
class ErasablePair:
    interval: Interval
    pad: int
    first: Pattern
    second: Pattern
    image: Pattern


def mutual_erasability_search(
    theta: RuleDistribution, interval: Interval, pad: int, cap: int | None = None
) -> ErasablePair | None:
    """Look for two patterns that differ only strictly inside ``interval`` and
    have the same image once the rest of the line is filled with ``pad``.

    Candidates must agree on the ``radius_bound`` cells at each end of the
    interval, so cells outside it see identical windows and the padded
    configurations are asymptotic with equal global images.
    """
    if interval.is_empty:
        return None
    s = theta.states
    if not 0 <= pad < s:
        raise ContractError(f"pad symbol {pad} outside the alphabet")
    n = len(interval)
    check_cap(f"enumerating Sigma^{interval}", s**n, cap)
    r = theta.radius_bound
    fmap = FiniteNucaMap.of(theta, interval)
    before = (pad,) * (interval.lo - fmap.extended.lo)
    after = (pad,) * (fmap.extended.hi - interval.hi)
    b = min(r, n)
    seen: dict = {}
    for p in itertools.product(range(s), repeat=n):
        image = fmap.apply_word(before + p + after)
        key = (p[:b], p[n - b :], image)
        other = seen.get(key)
        if other is None:
            seen[key] = p
        else:
            return ErasablePair(
                interval, pad, Pattern(interval, other), Pattern(interval, p), Pattern(interval, image)
            )
    return None
