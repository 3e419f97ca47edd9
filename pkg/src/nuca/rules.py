"""Alphabets, local rules, rule sets and rule distributions over Z.

Symbols are plain integers ``0 .. s-1``; glyphs only matter for I/O.
A rule table is stored as a flat tuple indexed by the window read as a
base-``s`` number with the leftmost cell most significant, so the table
order coincides with lexicographic window order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import ContractError

GLYPH_POOL = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class Alphabet:
    size: int
    glyphs: tuple[str, ...] = ()

    def __post_init__(self):
        if self.size < 1:
            raise ContractError("alphabet size must be positive")
        if not self.glyphs:
            if self.size > len(GLYPH_POOL):
                raise ContractError(f"no default glyphs for {self.size} symbols")
            object.__setattr__(self, "glyphs", tuple(GLYPH_POOL[: self.size]))
        glyphs = tuple(self.glyphs)
        object.__setattr__(self, "glyphs", glyphs)
        if len(glyphs) != self.size:
            raise ContractError("glyph count does not match alphabet size")
        if len(set(glyphs)) != len(glyphs) or any(len(g) != 1 for g in glyphs):
            raise ContractError("glyphs must be distinct single characters")

    @classmethod
    def from_glyphs(cls, glyphs: str) -> Alphabet:
        return cls(len(glyphs), tuple(glyphs))

    def symbol(self, glyph: str) -> int:
        try:
            return self.glyphs.index(glyph)
        except ValueError:
            raise ContractError(f"unknown glyph {glyph!r}") from None

    def encode(self, text: str) -> tuple[int, ...]:
        return tuple(self.symbol(ch) for ch in text)

    def decode(self, symbols: Iterable[int]) -> str:
        return "".join(self.glyphs[a] for a in symbols)


BINARY = Alphabet(2)


@dataclass(frozen=True)
class Interval:
    """The integer interval ``[lo, hi]``; any ``lo > hi`` is the empty domain."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            object.__setattr__(self, "lo", 0)
            object.__setattr__(self, "hi", -1)

    @classmethod
    def empty(cls) -> Interval:
        return cls(0, -1)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def shift(self, k: int) -> Interval:
        if self.is_empty:
            return self
        return Interval(self.lo + k, self.hi + k)

    def widen(self, r: int) -> Interval:
        if self.is_empty:
            return self
        return Interval(self.lo - r, self.hi + r)

    def hull(self, other: Interval) -> Interval:
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def issubset(self, other: Interval) -> bool:
        return self.is_empty or (other.lo <= self.lo and self.hi <= other.hi)

    def __str__(self) -> str:
        return "[]" if self.is_empty else f"[{self.lo},{self.hi}]"


def window_index(window: Sequence[int], states: int) -> int:
    idx = 0
    for a in window:
        idx = idx * states + a
    return idx


@dataclass(frozen=True)
class LocalRule:
    """A radius-``r`` local rule, total on ``states ** (2r+1)`` windows."""

    name: str
    radius: int
    states: int
    table: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if self.radius < 0:
            raise ContractError("radius must be non-negative")
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.states ** self.width:
            raise ContractError(
                f"rule {self.name}: table has {len(table)} entries, "
                f"expected {self.states ** self.width}"
            )
        if any(not 0 <= b < self.states for b in table):
            raise ContractError(f"rule {self.name}: output outside the alphabet")

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    @classmethod
    def from_function(
        cls, name: str, radius: int, states: int, fn: Callable[..., int]
    ) -> LocalRule:
        windows = itertools.product(range(states), repeat=2 * radius + 1)
        return cls(name, radius, states, tuple(fn(*w) for w in windows))

    def windows(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.states), repeat=self.width)

    def __call__(self, *window: int) -> int:
        return eval_rule(self, window)

    def renamed(self, name: str) -> LocalRule:
        return LocalRule(name, self.radius, self.states, self.table)


def eval_rule(rule: LocalRule, window: Sequence[int]) -> int:
    if len(window) != rule.width:
        raise ContractError(
            f"rule {rule.name} has radius {rule.radius}; got a window of length {len(window)}"
        )
    if any(not 0 <= a < rule.states for a in window):
        raise ContractError(f"window {tuple(window)} has symbols outside the alphabet")
    return rule.table[window_index(window, rule.states)]


def center_projection(name: str = "id", radius: int = 1, states: int = 2) -> LocalRule:
    return LocalRule.from_function(name, radius, states, lambda *w: w[radius])


def rules_identical(f: LocalRule, g: LocalRule) -> bool:
    """True when the wider rule only looks at the cells the narrower one sees."""
    if f.states != g.states:
        raise ContractError("rules are over different alphabets")
    small, big = (f, g) if f.radius <= g.radius else (g, f)
    lo = big.radius - small.radius
    hi = lo + small.width
    s = big.states
    for i, w in enumerate(big.windows()):
        if big.table[i] != small.table[window_index(w[lo:hi], s)]:
            return False
    return True


@dataclass(frozen=True)
class RuleSet:
    alphabet: Alphabet
    rules: tuple[LocalRule, ...] = ()

    def __post_init__(self):
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        names = [r.name for r in rules]
        if len(set(names)) != len(names):
            raise ContractError("rule names must be unique within a rule set")
        for r in rules:
            if r.states != self.alphabet.size:
                raise ContractError(f"rule {r.name} is not over the rule set's alphabet")

    @cached_property
    def _by_name(self) -> dict[str, LocalRule]:
        return {r.name: r for r in self.rules}

    def __getitem__(self, name: str) -> LocalRule:
        try:
            return self._by_name[name]
        except KeyError:
            raise ContractError(f"no rule named {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self.rules)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.rules)


def normalize_ruleset(rs: RuleSet) -> tuple[RuleSet, dict[str, str]]:
    """Collapse identical rules onto one representative.

    Representatives are chosen lowest radius first, then by name, so the
    renaming map is deterministic.
    """
    reps: list[LocalRule] = []
    renaming: dict[str, str] = {}
    for rule in sorted(rs.rules, key=lambda r: (r.radius, r.name)):
        for rep in reps:
            if rules_identical(rep, rule):
                renaming[rule.name] = rep.name
                break
        else:
            reps.append(rule)
            renaming[rule.name] = rule.name
    kept = tuple(r for r in rs.rules if renaming[r.name] == r.name)
    return RuleSet(rs.alphabet, kept), renaming


# -- bi-infinite words -------------------------------------------------------


def two_sided_at(left: Sequence, center: Sequence, anchor: int, right: Sequence, x: int):
    """Read cell ``x`` of the word ``...left left center right right...``.

    ``center[0]`` sits at ``anchor``. The left period repeats leftwards from
    the anchor, so ``left[-1]`` is the cell just before it.
    """
    i = x - anchor
    if i < 0:
        return left[i % len(left)]
    if i < len(center):
        return center[i]
    return right[(i - len(center)) % len(right)]


@dataclass(frozen=True)
class Uniform:
    rule: str

    def at(self, x: int) -> str:
        return self.rule

    def names(self) -> set[str]:
        return {self.rule}

    def shifted(self, k: int) -> Uniform:
        return self


@dataclass(frozen=True)
class TwoSided:
    left: tuple[str, ...]
    center: tuple[str, ...]
    anchor: int
    right: tuple[str, ...]

    def __post_init__(self):
        for attr in ("left", "center", "right"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        if not self.left or not self.right:
            raise ContractError("periodic tails must be nonempty words")

    def at(self, x: int) -> str:
        return two_sided_at(self.left, self.center, self.anchor, self.right, x)

    def names(self) -> set[str]:
        return set(self.left) | set(self.center) | set(self.right)

    def shifted(self, k: int) -> TwoSided:
        return TwoSided(self.left, self.center, self.anchor - k, self.right)


def _w_prefix(n: int) -> int:
    # total length of w_1 ... w_n, with |w_m| = m^2 + 2m
    return n * (n + 1) * (2 * n + 1) // 6 + n * (n + 1)


@dataclass(frozen=True)
class MirroredPyramid:
    """``... w3 w2 w1 w2 w3 ...`` with ``u_n = fr^n g fl^n``, ``w_n = u_1 ... u_n``.

    Unshifted, ``w1`` occupies ``[0, 2]``; the right copies of ``w2, w3, ...``
    follow from cell 3 and the left copies end at cell -1, each block read
    left to right. ``offset`` translates: cell ``x`` reads base cell ``x + offset``.
    """

    fr: str
    g: str
    fl: str
    offset: int = 0

    def at(self, x: int) -> str:
        y = x + self.offset
        if y >= 0:
            n = 1
            while _w_prefix(n) <= y:
                n += 1
            i = y - _w_prefix(n - 1)
        else:
            n = 2
            while _w_prefix(n) - 3 < -y:
                n += 1
            i = y + _w_prefix(n) - 3
        k = 1
        while k * k + 2 * k <= i:
            k += 1
        j = i - ((k - 1) ** 2 + 2 * (k - 1))
        if j < k:
            return self.fr
        if j == k:
            return self.g
        return self.fl

    def names(self) -> set[str]:
        return {self.fr, self.g, self.fl}

    def shifted(self, k: int) -> MirroredPyramid:
        return MirroredPyramid(self.fr, self.g, self.fl, self.offset + k)


Description = Union[Uniform, TwoSided, MirroredPyramid]


@dataclass(frozen=True)
class RuleDistribution:
    ruleset: RuleSet
    description: Description
    name: str = "theta"

    def __post_init__(self):
        for n in self.description.names():
            if n not in self.ruleset:
                raise ContractError(f"distribution references unknown rule {n!r}")

    @property
    def alphabet(self) -> Alphabet:
        return self.ruleset.alphabet

    @property
    def states(self) -> int:
        return self.ruleset.alphabet.size

    @cached_property
    def radius_bound(self) -> int:
        return max(self.ruleset[n].radius for n in self.description.names())

    def name_at(self, x: int) -> str:
        return self.description.at(x)

    def at(self, x: int) -> LocalRule:
        return self.ruleset[self.description.at(x)]

    def names_on(self, domain: Interval) -> tuple[str, ...]:
        return tuple(self.description.at(x) for x in domain)


def distribution_at(theta: RuleDistribution, x: int) -> LocalRule:
    return theta.at(x)


def uniform_distribution(rule: LocalRule, alphabet: Alphabet | None = None) -> RuleDistribution:
    alphabet = alphabet or Alphabet(rule.states)
    return RuleDistribution(RuleSet(alphabet, (rule,)), Uniform(rule.name), name=rule.name)


def neighborhood_of(theta: RuleDistribution, domain: Interval) -> Interval:
    if domain.is_empty:
        return domain
    lo = hi = None
    for x in domain:
        r = theta.at(x).radius
        lo = x - r if lo is None else min(lo, x - r)
        hi = x + r if hi is None else max(hi, x + r)
    return Interval(lo, hi)


def shift_distribution(theta: RuleDistribution, k: int) -> RuleDistribution:
    """The distribution ``x -> theta(x + k)``."""
    return RuleDistribution(theta.ruleset, theta.description.shifted(k), theta.name)


# -- recurrence probes ---------------------------------------------------------

DEFAULT_PATTERN_CAP = 10_000


def recurrence_witness(
    theta: RuleDistribution,
    domain: Interval,
    search_radius: int,
    cap: int = DEFAULT_PATTERN_CAP,
) -> int | None:
    """Smallest offset ``k != 0`` (positive first) with ``theta|D+k`` a copy of ``theta|D``.

    ``None`` only means nothing was found within ``search_radius``.
    """
    if domain.is_empty:
        raise ContractError("recurrence needs a nonempty domain")
    if len(domain) > cap:
        raise ContractError(f"domain of {len(domain)} cells exceeds the pattern cap {cap}")
    target = theta.names_on(domain)
    for k in range(1, search_radius + 1):
        for off in (k, -k):
            if theta.names_on(domain.shift(off)) == target:
                return off
    return None


def uniform_recurrence_probe(
    theta: RuleDistribution, domain: Interval, gap: int, span: Interval
) -> tuple[bool, int | None]:
    """Check that every window ``[x, x+gap-1]`` with ``x`` in ``span`` holds a copy of ``theta|D``.

    Returns ``(True, None)`` or ``(False, first violating x)``.
    """
    if domain.is_empty:
        raise ContractError("recurrence needs a nonempty domain")
    if span.is_empty:
        return True, None
    m = len(domain)
    if gap < m:
        return False, span.lo
    target = theta.names_on(domain)
    lo, hi = span.lo, span.hi + gap - 1
    word = theta.names_on(Interval(lo, hi))
    starts = [
        i for i in range(len(word) - m + 1) if word[i : i + m] == target
    ]
    # next_start[i]: first occurrence start >= i
    next_start = [None] * (len(word) + 1)
    nxt = None
    pos = len(starts) - 1
    for i in range(len(word), -1, -1):
        while pos >= 0 and starts[pos] >= i:
            nxt = starts[pos]
            pos -= 1
        next_start[i] = nxt
    for x in span:
        i = x - lo
        s = next_start[i]
        if s is None or s + m > i + gap:
            return False, x
    return True, None


def find_run(
    theta: RuleDistribution, rule_name: str, length: int, search: Interval
) -> int | None:
    """Left end of the first run of at least ``length`` copies of ``rule_name`` inside ``search``."""
    run = 0
    for x in search:
        run = run + 1 if theta.name_at(x) == rule_name else 0
        if run >= length:
            return x - length + 1
    return None
