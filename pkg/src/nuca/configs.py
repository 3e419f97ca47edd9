"""Eventually periodic configurations, patterns, cylinders and the global map.

Every evaluation of ``H_theta^t`` goes through :func:`_cone_rows`, which
walks the dependency cone backwards to find which cells are needed at each
time and then fills those rows forwards. Each (cell, time) value is
computed once per call and nothing is cached across calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

from .errors import ContractError, UnsupportedClosedForm
from .rules import (
    Alphabet,
    Interval,
    MirroredPyramid,
    RuleDistribution,
    TwoSided,
    Uniform,
    two_sided_at,
    window_index,
)


@dataclass(frozen=True)
class Configuration:
    """``...left left center right right...`` with ``center[0]`` at ``anchor``."""

    alphabet: Alphabet
    left: tuple[int, ...]
    center: tuple[int, ...]
    anchor: int
    right: tuple[int, ...]

    def __post_init__(self):
        for attr in ("left", "center", "right"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        if not self.left or not self.right:
            raise ContractError("periodic tails must be nonempty words")
        s = self.alphabet.size
        if any(not 0 <= a < s for a in self.left + self.center + self.right):
            raise ContractError("configuration uses symbols outside its alphabet")

    @classmethod
    def constant(cls, alphabet: Alphabet, symbol: int) -> Configuration:
        return cls(alphabet, (symbol,), (), 0, (symbol,))

    @classmethod
    def finite(
        cls,
        alphabet: Alphabet,
        background: int | Sequence[int],
        symbols: Sequence[int],
        anchor: int = 0,
    ) -> Configuration:
        """``symbols`` written from ``anchor`` on a (periodic) background."""
        bg = (background,) if isinstance(background, int) else tuple(background)
        return cls(alphabet, bg, tuple(symbols), anchor, bg)

    @classmethod
    def from_glyphs(
        cls, alphabet: Alphabet, left: str, center: str, anchor: int, right: str
    ) -> Configuration:
        enc = alphabet.encode
        return cls(alphabet, enc(left), enc(center), anchor, enc(right))

    @property
    def end(self) -> int:
        """First cell of the right tail."""
        return self.anchor + len(self.center)

    def value_at(self, x: int) -> int:
        return two_sided_at(self.left, self.center, self.anchor, self.right, x)

    def values(self, domain: Interval) -> tuple[int, ...]:
        return tuple(self.value_at(x) for x in domain)

    def shifted(self, k: int) -> Configuration:
        return Configuration(self.alphabet, self.left, self.center, self.anchor - k, self.right)

    def reframed(self, lo: int, hi: int, left_len: int | None = None, right_len: int | None = None) -> Configuration:
        """Same configuration with its center stretched to cover ``[lo, hi)``.

        Tail words are rotated to keep their phase and optionally repeated to
        ``left_len`` / ``right_len`` (multiples of the current periods).
        """
        lo = min(lo, self.anchor)
        hi = max(hi, self.end)
        left_len = left_len or len(self.left)
        right_len = right_len or len(self.right)
        if left_len % len(self.left) or right_len % len(self.right):
            raise ContractError("new tail lengths must be multiples of the periods")
        center = tuple(self.value_at(x) for x in range(lo, hi))
        left = tuple(self.value_at(x) for x in range(lo - left_len, lo))
        right = tuple(self.value_at(x) for x in range(hi, hi + right_len))
        return Configuration(self.alphabet, left, center, lo, right)

    def patched(self, pattern: Pattern) -> Configuration:
        """Overwrite the cells of ``pattern.domain`` with the pattern."""
        if pattern.domain.is_empty:
            return self
        base = self.reframed(pattern.domain.lo, pattern.domain.hi + 1)
        center = list(base.center)
        for x, a in zip(pattern.domain, pattern.symbols):
            center[x - base.anchor] = a
        return Configuration(self.alphabet, base.left, center, base.anchor, base.right)

    def to_glyphs(self, domain: Interval) -> str:
        return self.alphabet.decode(self.values(domain))


def value_at(c: Configuration, x: int) -> int:
    return c.value_at(x)


def shift_config(c: Configuration, k: int) -> Configuration:
    """The configuration ``x -> c(x + k)``."""
    return c.shifted(k)


@dataclass(frozen=True)
class Pattern:
    domain: Interval
    symbols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(self.symbols) != (0 if self.domain.is_empty else len(self.domain)):
            raise ContractError("pattern length does not match its domain")

    @classmethod
    def of(cls, c: Configuration, domain: Interval) -> Pattern:
        return cls(domain, c.values(domain))

    def __getitem__(self, x: int) -> int:
        if x not in self.domain:
            raise KeyError(x)
        return self.symbols[x - self.domain.lo]

    def restrict(self, domain: Interval) -> Pattern:
        if not domain.issubset(self.domain):
            raise ContractError(f"{domain} is not inside {self.domain}")
        i = domain.lo - self.domain.lo
        return Pattern(domain, self.symbols[i : i + len(domain)] if not domain.is_empty else ())

    def to_glyphs(self, alphabet: Alphabet) -> str:
        return alphabet.decode(self.symbols)


@dataclass(frozen=True)
class Cylinder:
    base: Configuration
    domain: Interval

    def contains(self, e: Configuration) -> bool:
        return all(e.value_at(x) == self.base.value_at(x) for x in self.domain)

    __contains__ = contains


def cylinder_member(cyl: Cylinder, e: Configuration) -> bool:
    return cyl.contains(e)


# -- the global transition ----------------------------------------------------


def _check_compatible(theta: RuleDistribution, c: Configuration) -> None:
    if theta.states != c.alphabet.size:
        raise ContractError(
            f"distribution has {theta.states} states, configuration has {c.alphabet.size}"
        )


def step_row(theta: RuleDistribution, row: Sequence[int], row_lo: int, target: Interval, rules=None) -> list[int]:
    """Apply one step to cells of ``target``, reading ``row`` (which starts at ``row_lo``)."""
    s = theta.states
    out = []
    for x in target:
        rule = rules[x] if rules is not None else theta.at(x)
        r = rule.radius
        i = x - r - row_lo
        out.append(rule.table[window_index(row[i : i + 2 * r + 1], s)])
    return out


def _cone_rows(
    theta: RuleDistribution, c: Configuration, window: Interval, t: int
) -> list[tuple[Interval, list[int]]]:
    """Rows ``0..t`` of the dependency cone above ``window``.

    Row ``k`` covers an interval that always contains ``window``.
    """
    _check_compatible(theta, c)
    if t < 0:
        raise ContractError("time must be non-negative")
    if window.is_empty:
        return [(window, [])] * (t + 1)
    rules: dict[int, object] = {}

    def rule_at(x):
        rule = rules.get(x)
        if rule is None:
            rule = rules[x] = theta.at(x)
        return rule

    spans = [window]
    for _ in range(t):
        prev = spans[-1]
        lo = min(x - rule_at(x).radius for x in prev)
        hi = max(x + rule_at(x).radius for x in prev)
        spans.append(Interval(lo, hi))
    spans.reverse()
    row = [c.value_at(x) for x in spans[0]]
    rows = [(spans[0], row)]
    for k in range(1, t + 1):
        row = step_row(theta, row, spans[k - 1].lo, spans[k], rules)
        rows.append((spans[k], row))
    return rows


def evolve_window(theta: RuleDistribution, c: Configuration, window: Interval, t: int) -> Pattern:
    """``H_theta^t(c)`` restricted to ``window``."""
    span, row = _cone_rows(theta, c, window, t)[-1]
    if window.is_empty:
        return Pattern(window, ())
    i = window.lo - span.lo
    return Pattern(window, row[i : i + len(window)])


def evolve_cell(theta: RuleDistribution, c: Configuration, x: int, t: int) -> int:
    return evolve_window(theta, c, Interval(x, x), t).symbols[0]


def evolution(theta: RuleDistribution, c: Configuration, window: Interval, t: int) -> list[tuple[int, ...]]:
    """``[H^0(c)|W, H^1(c)|W, ..., H^t(c)|W]`` from a single cone pass."""
    out = []
    for span, row in _cone_rows(theta, c, window, t):
        i = window.lo - span.lo
        out.append(tuple(row[i : i + len(window)]) if not window.is_empty else ())
    return out


@dataclass(frozen=True)
class SpaceTimeGrid:
    window: Interval
    rows: tuple[tuple[int, ...], ...]
    alphabet: Alphabet

    @property
    def steps(self) -> int:
        return len(self.rows) - 1

    def cell(self, t: int, x: int) -> int:
        return self.rows[t][x - self.window.lo]

    def to_text(self) -> str:
        return "".join(self.alphabet.decode(row) + "\n" for row in self.rows)

    def to_pgm(self) -> str:
        s = self.alphabet.size
        width = 0 if self.window.is_empty else len(self.window)
        lines = ["P2", f"{width} {len(self.rows)}", "255"]
        for row in self.rows:
            lines.append(" ".join(str(255 * a // (s - 1) if s > 1 else 0) for a in row))
        return "\n".join(lines) + "\n"


def spacetime(theta: RuleDistribution, c: Configuration, window: Interval, steps: int) -> SpaceTimeGrid:
    rows = evolution(theta, c, window, steps)
    return SpaceTimeGrid(window, tuple(rows), c.alphabet)


# -- closed-form stepping -----------------------------------------------------


def _as_two_sided(theta: RuleDistribution) -> TwoSided:
    d = theta.description
    if isinstance(d, Uniform):
        return TwoSided((d.rule,), (), 0, (d.rule,))
    if isinstance(d, TwoSided):
        return d
    if isinstance(d, MirroredPyramid):
        raise UnsupportedClosedForm("a mirrored pyramid is not eventually periodic")
    raise UnsupportedClosedForm(f"no closed form for {type(d).__name__}")


def step_config(theta: RuleDistribution, c: Configuration) -> Configuration:
    """``H_theta(c)`` as a new two-sided description.

    Beyond the anchors widened by the radius bound, both words are periodic,
    so the image tails repeat with the lcm of the two periods.
    """
    _check_compatible(theta, c)
    d = _as_two_sided(theta)
    r = theta.radius_bound
    lo = min(d.anchor, c.anchor - r)
    hi = max(d.anchor + len(d.center), c.end + r)
    left_p = lcm(len(d.left), len(c.left))
    right_p = lcm(len(d.right), len(c.right))
    image = evolve_window(theta, c, Interval(lo - left_p, hi + right_p - 1), 1).symbols
    left = image[:left_p]
    center = image[left_p : left_p + hi - lo]
    right = image[left_p + hi - lo :]
    return Configuration(c.alphabet, left, center, lo, right)


def random_configuration(rng, alphabet: Alphabet, around: Interval, max_period: int = 3) -> Configuration:
    """A two-sided configuration with random tails and a random center over ``around``."""
    s = alphabet.size

    def word(n):
        return tuple(rng.randrange(s) for _ in range(n))

    left = word(rng.randint(1, max_period))
    right = word(rng.randint(1, max_period))
    center = word(0 if around.is_empty else len(around))
    anchor = 0 if around.is_empty else around.lo
    return Configuration(alphabet, left, center, anchor, right)


def agree_on(c: Configuration, e: Configuration, domain: Iterable[int]) -> bool:
    return all(c.value_at(x) == e.value_at(x) for x in domain)
