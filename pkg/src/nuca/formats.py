"""Text formats for rules, distributions, configurations and experiments.

Rule file::

    rule tau radius 1 alphabet 01
    "000" -> 0
    ...
    default -> 0          # optional, fills unlisted windows

Distribution file::

    distribution theta
    kind two_sided left id center . anchor 1 right tau

Configuration file::

    config ones alphabet 01
    kind two_sided left 1 center . anchor 0 right 1

Experiment file::

    experiment thm4
    distribution traffic_halfplane
    base all_zeros
    D -3 3
    E 1 1
    probes 0,1
    tmax 64

Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .configs import Configuration
from .errors import ContractError, ParseError
from .rules import (
    Alphabet,
    Interval,
    LocalRule,
    MirroredPyramid,
    RuleDistribution,
    RuleSet,
    TwoSided,
    Uniform,
    window_index,
)

_WINDOW_LINE = re.compile(r'^"(?P<w>[^"]*)"\s*->\s*(?P<out>\S+)$')
_DEFAULT_LINE = re.compile(r"^default\s*->\s*(?P<out>\S+)$")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _int(token: str, lineno: int, source) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno, source) from None


def _keywords(tokens: list[str], keys: Iterable[str], lineno: int, source) -> dict[str, str]:
    """Parse ``key value key value ...`` requiring exactly ``keys``."""
    keys = list(keys)
    if len(tokens) % 2:
        raise ParseError("dangling keyword", lineno, source)
    pairs = dict(zip(tokens[::2], tokens[1::2]))
    missing = [k for k in keys if k not in pairs]
    extra = [k for k in pairs if k not in keys]
    if missing or extra:
        raise ParseError(f"expected keys {keys}, got {list(pairs)}", lineno, source)
    return pairs


# -- rules -----------------------------------------------------------------------


def parse_rules(text: str, source: str | None = None) -> RuleSet:
    alphabet = None
    rules: list[LocalRule] = []
    current = None  # [name, radius, alphabet, entries, default, header lineno]

    def close():
        if current is None:
            return
        name, radius, alpha, entries, default, lineno = current
        s = alpha.size
        table = []
        for w in itertools.product(range(s), repeat=2 * radius + 1):
            out = entries.get(w, default)
            if out is None:
                raise ParseError(
                    f"rule {name}: window {alpha.decode(w)!r} unlisted and no default", lineno, source
                )
            table.append(out)
        rules.append(LocalRule(name, radius, s, tuple(table)))

    for lineno, line in _lines(text):
        tokens = line.split()
        if tokens[0] == "rule":
            close()
            if len(tokens) != 6 or tokens[2] != "radius" or tokens[4] != "alphabet":
                raise ParseError("expected 'rule <name> radius <r> alphabet <glyphs>'", lineno, source)
            radius = _int(tokens[3], lineno, source)
            if radius < 0:
                raise ParseError("radius must be non-negative", lineno, source)
            try:
                alpha = Alphabet.from_glyphs(tokens[5])
            except ContractError as exc:
                raise ParseError(str(exc), lineno, source) from None
            if alphabet is not None and alpha != alphabet:
                raise ParseError("all rules in a file must share one alphabet", lineno, source)
            alphabet = alpha
            current = [tokens[1], radius, alpha, {}, None, lineno]
            continue
        if current is None:
            raise ParseError("table line before any 'rule' header", lineno, source)
        alpha = current[2]
        m = _WINDOW_LINE.match(line)
        d = _DEFAULT_LINE.match(line)
        try:
            if m:
                w = alpha.encode(m["w"])
                if len(w) != 2 * current[1] + 1:
                    raise ParseError(f"window {m['w']!r} has the wrong length", lineno, source)
                if w in current[3]:
                    raise ParseError(f"window {m['w']!r} listed twice", lineno, source)
                current[3][w] = alpha.symbol(m["out"])
            elif d:
                current[4] = alpha.symbol(d["out"])
            else:
                raise ParseError(f"cannot parse {line!r}", lineno, source)
        except ContractError as exc:
            raise ParseError(str(exc), lineno, source) from None
    close()
    if alphabet is None:
        raise ParseError("no rules found", None, source)
    try:
        return RuleSet(alphabet, tuple(rules))
    except ContractError as exc:
        raise ParseError(str(exc), None, source) from None


def format_rule(rule: LocalRule, alphabet: Alphabet) -> str:
    glyphs = "".join(alphabet.glyphs)
    lines = [f"rule {rule.name} radius {rule.radius} alphabet {glyphs}"]
    for w in rule.windows():
        out = rule.table[window_index(w, rule.states)]
        lines.append(f'"{alphabet.decode(w)}" -> {alphabet.glyphs[out]}')
    return "\n".join(lines) + "\n"


def format_rules(rs: RuleSet) -> str:
    return "\n".join(format_rule(r, rs.alphabet) for r in rs.rules)


# -- distributions ---------------------------------------------------------------


def _word(token: str, allow_empty: bool = False) -> tuple[str, ...]:
    if token == ".":
        if allow_empty:
            return ()
        raise ValueError("empty word not allowed here")
    return tuple(token.split(","))


def parse_distributions(text: str, ruleset: RuleSet, source: str | None = None) -> dict[str, RuleDistribution]:
    out: dict[str, RuleDistribution] = {}
    name = None
    for lineno, line in _lines(text):
        tokens = line.split()
        if tokens[0] == "distribution":
            if len(tokens) != 2:
                raise ParseError("expected 'distribution <name>'", lineno, source)
            name = tokens[1]
            continue
        if tokens[0] != "kind" or len(tokens) < 2:
            raise ParseError(f"cannot parse {line!r}", lineno, source)
        if name is None:
            raise ParseError("'kind' before any 'distribution' header", lineno, source)
        kind, rest = tokens[1], tokens[2:]
        try:
            if kind == "uniform":
                desc = Uniform(_keywords(rest, ["rule"], lineno, source)["rule"])
            elif kind == "two_sided":
                kw = _keywords(rest, ["left", "center", "anchor", "right"], lineno, source)
                desc = TwoSided(
                    _word(kw["left"]), _word(kw["center"], True),
                    _int(kw["anchor"], lineno, source), _word(kw["right"]),
                )
            elif kind == "mirrored_pyramid":
                keys = ["fr", "g", "fl"] + (["offset"] if "offset" in rest else [])
                kw = _keywords(rest, keys, lineno, source)
                offset = _int(kw.get("offset", "0"), lineno, source)
                desc = MirroredPyramid(kw["fr"], kw["g"], kw["fl"], offset)
            else:
                raise ParseError(f"unknown distribution kind {kind!r}", lineno, source)
            out[name] = RuleDistribution(ruleset, desc, name)
        except (ContractError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno, source) from None
        name = None
    if not out:
        raise ParseError("no distributions found", None, source)
    return out


def format_distribution(theta: RuleDistribution) -> str:
    d = theta.description
    if isinstance(d, Uniform):
        kind = f"kind uniform rule {d.rule}"
    elif isinstance(d, TwoSided):
        center = ",".join(d.center) or "."
        kind = (
            f"kind two_sided left {','.join(d.left)} center {center} "
            f"anchor {d.anchor} right {','.join(d.right)}"
        )
    else:
        kind = f"kind mirrored_pyramid fr {d.fr} g {d.g} fl {d.fl}"
        if d.offset:
            kind += f" offset {d.offset}"
    return f"distribution {theta.name}\n{kind}\n"


# -- configurations --------------------------------------------------------------


def parse_configs(text: str, source: str | None = None) -> dict[str, Configuration]:
    out: dict[str, Configuration] = {}
    header = None
    for lineno, line in _lines(text):
        tokens = line.split()
        if tokens[0] == "config":
            if len(tokens) != 4 or tokens[2] != "alphabet":
                raise ParseError("expected 'config <name> alphabet <glyphs>'", lineno, source)
            try:
                header = (tokens[1], Alphabet.from_glyphs(tokens[3]))
            except ContractError as exc:
                raise ParseError(str(exc), lineno, source) from None
            continue
        if header is None:
            raise ParseError("'kind' before any 'config' header", lineno, source)
        if tokens[:2] != ["kind", "two_sided"]:
            raise ParseError("configurations must be 'kind two_sided ...'", lineno, source)
        kw = _keywords(tokens[2:], ["left", "center", "anchor", "right"], lineno, source)
        center = "" if kw["center"] == "." else kw["center"]
        try:
            out[header[0]] = Configuration.from_glyphs(
                header[1], kw["left"], center, _int(kw["anchor"], lineno, source), kw["right"]
            )
        except ContractError as exc:
            raise ParseError(str(exc), lineno, source) from None
        header = None
    if not out:
        raise ParseError("no configurations found", None, source)
    return out


def format_config(name: str, c: Configuration) -> str:
    a = c.alphabet
    center = a.decode(c.center) or "."
    return (
        f"config {name} alphabet {''.join(a.glyphs)}\n"
        f"kind two_sided left {a.decode(c.left)} center {center} "
        f"anchor {c.anchor} right {a.decode(c.right)}\n"
    )


# -- experiments -----------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    name: str
    distribution: str
    base: str
    domain: Interval
    observed: Interval
    probes: tuple[str, ...]
    t_max: int


def parse_experiment(text: str, source: str | None = None) -> Experiment:
    fields: dict[str, list[str]] = {}
    for lineno, line in _lines(text):
        key, *rest = line.split()
        if key in fields:
            raise ParseError(f"{key!r} given twice", lineno, source)
        want = {"experiment": 1, "distribution": 1, "base": 1, "D": 2, "E": 2, "probes": 1, "tmax": 1}
        if key not in want:
            raise ParseError(f"unknown experiment field {key!r}", lineno, source)
        if len(rest) != want[key]:
            raise ParseError(f"{key} takes {want[key]} value(s)", lineno, source)
        if key in ("D", "E", "tmax"):
            rest = [_int(tok, lineno, source) for tok in rest]
        fields[key] = rest
    missing = [k for k in ("experiment", "distribution", "base", "D", "E", "probes", "tmax") if k not in fields]
    if missing:
        raise ParseError(f"missing fields: {', '.join(missing)}", None, source)
    return Experiment(
        fields["experiment"][0],
        fields["distribution"][0],
        fields["base"][0],
        Interval(*fields["D"]),
        Interval(*fields["E"]),
        tuple(fields["probes"][0].split(",")),
        fields["tmax"][0],
    )


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, str(path)) from None
