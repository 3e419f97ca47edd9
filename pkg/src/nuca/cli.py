"""``nuca`` command-line front end.

Exit codes: 0 the command ran (whatever the verdict), 2 bad input,
3 enumeration cap exceeded, 4 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .configs import Configuration, Pattern, spacetime
from .dynamics import cylinder_invariance_check, divergence_search, temporal_recurrence_search
from .errors import ContractError, EnumerationCapExceeded, NucaError, ParseError
from .finitemaps import balance_audit, mutual_erasability_search, preimage_count
from .gallery import ENTRY_NAMES, build_entry, run_pinned_facts
from .inverse import Conflict, assemble_inverse, compose_check
from .rules import Interval, RuleDistribution, RuleSet, recurrence_witness, uniform_recurrence_probe

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4

GALLERY_PREFIX = "gallery:"


class InputError(NucaError):
    pass


# -- input resolution ----------------------------------------------------------


def _load_rules(paths) -> RuleSet | None:
    if not paths:
        return None
    merged = None
    for path in paths:
        rs = formats.parse_rules(formats.read_text(path), str(path))
        if merged is None:
            merged = rs
            continue
        if rs.alphabet != merged.alphabet:
            raise InputError(f"{path}: alphabet differs from earlier rule files")
        try:
            merged = RuleSet(merged.alphabet, merged.rules + rs.rules)
        except ContractError as exc:
            raise InputError(f"{path}: {exc}") from None
    return merged


def _gallery(name: str):
    try:
        return build_entry(name)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None


def resolve_distribution(args, name: str | None = None) -> RuleDistribution:
    """``--distribution gallery:<entry>`` or a distribution file plus ``--rules``.

    ``name`` picks a distribution from the file; the first one is used otherwise.
    """
    spec = args.distribution
    if spec is None:
        if name is None:
            raise InputError("--distribution is required")
        return _gallery(name).distribution
    if spec.startswith(GALLERY_PREFIX):
        return _gallery(spec[len(GALLERY_PREFIX) :]).distribution
    rules = _load_rules(args.rules)
    if rules is None:
        raise InputError("a distribution file needs --rules")
    found = formats.parse_distributions(formats.read_text(spec), rules, spec)
    if name is None:
        return next(iter(found.values()))
    if name not in found:
        raise InputError(f"{spec}: no distribution named {name!r}")
    return found[name]


def resolve_config(args, name: str | None = None) -> Configuration:
    """``--config gallery:<entry>:<config>`` or a configuration file.

    With a gallery distribution, ``gallery:<config>`` looks in that entry.
    """
    spec = args.config
    if spec is None or spec.startswith(GALLERY_PREFIX):
        parts = [] if spec is None else spec[len(GALLERY_PREFIX) :].split(":")
        if len(parts) == 2:
            entry_name, cfg = parts
        else:
            dist = getattr(args, "distribution", None) or ""
            if not dist.startswith(GALLERY_PREFIX):
                raise InputError("name a configuration as gallery:<entry>:<config>")
            entry_name = dist[len(GALLERY_PREFIX) :]
            cfg = parts[0] if parts else name
        entry = _gallery(entry_name)
        if cfg not in entry.configs:
            raise InputError(f"gallery entry {entry_name} has no configuration {cfg!r}; "
                             f"known: {', '.join(entry.configs)}")
        return entry.configs[cfg]
    found = formats.parse_configs(formats.read_text(spec), spec)
    if name is None:
        return next(iter(found.values()))
    if name not in found:
        raise InputError(f"{spec}: no configuration named {name!r}")
    return found[name]


def _interval(pair) -> Interval:
    lo, hi = pair
    if lo > hi:
        raise InputError(f"empty interval [{lo}, {hi}]")
    return Interval(lo, hi)


def _pattern(theta: RuleDistribution, domain: Interval, glyphs: str) -> Pattern:
    try:
        symbols = theta.alphabet.encode(glyphs)
    except ContractError as exc:
        raise InputError(str(exc)) from None
    if len(symbols) != len(domain):
        raise InputError(f"pattern {glyphs!r} does not fit the domain {domain}")
    return Pattern(domain, symbols)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------


def cmd_simulate(args) -> str:
    theta = resolve_distribution(args)
    c = resolve_config(args)
    if c.alphabet != theta.alphabet:
        raise InputError("configuration and distribution use different alphabets")
    if args.steps < 0:
        raise InputError("--steps must be non-negative")
    grid = spacetime(theta, c, _interval(args.window), args.steps)
    if args.format == "pgm":
        return grid.to_pgm()
    return grid.to_text()


def _tally_csv(theta, report) -> list[str]:
    lines = ["pattern,count,expected"]
    for p, n in report.tally.items():
        lines.append(f"{theta.alphabet.decode(p)},{n},{report.expected}")
    return lines


def cmd_balance(args) -> str:
    theta = resolve_distribution(args)
    report = balance_audit(theta, _interval(args.domain), cap=args.cap)
    lines = _tally_csv(theta, report)
    lines.append(f"# verdict={report.verdict}")
    if report.witness:
        p, n = report.witness
        lines.append(f"# witness={p.to_glyphs(theta.alphabet)},{n},{report.expected}")
    return "\n".join(lines) + "\n"


def cmd_preimages(args) -> str:
    theta = resolve_distribution(args)
    domain = _interval(args.domain)
    p = _pattern(theta, domain, args.pattern)
    result = preimage_count(theta, domain, p, list_witnesses=args.list, cap=args.cap)
    report = balance_audit(theta, domain, cap=args.cap, keep_tally=False)
    glyphs = p.to_glyphs(theta.alphabet)
    lines = [
        f"domain={domain} extended={report.extended}",
        f"pattern={glyphs} count={result.count} expected={result.expected}",
        f"verdict={report.verdict}",
    ]
    if result.preimages is not None:
        lines += [f"preimage {q.to_glyphs(theta.alphabet)}" for q in result.preimages]
    return "\n".join(lines) + "\n"


def cmd_erasable(args) -> str:
    theta = resolve_distribution(args)
    interval = _interval(args.interval)
    try:
        pad = theta.alphabet.symbol(args.pad)
    except ContractError as exc:
        raise InputError(str(exc)) from None
    pair = mutual_erasability_search(theta, interval, pad, cap=args.cap)
    head = f"interval={interval} pad={args.pad}"
    if pair is None:
        return f"{head}\nresult=none\n"
    a = theta.alphabet
    return (
        f"{head}\nresult=erasable\n"
        f"first={pair.first.to_glyphs(a)}\nsecond={pair.second.to_glyphs(a)}\n"
        f"image={pair.image.to_glyphs(a)}\n"
    )


def cmd_inverse(args) -> str:
    theta = resolve_distribution(args)
    interval = _interval(args.interval)
    if args.radius < 0:
        raise InputError("--radius must be non-negative")
    phi = assemble_inverse(theta, interval, args.radius, cap=args.cap)
    a = theta.alphabet
    if not phi.ok:
        conflict: Conflict = phi.failure
        return (
            f"# conflict at cell {conflict.cell} radius {conflict.radius}\n"
            f"# first  {conflict.first.domain} {conflict.first.to_glyphs(a)}\n"
            f"# second {conflict.second.domain} {conflict.second.to_glyphs(a)}\n"
            f"# image  {conflict.image.domain} {conflict.image.to_glyphs(a)}\n"
        )
    lines = [f"# inverse of {theta.name} on {interval} radius {args.radius}"]
    lines += [f"# cell {x} -> {name}" for x, name in phi.assignment]
    if args.trials:
        ok, bad = compose_check(theta, phi, args.trials, seed=args.seed)
        lines.append(f"# compose_check trials={args.trials} seed={args.seed} result={'pass' if ok else 'fail'}")
        if bad is not None:
            lines.append(f"# counterexample trial={bad.trial} cell={bad.cell} expected={bad.expected} got={bad.got}")
    return "\n".join(lines) + "\n" + formats.format_rules(phi.ruleset)


def _probe_word(theta, glyphs: str) -> tuple[int, ...]:
    try:
        return theta.alphabet.encode(glyphs)
    except ContractError as exc:
        raise InputError(str(exc)) from None


def cmd_experiment(args) -> str:
    exp = formats.parse_experiment(formats.read_text(args.spec), args.spec)
    theta = resolve_distribution(args, exp.distribution)
    if args.config is None and args.distribution is None:
        args.config = f"{GALLERY_PREFIX}{exp.distribution}:{exp.base}"
    c = resolve_config(args, exp.base)
    if c.alphabet != theta.alphabet:
        raise InputError("base configuration and distribution use different alphabets")
    if exp.t_max < 1:
        raise InputError("tmax must be positive")
    probes = [_probe_word(theta, g) for g in exp.probes]
    cert = cylinder_invariance_check(theta, c, exp.domain, cap=args.cap)
    a = theta.alphabet
    lines = [
        f"experiment={exp.name}",
        f"distribution={theta.name} base={exp.base} D={exp.domain} E={exp.observed}",
        f"invariance={cert.result}",
    ]
    if not cert.invariant:
        lines.append(f"escape_pattern {cert.witness.domain} {cert.witness.to_glyphs(a)}")
        lines.append(f"escape_image {cert.image.domain} {cert.image.to_glyphs(a)}")
    w = divergence_search(theta, c, exp.domain, exp.observed, probes, exp.t_max)
    if w is None:
        lines.append(f"divergence=none tmax={exp.t_max}")
    else:
        lines.append(
            f"divergence=found probe={a.decode(w.background)} n={w.time} x={w.cell} "
            f"base={a.glyphs[w.base_value]} probe_value={a.glyphs[w.probe_value]} "
            f"replay={'ok' if w.replay(theta, c) else 'FAILED'}"
        )
    n = temporal_recurrence_search(theta, c, exp.domain, exp.t_max)
    lines.append(f"temporal_recurrence={'none' if n is None else n} tmax={exp.t_max}")
    return "\n".join(lines) + "\n"


def cmd_recurrence(args) -> str:
    theta = resolve_distribution(args)
    domain = _interval(args.domain)
    names = ",".join(theta.names_on(domain))
    head = f"domain={domain} pattern={names}"
    if args.bound is not None:
        k = recurrence_witness(theta, domain, args.bound)
        found = "none" if k is None else str(k)
        return f"{head}\nrecurrence_witness={found} bound={args.bound}\n"
    if args.gap is None or args.span is None:
        raise InputError("give --bound, or both --gap and --span")
    span = _interval(args.span)
    ok, x = uniform_recurrence_probe(theta, domain, args.gap, span)
    tail = "uniform=true" if ok else f"uniform=false first_violation={x}"
    return f"{head}\n{tail} gap={args.gap} span={span}\n"


def cmd_gallery(args) -> str:
    if args.action == "list":
        lines = []
        for name in ENTRY_NAMES:
            entry = build_entry(name)
            lines.append(f"{name}\trules={','.join(entry.ruleset.names)}\tconfigs={','.join(entry.configs)}")
        return "\n".join(lines) + "\n"
    if args.action == "facts":
        entry = _gallery(args.name)
        lines = [f"{'PASS' if r.passed else 'FAIL'} {r.description}" + (f" ({r.error})" if r.error else "")
                 for r in run_pinned_facts(entry)]
        return "\n".join(lines) + "\n"
    if args.name is None or args.dir is None:
        raise InputError("gallery export needs a name and --dir")
    entry = _gallery(args.name)
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{entry.name}.rules").write_text(formats.format_rules(entry.ruleset))
    (out / f"{entry.name}.dist").write_text(formats.format_distribution(entry.distribution))
    (out / f"{entry.name}.configs").write_text(
        "\n".join(formats.format_config(k, c) for k, c in entry.configs.items())
    )
    return f"wrote {entry.name}.rules {entry.name}.dist {entry.name}.configs to {out}\n"


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rules", nargs="+", metavar="FILE", help="rule files")
    common.add_argument("--distribution", metavar="FILE|gallery:NAME")
    common.add_argument("--config", metavar="FILE|gallery:ENTRY:NAME")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--cap", type=int, default=None, help="enumeration cap")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="nuca", description="Non-uniform cellular automata toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="space-time diagram")
    p.add_argument("--window", nargs=2, type=int, required=True, metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=["text", "pgm"], default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("balance", parents=[common], help="pre-image tally and balance verdict")
    p.add_argument("--domain", nargs=2, type=int, required=True, metavar=("LO", "HI"))
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("preimages", parents=[common], help="pre-image count of one pattern")
    p.add_argument("--domain", nargs=2, type=int, required=True, metavar=("LO", "HI"))
    p.add_argument("--pattern", required=True)
    p.add_argument("--list", action="store_true", help="also list the pre-images")
    p.set_defaults(func=cmd_preimages)

    p = sub.add_parser("erasable", parents=[common], help="search for mutually erasable patterns")
    p.add_argument("--interval", nargs=2, type=int, required=True, metavar=("LO", "HI"))
    p.add_argument("--pad", default="0", help="glyph filling the line outside the interval")
    p.set_defaults(func=cmd_erasable)

    p = sub.add_parser("inverse", parents=[common], help="assemble local inverse rules")
    p.add_argument("--interval", nargs=2, type=int, required=True, metavar=("LO", "HI"))
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--trials", type=int, default=0, help="random composition checks")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("experiment", parents=[common], help="run an experiment file")
    p.add_argument("spec", help="experiment file")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("recurrence", parents=[common], help="recurrence probes")
    p.add_argument("--domain", nargs=2, type=int, required=True, metavar=("LO", "HI"))
    p.add_argument("--bound", type=int)
    p.add_argument("--gap", type=int)
    p.add_argument("--span", nargs=2, type=int, metavar=("LO", "HI"))
    p.set_defaults(func=cmd_recurrence)

    p = sub.add_parser("gallery", parents=[common], help="list, check or export gallery entries")
    p.add_argument("action", choices=["list", "export", "facts"])
    p.add_argument("name", nargs="?")
    p.add_argument("--dir")
    p.set_defaults(func=cmd_gallery)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        _emit(args, args.func(args))
    except EnumerationCapExceeded as exc:
        print(f"nuca: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, InputError, ContractError) as exc:
        print(f"nuca: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"nuca: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # anything else is a bug
        print(f"nuca: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
