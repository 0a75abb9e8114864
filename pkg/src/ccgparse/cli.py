"""Command-line interface: parse sentences, validate grammars, run suites.

Exit codes partition outcomes: 0 success, 1 linguistic negative (no parse,
violations found, suite failures), 2 operational error (unreadable files,
bad usage, lexicon syntax errors, unknown tokens).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .category import CategorySyntaxError, parse_category
from . import logical_form as lf
from .lexicon import Lexicon, lexicon_notes, parse_lexicon, tokenize, validate_lexicon
from .parser import ParseSettings, ParserError, build_chart, goal_matches
from .derivation import document, render_ascii, render_json

OK, NEGATIVE, ERROR = 0, 1, 2


def _fail(message: str) -> int:
    print(message, file=sys.stderr)
    return ERROR


def _load_lexicon(path: str, strict: bool = True):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        return None, [], _fail(f"cannot read lexicon {path}: {exc}")
    lexicon, issues = parse_lexicon(text)
    for issue in issues:
        print(f"{path}: {issue}", file=sys.stderr)
    if strict and any(i.severity == "error" for i in issues):
        return None, issues, ERROR
    return lexicon, issues, OK


def cmd_parse(args: argparse.Namespace) -> int:
    lexicon, _, status = _load_lexicon(args.lexicon)
    if lexicon is None:
        return status
    violations = validate_lexicon(lexicon)
    if violations:
        for v in violations:
            print(f"{args.lexicon}: {v}", file=sys.stderr)
        return ERROR
    goal = None
    if args.goal is not None:
        try:
            goal = parse_category(args.goal, lexicon.config.default_modality)
        except CategorySyntaxError as exc:
            return _fail(f"bad goal category: {exc}")
    tokens = tokenize(args.sentence, args.case_fold)
    if not tokens:
        return _fail("empty sentence")
    settings = ParseSettings.from_lexicon(
        lexicon,
        weight_threshold=args.weight_threshold,
        max_steps=args.max_steps,
        all_derivations=args.all_derivations,
        case_fold=args.case_fold,
    )
    try:
        chart = build_chart(lexicon, tokens, settings)
    except (ParserError, lf.BudgetExceeded) as exc:
        return _fail(str(exc))
    edges = [e for e in chart.spanning() if goal_matches(goal, e)]
    edges.sort(key=lambda e: e.reading_key())
    doc = document(tokens, edges, chart)
    sys.stdout.write(render_json(doc) if args.json else render_ascii(doc))
    return OK if edges else NEGATIVE


def cmd_validate(args: argparse.Namespace) -> int:
    lexicon, issues, status = _load_lexicon(args.lexicon, strict=False)
    if lexicon is None:
        return status
    syntax_errors = [i for i in issues if i.severity == "error"]
    violations = validate_lexicon(lexicon)
    for v in violations:
        print(f"{args.lexicon}: {v}")
    for note in lexicon_notes(lexicon):
        print(f"{args.lexicon}: note: {note}")
    if syntax_errors or violations:
        return NEGATIVE
    print(f"{args.lexicon}: ok ({len(lexicon.all_entries())} entries)")
    return OK


def _check_line(lexicon: Lexicon, settings: ParseSettings, sentence: str, count: int, lf_specs: list[lf.Term]) -> str | None:
    """Run one suite line; None on pass, else a failure description."""
    tokens = tokenize(sentence, settings.case_fold)
    try:
        chart = build_chart(lexicon, tokens, settings)
        edges = chart.spanning()
    except ParserError as exc:
        return str(exc)
    if len(edges) != count:
        got = ", ".join(sorted(lf.pretty_print(e.lf) for e in edges)) or "none"
        return f"expected {count} reading(s), got {len(edges)} ({got})"
    for want in lf_specs:
        if not any(lf.alpha_eq(want, e.lf) for e in edges):
            return f"no reading has logical form {lf.pretty_print(want)!r}"
    return None


def cmd_test(args: argparse.Namespace) -> int:
    lexicon, _, status = _load_lexicon(args.lexicon)
    if lexicon is None:
        return status
    violations = validate_lexicon(lexicon)
    if violations:
        for v in violations:
            print(f"{args.lexicon}: {v}", file=sys.stderr)
        return ERROR
    try:
        text = Path(args.suite).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot read suite {args.suite}: {exc}")
    settings = ParseSettings.from_lexicon(
        lexicon,
        weight_threshold=args.weight_threshold,
        max_steps=args.max_steps,
        case_fold=args.case_fold,
    )
    passed = failed = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 3:
            return _fail(f"{args.suite}:{lineno}: expected 'sentence<TAB>count<TAB>lfs', got {len(parts)} field(s)")
        sentence, count_text, lf_text = parts
        try:
            count = int(count_text)
        except ValueError:
            return _fail(f"{args.suite}:{lineno}: bad reading count {count_text!r}")
        lf_specs: list[lf.Term] = []
        if lf_text != "-":
            try:
                lf_specs = [lf.parse_term(p.strip()) for p in lf_text.split("|")]
            except lf.LFSyntaxError as exc:
                return _fail(f"{args.suite}:{lineno}: bad expected logical form: {exc}")
        problem = _check_line(lexicon, settings, sentence, count, lf_specs)
        if problem is None:
            passed += 1
            print(f"PASS  {sentence}")
        else:
            failed += 1
            print(f"FAIL  {sentence}  [{problem}]")
    print(f"{passed} passed, {failed} failed")
    return OK if failed == 0 else NEGATIVE


def make_arg_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ccgparse", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("-l", "--lexicon", required=True, help="lexicon (.ccg) file")
        p.add_argument("--weight-threshold", type=int, default=None, metavar="N")
        p.add_argument("--max-steps", type=int, default=None, metavar="N", help="beta reduction budget")
        p.add_argument("--case-fold", action="store_true", help="lower-case sentence tokens and entry lookups")

    p = sub.add_parser("parse", help="parse a sentence and print its derivations")
    common(p)
    p.add_argument("--goal", default=None, help="accept only spanning categories unifying with this")
    p.add_argument("--json", action="store_true", help="emit the JSON document instead of ASCII")
    p.add_argument("--all-derivations", action="store_true", help="do not pack equal readings")
    p.add_argument("sentence")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("validate", help="check a lexicon against the structural constraints")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("test", help="run a tab-separated sentence suite")
    common(p)
    p.add_argument("suite", help="suite file: sentence<TAB>count<TAB>lf1 | lf2 (or -)")
    p.set_defaults(func=cmd_test)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = make_arg_parser()
    args = parser.parse_args(argv)
    for name in ("weight_threshold", "max_steps"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            return _fail(f"--{name.replace('_', '-')} must be at least 1")
    return args.func(args)


def entry_point() -> None:
    sys.exit(main())
