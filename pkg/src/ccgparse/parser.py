"""Exhaustive CKY chart parsing over the fixed combinatory rule inventory.

Eight binary rules plus lexical seeding: forward and backward application
(which also perform string-category substitution), harmonic and crossing
composition, and substitution.  Every rule is gated by the modalities of
the slashes it consumes.  Cells pack edges by (category, logical-form
alpha class) so derivational ambiguity with identical results is not
duplicated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .category import (
    COMPUTED_ATTRS,
    Atom,
    Bindings,
    Category,
    Direction,
    Functor,
    RuleId,
    apply_bindings,
    category_key,
    match_argument,
    modality_admits,
    rename_variables,
    unify,
)
from . import logical_form as lf
from .lexicon import MARKER_LEXC_PLUS, LexEntry, Lexicon, lookup

DEFAULT_MAX_TOKENS = 32


class ParserError(Exception):
    pass


class UnknownTokenError(ParserError):
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        super().__init__("unknown token(s): " + ", ".join(repr(t) for t in tokens))


class SentenceTooLongError(ParserError):
    pass


@dataclass
class ParseSettings:
    weight_threshold: int = 4
    max_steps: int = lf.DEFAULT_STEP_BUDGET
    max_tokens: int = DEFAULT_MAX_TOKENS
    all_derivations: bool = False
    case_fold: bool = False

    @classmethod
    def from_lexicon(cls, lex: Lexicon, **overrides) -> "ParseSettings":
        settings = cls(weight_threshold=lex.config.weight_threshold)
        for name, value in overrides.items():
            if value is not None:
                setattr(settings, name, value)
        return settings


@dataclass(frozen=True, eq=False)
class Edge:
    """A chart constituent; logical forms are beta-normal on construction."""

    start: int
    end: int
    tokens: tuple[str, ...]
    category: Category
    lf: lf.Term
    rule: RuleId | None = None
    children: tuple["Edge", ...] = ()
    entry: LexEntry | None = None

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def label(self) -> str:
        return self.rule.label if self.rule is not None else "LEX"

    def reading_key(self) -> tuple[str, str]:
        return (category_key(self.category), lf.alpha_key(self.lf))


def covered_entries(edge: Edge):
    """Lexical entries at the leaves under this edge."""
    if edge.entry is not None:
        yield edge.entry
    for child in edge.children:
        yield from covered_entries(child)


def derived_feature(edge: Edge, attr: str, weight_threshold: int = 4) -> str:
    """Compute a span predicate for an edge, never stored on its category.

    ``weight`` is "-" when the span covers at most weight_threshold tokens;
    ``lexc`` is "+" when any covered entry carries the lexc+ marker.
    """
    if attr == "weight":
        return "-" if edge.end - edge.start <= weight_threshold else "+"
    if attr == "lexc":
        return "+" if any(MARKER_LEXC_PLUS in e.markers for e in covered_entries(edge)) else "-"
    raise ValueError(f"not a computed feature: {attr!r}")


class Chart:
    def __init__(self, tokens: list[str] | tuple[str, ...], all_derivations: bool = False):
        self.tokens = tuple(tokens)
        self.all_derivations = all_derivations
        self.cells: dict[tuple[int, int], dict[object, Edge]] = {}
        self._counter = itertools.count()

    def add(self, edge: Edge) -> bool:
        cell = self.cells.setdefault(edge.span, {})
        key: object = edge.reading_key()
        if self.all_derivations:
            key = (key, next(self._counter))
        if key in cell:
            return False
        cell[key] = edge
        return True

    def edges(self, start: int, end: int) -> list[Edge]:
        return list(self.cells.get((start, end), {}).values())

    def spanning(self) -> list[Edge]:
        return self.edges(0, len(self.tokens))

    def all_edges(self) -> list[Edge]:
        return [e for cell in self.cells.values() for e in cell.values()]

    def longest_partials(self) -> list[Edge]:
        """The longest proper sub-spans holding edges; near misses for NO PARSE."""
        n = len(self.tokens)
        for length in range(n - 1, 0, -1):
            found = [
                e
                for (i, j), cell in sorted(self.cells.items())
                if j - i == length
                for e in cell.values()
            ]
            if found:
                return found
        return []


# ---------------------------------------------------------------------------
# the rules

def _functor(edge: Edge, direction: Direction) -> Functor | None:
    c = edge.category
    if isinstance(c, Functor) and c.slash.direction is direction:
        return c
    return None


def _carries_computed(c: Category) -> bool:
    return isinstance(c, Atom) and any(a in COMPUTED_ATTRS for a, _ in c.features.pairs)


def _composable(middle_a: Category, middle_b: Category) -> bool:
    """Whether the consumed middle category may be discharged without an edge.

    Computed span predicates (weight, lexc) are only checkable when a slot
    is filled by application; composing them away would silently drop the
    constraint, so such slots are application-only.
    """
    return not (_carries_computed(middle_a) or _carries_computed(middle_b))


def _normalize(term: lf.Term, max_steps: int) -> lf.Term:
    return lf.beta_normalize(term, max_steps=max_steps)


def _compose_lf(f: lf.Term, g: lf.Term, max_steps: int) -> lf.Term:
    x = lf.fresh_name("x", lf.free_vars(f) | lf.free_vars(g))
    return _normalize(lf.Abs(x, lf.App(f, lf.App(g, lf.Var(x)))), max_steps)

def _subst_lf(f: lf.Term, g: lf.Term, max_steps: int) -> lf.Term:
    x = lf.fresh_name("x", lf.free_vars(f) | lf.free_vars(g))
    return _normalize(lf.Abs(x, lf.App(lf.App(f, lf.Var(x)), lf.App(g, lf.Var(x)))), max_steps)


def combine(
    left: Edge,
    right: Edge,
    weight_threshold: int = 4,
    max_steps: int = lf.DEFAULT_STEP_BUDGET,
) -> list[Edge]:
    """All edges derivable from two adjacent constituents.

    Application matches the functor's argument specification against the
    neighbouring edge, so a string-valued argument needs no rule of its
    own.  Composition and substitution unify category structure and are
    blocked whenever a participating slash's modality rejects the rule.
    """
    out: list[Edge] = []
    span = (left.start, right.end)
    tokens = left.tokens + right.tokens

    def emit(rule: RuleId, category: Category, term: lf.Term, bnd: Bindings) -> None:
        out.append(
            Edge(
                span[0],
                span[1],
                tokens,
                apply_bindings(category, bnd),
                _normalize(term, max_steps),
                rule,
                (left, right),
            )
        )

    def derived_for(edge: Edge):
        return lambda attr: derived_feature(edge, attr, weight_threshold)

    # application
    if (c := _functor(left, Direction.FORWARD)) is not None:
        if modality_admits(RuleId.FWD_APP, c.slash.modality):
            bnd = match_argument(c.argument, right, derived=derived_for(right))
            if bnd is not None:
                emit(RuleId.FWD_APP, c.result, lf.App(left.lf, right.lf), bnd)
    if (c := _functor(right, Direction.BACKWARD)) is not None:
        if modality_admits(RuleId.BWD_APP, c.slash.modality):
            bnd = match_argument(c.argument, left, derived=derived_for(left))
            if bnd is not None:
                emit(RuleId.BWD_APP, c.result, lf.App(right.lf, left.lf), bnd)

    # harmonic composition
    fc = _functor(left, Direction.FORWARD)
    gc = _functor(right, Direction.FORWARD)
    if (
        fc is not None
        and gc is not None
        and modality_admits(RuleId.FWD_COMP_HARMONIC, fc.slash.modality)
        and modality_admits(RuleId.FWD_COMP_HARMONIC, gc.slash.modality)
        and _composable(fc.argument, gc.result)
    ):
        bnd = unify(fc.argument, gc.result)
        if bnd is not None:
            category = Functor(fc.result, gc.slash, gc.argument)
            emit(RuleId.FWD_COMP_HARMONIC, category, _compose_lf(left.lf, right.lf, max_steps), bnd)
    fc = _functor(right, Direction.BACKWARD)
    gc = _functor(left, Direction.BACKWARD)
    if (
        fc is not None
        and gc is not None
        and modality_admits(RuleId.BWD_COMP_HARMONIC, fc.slash.modality)
        and modality_admits(RuleId.BWD_COMP_HARMONIC, gc.slash.modality)
        and _composable(fc.argument, gc.result)
    ):
        bnd = unify(fc.argument, gc.result)
        if bnd is not None:
            category = Functor(fc.result, gc.slash, gc.argument)
            emit(RuleId.BWD_COMP_HARMONIC, category, _compose_lf(right.lf, left.lf, max_steps), bnd)

    # crossing composition
    fc = _functor(left, Direction.FORWARD)
    gc = _functor(right, Direction.BACKWARD)
    if (
        fc is not None
        and gc is not None
        and modality_admits(RuleId.FWD_COMP_CROSSING, fc.slash.modality)
        and modality_admits(RuleId.FWD_COMP_CROSSING, gc.slash.modality)
        and _composable(fc.argument, gc.result)
    ):
        bnd = unify(fc.argument, gc.result)
        if bnd is not None:
            category = Functor(fc.result, gc.slash, gc.argument)
            emit(RuleId.FWD_COMP_CROSSING, category, _compose_lf(left.lf, right.lf, max_steps), bnd)
    fc = _functor(right, Direction.BACKWARD)
    gc = _functor(left, Direction.FORWARD)
    if (
        fc is not None
        and gc is not None
        and modality_admits(RuleId.BWD_COMP_CROSSING, fc.slash.modality)
        and modality_admits(RuleId.BWD_COMP_CROSSING, gc.slash.modality)
        and _composable(fc.argument, gc.result)
    ):
        bnd = unify(fc.argument, gc.result)
        if bnd is not None:
            category = Functor(fc.result, gc.slash, gc.argument)
            emit(RuleId.BWD_COMP_CROSSING, category, _compose_lf(right.lf, left.lf, max_steps), bnd)

    # substitution
    fc = _functor(left, Direction.FORWARD)
    gc = _functor(right, Direction.FORWARD)
    if (
        fc is not None
        and gc is not None
        and isinstance(fc.result, Functor)
        and fc.result.slash.direction is Direction.FORWARD
        and modality_admits(RuleId.FWD_SUBST, fc.slash.modality)
        and modality_admits(RuleId.FWD_SUBST, fc.result.slash.modality)
        and modality_admits(RuleId.FWD_SUBST, gc.slash.modality)
        and _composable(fc.result.argument, gc.result)
    ):
        bnd = unify(fc.argument, gc.argument)
        if bnd is not None:
            bnd = unify(fc.result.argument, gc.result, bnd)
            if bnd is not None:
                category = Functor(fc.result.result, gc.slash, gc.argument)
                emit(RuleId.FWD_SUBST, category, _subst_lf(left.lf, right.lf, max_steps), bnd)
    fc = _functor(right, Direction.BACKWARD)
    gc = _functor(left, Direction.BACKWARD)
    if (
        fc is not None
        and gc is not None
        and isinstance(fc.result, Functor)
        and fc.result.slash.direction is Direction.BACKWARD
        and modality_admits(RuleId.BWD_SUBST, fc.slash.modality)
        and modality_admits(RuleId.BWD_SUBST, fc.result.slash.modality)
        and modality_admits(RuleId.BWD_SUBST, gc.slash.modality)
        and _composable(fc.result.argument, gc.result)
    ):
        bnd = unify(fc.argument, gc.argument)
        if bnd is not None:
            bnd = unify(fc.result.argument, gc.result, bnd)
            if bnd is not None:
                category = Functor(fc.result.result, gc.slash, gc.argument)
                emit(RuleId.BWD_SUBST, category, _subst_lf(right.lf, left.lf, max_steps), bnd)

    return out


# ---------------------------------------------------------------------------
# the chart loop

def seed_edges(lex: Lexicon, tokens: list[str] | tuple[str, ...], case_fold: bool = False) -> list[Edge]:
    """Lexical edges for every entry match; raises when a token is uncovered."""
    edges: list[Edge] = []
    covered = [False] * len(tokens)
    fresh = itertools.count()
    for start in range(len(tokens)):
        for entry, length in lookup(lex, tokens, start, case_fold):
            category = rename_variables(entry.category, str(next(fresh)))
            edges.append(
                Edge(
                    start,
                    start + length,
                    tuple(tokens[start : start + length]),
                    category,
                    entry.lf,
                    None,
                    (),
                    entry,
                )
            )
            for i in range(start, start + length):
                covered[i] = True
    unknown = sorted({tokens[i] for i, c in enumerate(covered) if not c})
    if unknown:
        raise UnknownTokenError(unknown)
    return edges


def build_chart(lex: Lexicon, tokens: list[str] | tuple[str, ...], settings: ParseSettings | None = None) -> Chart:
    """Run exhaustive CKY and return the filled chart."""
    if not tokens:
        raise ParserError("cannot parse an empty sentence")
    settings = settings or ParseSettings.from_lexicon(lex)
    if len(tokens) > settings.max_tokens:
        raise SentenceTooLongError(f"{len(tokens)} tokens exceeds the limit of {settings.max_tokens}")
    chart = Chart(tokens, settings.all_derivations)
    for edge in seed_edges(lex, tokens, settings.case_fold):
        chart.add(edge)
    n = len(tokens)
    for length in range(2, n + 1):
        for start in range(0, n - length + 1):
            end = start + length
            for split in range(start + 1, end):
                for left in chart.edges(start, split):
                    for right in chart.edges(split, end):
                        for edge in combine(
                            left,
                            right,
                            weight_threshold=settings.weight_threshold,
                            max_steps=settings.max_steps,
                        ):
                            chart.add(edge)
    return chart


def goal_matches(goal: Category | None, edge: Edge) -> bool:
    if goal is None:
        return True
    return unify(goal, edge.category) is not None


def parse(
    lex: Lexicon,
    tokens: list[str] | tuple[str, ...],
    goal: Category | None = None,
    settings: ParseSettings | None = None,
) -> list[Edge]:
    """All spanning edges matching the goal (None accepts any category).

    An empty result is a normal NO PARSE outcome; unknown tokens and
    over-long sentences raise ParserError subclasses.
    """
    chart = build_chart(lex, tokens, settings)
    found = [e for e in chart.spanning() if goal_matches(goal, e)]
    found.sort(key=Edge.reading_key)
    return found
