"""Contradiction detection and belief revision.

An explicit contradiction is a proposition and its canonical negation both
asserted in the same context.  Because negation is a structure that points
straight at its argument, detection is a single interning-table lookup.

Revision retracts hypotheses.  The candidate culprits are the hypotheses
underlying either contradictand; when a credibility ordering (built from
asserted Greater / Source / Sgreater facts) singles out a strictly least
credible candidate, it is retracted automatically, otherwise the decision
is delegated to a user dialog.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional

from .beliefs import BeliefStore, Context
from .terms import TermId, TermStore

if TYPE_CHECKING:
    from .engine import Engine

GREATER = "greater"
LESS = "less"
EQUAL = "equal"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Contradiction:
    proposition: TermId      # P
    negation: TermId         # ~P
    candidates: tuple[TermId, ...]
    supports_view: dict[TermId, tuple[frozenset, ...]]


@dataclass(frozen=True)
class CandidateInfo:
    tid: TermId
    sources: tuple[TermId, ...]
    origin_sets: tuple[frozenset, ...]
    side: str  # "P", "~P", or "both"


@dataclass(frozen=True)
class NeedsUser:
    contradiction: Contradiction
    candidates: tuple[CandidateInfo, ...]


@dataclass(frozen=True)
class RevisionReport:
    mode: str  # "automatic" | "interactive"
    retracted: tuple[TermId, ...]
    dropped: tuple[TermId, ...]  # no longer asserted, beyond the retracted hyps


class UnresolvedContradiction(Exception):
    def __init__(self, contradiction: Contradiction, message: str):
        super().__init__(message)
        self.contradiction = contradiction


def detect_contradiction(store: TermStore, beliefs: BeliefStore, p: TermId,
                         ctx: Context) -> Optional[Contradiction]:
    """Constant-time check after p was asserted; None when no explicit clash."""
    if store.is_negation(p):
        inner = store.args(p)[0]
        if beliefs.is_asserted(inner, ctx):
            return _build(store, beliefs, inner, p, ctx)
    neg = store.lookup("andor0,0", (p,))
    if neg is not None and beliefs.is_asserted(neg, ctx) and beliefs.is_asserted(p, ctx):
        return _build(store, beliefs, p, neg, ctx)
    return None


def _build(store: TermStore, beliefs: BeliefStore, p: TermId, neg: TermId,
           ctx: Context) -> Contradiction:
    view: dict[TermId, list[frozenset]] = {}
    for side in (p, neg):
        for rec in beliefs.supports_in(side, ctx):
            for h in rec.origin_set:
                view.setdefault(h, [])
                if rec.origin_set not in view[h]:
                    view[h].append(rec.origin_set)
    candidates = tuple(sorted(view))
    return Contradiction(proposition=p, negation=neg, candidates=candidates,
                         supports_view={h: tuple(v) for h, v in view.items()})


# ---------------------------------------------------------------------------
# credibility ordering
# ---------------------------------------------------------------------------

def _closure(edges: list[tuple[TermId, TermId]]) -> dict[TermId, set[TermId]]:
    reach: dict[TermId, set[TermId]] = {}
    adj: dict[TermId, set[TermId]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
    for start in adj:
        seen: set[TermId] = set()
        stack = [start]
        while stack:
            n = stack.pop()
            for m in adj.get(n, ()):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        reach[start] = seen
    return reach


class CredibilityOrdering:
    """Strict partial order over propositions, derived on demand.

    Edges come from two channels: direct Greater facts, and source-derived
    comparisons (a proposition outranks another when one of its sources
    outranks every source of the other -- a statement is as credible as its
    best witness).  A source-derived edge that directly opposes a Greater
    fact is discarded (Greater wins); the union is then closed transitively
    and mutually-reachable pairs degrade to incomparable, which both breaks
    cycles and keeps the remaining comparisons transitive.
    """

    def __init__(self, store: TermStore, beliefs: BeliefStore, ctx: Context):
        self.store = store
        direct = []
        for f in beliefs.asserted_by_functor("Greater", ctx):
            args = store.args(f)
            if len(args) == 2:
                direct.append(args)
        direct_closure = _closure(direct)
        src_edges = []
        for f in beliefs.asserted_by_functor("Sgreater", ctx):
            args = store.args(f)
            if len(args) == 2:
                src_edges.append(args)
        src_reach = _closure(src_edges)
        self._sources: dict[TermId, set[TermId]] = {}
        for f in beliefs.asserted_by_functor("Source", ctx):
            args = store.args(f)
            if len(args) == 2:
                self._sources.setdefault(args[1], set()).add(args[0])

        def src_strict(x: TermId, y: TermId) -> bool:
            return y in src_reach.get(x, ()) and x not in src_reach.get(y, ())

        edges = list(direct)
        sourced = sorted(self._sources)
        for p in sourced:
            for q in sourced:
                if p == q:
                    continue
                if p in direct_closure.get(q, ()):
                    continue  # a direct Greater the other way wins outright
                sp, sq = self._sources[p], self._sources[q]
                if any(all(src_strict(x, y) for y in sq) for x in sp):
                    edges.append((p, q))
        self._reach = _closure(edges)

    def sources_of(self, p: TermId) -> tuple[TermId, ...]:
        return tuple(sorted(self._sources.get(p, ())))

    def compare(self, a: TermId, b: TermId) -> str:
        if a == b:
            return EQUAL
        ab = b in self._reach.get(a, ())
        ba = a in self._reach.get(b, ())
        if ab and not ba:
            return GREATER
        if ba and not ab:
            return LESS
        return INCOMPARABLE


# ---------------------------------------------------------------------------
# culprit selection and resolution
# ---------------------------------------------------------------------------

def select_culprit(store: TermStore, beliefs: BeliefStore, c: Contradiction,
                   ctx: Context, ordering: Optional[CredibilityOrdering] = None,
                   force_needs_user: bool = False):
    """('unique', hyp) when a strictly least credible candidate exists,
    else ('needs_user', NeedsUser)."""
    ordering = ordering or CredibilityOrdering(store, beliefs, ctx)
    if not force_needs_user:
        for h in c.candidates:
            others = [o for o in c.candidates if o != h]
            if others and all(ordering.compare(o, h) == GREATER for o in others):
                return "unique", h
    infos = []
    p_hyps = {h for rec in beliefs.supports_in(c.proposition, ctx) for h in rec.origin_set}
    n_hyps = {h for rec in beliefs.supports_in(c.negation, ctx) for h in rec.origin_set}
    for h in c.candidates:
        side = "both" if h in p_hyps and h in n_hyps else ("P" if h in p_hyps else "~P")
        infos.append(CandidateInfo(tid=h, sources=ordering.sources_of(h),
                                   origin_sets=c.supports_view[h], side=side))
    return "needs_user", NeedsUser(contradiction=c, candidates=tuple(infos))


Dialog = Callable[[NeedsUser], list[TermId]]


def resolve(engine: "Engine", c: Contradiction, dialog: Optional[Dialog],
            automatic: bool = True) -> RevisionReport:
    """Retract hypotheses until the specific contradiction no longer holds.

    With `automatic` (auto mode): retract on our own when the culprit is
    obvious (unique strict minimum under the credibility ordering), fall back
    to the dialog otherwise.  Without it (interactive mode): every decision
    goes to the dialog.  With no dialog available the contradiction is left
    standing (paraconsistent) and UnresolvedContradiction is raised for the
    caller to report.
    """
    store, beliefs, ctx = engine.store, engine.beliefs, engine.ctx
    mode = "automatic"
    retracted: list[TermId] = []
    dropped: list[TermId] = []
    current = c
    for _ in range(len(c.candidates) + 1):
        if not (beliefs.is_asserted(current.proposition, ctx)
                and beliefs.is_asserted(current.negation, ctx)):
            break
        kind, payload = select_culprit(store, beliefs, current, ctx)
        if not automatic and kind == "unique":
            kind, payload = select_culprit(store, beliefs, current, ctx,
                                           force_needs_user=True)
        if kind == "unique":
            chosen = [payload]
        else:
            if dialog is None:
                raise UnresolvedContradiction(
                    current,
                    f"unresolved contradiction: {store.display(current.proposition)} "
                    f"and {store.display(current.negation)}")
            mode = "interactive"
            chosen = dialog(payload)
            if not chosen or not set(chosen) <= set(current.candidates):
                raise UnresolvedContradiction(current, "invalid revision choice")
        for h in chosen:
            if h not in ctx.hyps:
                continue
            report = beliefs.retract(h, ctx)
            retracted.append(h)
            dropped.extend(d for d in report.dropped if d != h)
        current = _build(store, beliefs, c.proposition, c.negation, ctx)
    return RevisionReport(mode=mode, retracted=tuple(retracted),
                          dropped=tuple(sorted(set(dropped) - set(retracted))))
