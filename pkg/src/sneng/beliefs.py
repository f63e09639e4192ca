"""Assumption-based support tracking.

A proposition is *asserted* in a context when at least one of its recorded
origin sets is contained in the context's hypothesis set.  Origin sets are
kept pairwise subset-minimal, and they survive retraction: removing a
hypothesis just stops records that mention it from counting, so re-adding
the hypothesis restores every belief without re-running inference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .terms import TermId, TermStore

HYP = "hyp"
DER = "der"


@dataclass(frozen=True, order=True)
class SupportRecord:
    tag: str  # HYP or DER
    origin_set: frozenset[TermId] = field(compare=False)

    def sort_key(self):
        return (self.tag, tuple(sorted(self.origin_set)))


@dataclass(frozen=True)
class AssertionStatus:
    asserted: bool
    supports: tuple[SupportRecord, ...]


@dataclass
class Context:
    name: str
    hyps: set[TermId] = field(default_factory=set)


@dataclass(frozen=True)
class RetractionReport:
    removed: TermId
    dropped: tuple[TermId, ...]  # everything whose asserted flag flipped, removed included


class BeliefError(ValueError):
    pass


class BeliefStore:
    """Support records for one knowledge base (shared across its contexts)."""

    def __init__(self, store: TermStore):
        self.store = store
        self._supports: dict[TermId, list[SupportRecord]] = {}
        self._by_functor: dict[str, set[TermId]] = {}

    # -- recording ---------------------------------------------------------

    def add_hyp(self, p: TermId, ctx: Context) -> AssertionStatus:
        """Assert p on user authority. Idempotent."""
        if self.store.is_variable(p) or not self.store.is_ground(p):
            raise BeliefError(f"cannot assert open formula {self.store.display(p)}")
        ctx.hyps.add(p)
        self._store_record(p, SupportRecord(HYP, frozenset((p,))))
        return self.status(p, ctx)

    def add_derived(self, p: TermId, origin_set: Iterable[TermId]) -> bool:
        """Record a derivation of p from the given hypotheses.

        Returns True when the record changed the stored support set (i.e.
        no stored subset already covered it).
        """
        origin_set = frozenset(origin_set)
        if not origin_set:
            raise BeliefError("derived support needs a nonempty origin set")
        return self._store_record(p, SupportRecord(DER, origin_set))

    def _store_record(self, p: TermId, rec: SupportRecord) -> bool:
        recs = self._supports.get(p)
        if recs is None:
            recs = []
            self._supports[p] = recs
            self._by_functor.setdefault(self.store.functor(p), set()).add(p)
        for r in recs:
            if r.origin_set < rec.origin_set:
                return False
            if r.origin_set == rec.origin_set:
                if rec.tag == HYP and r.tag == DER:
                    recs.remove(r)
                    recs.append(rec)
                    return True
                return False
        # drop strict supersets, keep the antichain minimal
        recs[:] = [r for r in recs if not r.origin_set > rec.origin_set]
        recs.append(rec)
        return True

    # -- queries -----------------------------------------------------------

    def records(self, p: TermId) -> tuple[SupportRecord, ...]:
        return tuple(sorted(self._supports.get(p, ()), key=SupportRecord.sort_key))

    def supports_in(self, p: TermId, ctx: Context) -> tuple[SupportRecord, ...]:
        return tuple(r for r in self.records(p) if r.origin_set <= ctx.hyps)

    def is_asserted(self, p: TermId, ctx: Context) -> bool:
        recs = self._supports.get(p)
        if not recs:
            return False
        return any(r.origin_set <= ctx.hyps for r in recs)

    def status(self, p: TermId, ctx: Context) -> AssertionStatus:
        sup = self.supports_in(p, ctx)
        return AssertionStatus(asserted=bool(sup), supports=sup)

    def ever_supported(self) -> Iterator[TermId]:
        """Every proposition that has carried a support at some point."""
        return iter(sorted(self._supports))

    def asserted_terms(self, ctx: Context) -> list[TermId]:
        return [p for p in sorted(self._supports) if self.is_asserted(p, ctx)]

    def asserted_by_functor(self, functor: str, ctx: Context) -> list[TermId]:
        out = [p for p in self._by_functor.get(functor, ()) if self.is_asserted(p, ctx)]
        out.sort()
        return out

    # -- contraction -------------------------------------------------------

    def retract(self, h: TermId, ctx: Context) -> RetractionReport:
        """Remove hypothesis h; report every belief that stopped being asserted."""
        if h not in ctx.hyps:
            raise BeliefError(f"{self.store.display(h)} is not a hypothesis")
        affected = [p for p, recs in self._supports.items()
                    if any(h in r.origin_set for r in recs)]
        before = {p for p in affected if self.is_asserted(p, ctx)}
        ctx.hyps.discard(h)
        dropped = tuple(sorted(p for p in before if not self.is_asserted(p, ctx)))
        return RetractionReport(removed=h, dropped=dropped)

    # -- invariant hook for tests -------------------------------------------

    def check_minimality(self) -> bool:
        for recs in self._supports.values():
            sets = [r.origin_set for r in recs]
            for i, a in enumerate(sets):
                for b in sets[i + 1:]:
                    if a <= b or b <= a:
                        return False
        return True
