"""Engine facade: one knowledge base, one logical thread of mutation.

Every belief change funnels through the same pipeline -- index the wff,
register it if it is a rule, check for an explicit contradiction (resolving
it per the current mode), then let the acting layer react.  Commands,
scripts, and the wire protocol all sit on top of this class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import acting, revision
from .beliefs import AssertionStatus, BeliefStore, Context, RetractionReport
from .inference import AskResult, ForwardResult, Reasoner
from .revision import Dialog, RevisionReport, UnresolvedContradiction
from .terms import TermId, TermStore

AUTO = "auto"
INTERACTIVE = "interactive"


@dataclass
class Event:
    kind: str
    data: dict = field(default_factory=dict)


class Engine:
    def __init__(self, depth_cap: int = 50):
        self.store = TermStore()
        self.ctx = Context("default")
        self.beliefs = BeliefStore(self.store)
        self.reasoner = Reasoner(self.store, self.beliefs, self._record_derivation,
                                 depth_cap=depth_cap)
        self.acts = acting.default_registry()
        self.whendo_memo: set[tuple[TermId, TermId]] = set()
        self.mode = AUTO
        self.dialog: Optional[Dialog] = None
        self.auto_revision = True  # load() replays with this off
        self.events: list[Event] = []
        self.wff_index: dict[TermId, int] = {}
        self._next_index = 1

    # -- events ---------------------------------------------------------------

    def begin_command(self) -> None:
        self.events = []

    def emit(self, kind: str, **data) -> None:
        self.events.append(Event(kind, data))

    def label(self, t: TermId) -> str:
        idx = self.wff_index.get(t)
        return f"wff{idx}" if idx is not None else self.store.display(t)

    def _assign_index(self, t: TermId) -> None:
        if t not in self.wff_index:
            self.wff_index[t] = self._next_index
            self._next_index += 1

    # -- assertion pipeline -----------------------------------------------------

    def assert_hyp(self, p: TermId) -> AssertionStatus:
        was = self.beliefs.is_asserted(p, self.ctx)
        fresh = p not in self.ctx.hyps
        self.beliefs.add_hyp(p, self.ctx)
        self._assign_index(p)
        self.emit("assert", term=p, fresh=fresh)
        if not was:
            self._on_new_belief(p)
        return self.beliefs.status(p, self.ctx)

    def assert_forward(self, p: TermId) -> ForwardResult:
        self.assert_hyp(p)
        result = self.reasoner.forward([p], self.ctx)
        if result.cap_hit:
            self.emit("info", message="forward derivation budget exhausted")
        return result

    def _record_derivation(self, t: TermId, origin_set: frozenset) -> bool:
        before = self.beliefs.is_asserted(t, self.ctx)
        changed = self.beliefs.add_derived(t, origin_set)
        if not changed:
            return False
        self.reasoner.enqueue(t)
        if not before and self.beliefs.is_asserted(t, self.ctx):
            self._assign_index(t)
            self.emit("derive", term=t)
            self._on_new_belief(t)
        return True

    def _on_new_belief(self, t: TermId) -> None:
        if self.store.is_rule_like(t):
            self.reasoner.register_rule(t)
        self.reasoner.enqueue(t)
        contradiction = revision.detect_contradiction(self.store, self.beliefs, t, self.ctx)
        if contradiction is not None:
            self.emit("contradiction", p=contradiction.proposition, n=contradiction.negation)
            if self.auto_revision:
                try:
                    report = revision.resolve(self, contradiction, self.dialog,
                                              automatic=self.mode == AUTO)
                    self.emit("revision", report=report)
                except UnresolvedContradiction as exc:
                    self.emit("revision_error", message=str(exc))
        if self.beliefs.is_asserted(t, self.ctx):
            acting.on_belief_added(self, t)

    # -- queries ----------------------------------------------------------------

    def ask(self, goal: TermId) -> AskResult:
        result = self.reasoner.ask(goal, self.ctx)
        if not result.answers and self.store.is_ground(goal):
            if acting.on_query_stuck(self, goal):
                result = self.reasoner.ask(goal, self.ctx)
        return result

    def is_asserted(self, p: TermId) -> bool:
        return self.beliefs.is_asserted(p, self.ctx)

    def status(self, p: TermId) -> AssertionStatus:
        return self.beliefs.status(p, self.ctx)

    def eliminate(self, rule: TermId) -> list[tuple[TermId, frozenset]]:
        return self.reasoner.eliminate(rule, self.ctx)

    # -- contraction --------------------------------------------------------------

    def retract_hyp(self, h: TermId) -> RetractionReport:
        report = self.beliefs.retract(h, self.ctx)
        self.emit("retract", report=report)
        return report

    # -- acting ---------------------------------------------------------------------

    def perform(self, act: TermId) -> None:
        acting.perform(self, act)

    def register_act(self, name: str, arity: int, handler: acting.Handler) -> None:
        self.acts.register(name, arity, handler)

    # -- export -----------------------------------------------------------------------

    def hypotheses(self) -> list[TermId]:
        return sorted(self.ctx.hyps)

    def graph_export(self) -> dict:
        """Nodes: structural closure of every proposition that ever carried a
        support; edges labeled with argument positions."""
        reachable: set[TermId] = set()
        stack = list(self.beliefs.ever_supported())
        while stack:
            t = stack.pop()
            if t in reachable:
                continue
            reachable.add(t)
            stack.extend(self.store.args(t))
        nodes = []
        edges = []
        for t in sorted(reachable):
            nodes.append({
                "id": t,
                "functor": self.store.functor(t),
                "display": self.store.display(t),
                "asserted": self.beliefs.is_asserted(t, self.ctx),
                "hypothesis": t in self.ctx.hyps,
            })
            for pos, a in enumerate(self.store.args(t)):
                edges.append({"from": t, "to": a, "pos": pos})
        return {"nodes": nodes, "edges": edges}
