"""Bi-directional inference over set-oriented connectives.

Backward chaining answers queries by matching goals against asserted facts
and against the conclusion slots of asserted rules; goal tabling makes
recursive rule sets terminate.  Forward chaining saturates the consequences
of a newly told fact.  Both directions share one table of *elimination
schemas* per connective: sound (conclusion, premises) pairs meaning
"rule + premises entail conclusion".

For andor(i,j){m1..mn} ("at least i, at most j are true"):
  * j other members true        force a member false;
  * n-i other members false     force a member true.
For thresh(i,j){m1..mn} ("fewer than i or more than j are true"):
  * i others true + n-j-1 others false   force a member true;
  * n-j others false + i-1 others true   force a member false.

A member that is syntactically a negation ~q counts as false when q is
asserted, and "derive its negation" derives q -- this is where the logical
equivalence of ~~q and q lives (the terms stay structurally distinct).
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Optional

from .beliefs import BeliefStore, Context, SupportRecord
from .terms import NEGATION_FUNCTOR, TermId, TermStore

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))

Subst = dict[TermId, TermId]

# guards against combinatorial blowup on adversarial connectives
MAX_SCHEMA_ALTERNATIVES = 4096
MAX_ORIGIN_COMBOS = 4096


class InferenceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# unification
# ---------------------------------------------------------------------------

def walk(store: TermStore, sigma: Subst, t: TermId) -> TermId:
    while store.is_variable(t) and t in sigma:
        t = sigma[t]
    return t


def _occurs(store: TermStore, sigma: Subst, v: TermId, t: TermId) -> bool:
    t = walk(store, sigma, t)
    if t == v:
        return True
    return any(_occurs(store, sigma, v, a) for a in store.args(t))


def unify(store: TermStore, a: TermId, b: TermId, base: Optional[Subst] = None) -> Optional[Subst]:
    """Most general unifier with occurs check; failure is None."""
    sigma: Subst = dict(base) if base else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x = walk(store, sigma, x)
        y = walk(store, sigma, y)
        if x == y:
            continue
        if store.is_variable(x):
            if _occurs(store, sigma, x, y):
                return None
            sigma[x] = y
        elif store.is_variable(y):
            if _occurs(store, sigma, y, x):
                return None
            sigma[y] = x
        else:
            if store.functor(x) != store.functor(y):
                return None
            xa, ya = store.args(x), store.args(y)
            if len(xa) != len(ya):
                return None
            stack.extend(zip(xa, ya))
    return sigma


def resolve(store: TermStore, sigma: Subst, t: TermId) -> TermId:
    """Apply sigma fully, interning any instance structure it creates."""
    t = walk(store, sigma, t)
    if store.is_variable(t) or store.is_ground(t):
        return t
    args = store.args(t)
    new_args = tuple(resolve(store, sigma, a) for a in args)
    if new_args == args:
        return t
    return store.intern(store.functor(t), new_args)


def restrict(store: TermStore, sigma: Subst, variables: Iterable[TermId]) -> Subst:
    return {v: resolve(store, sigma, v) for v in variables if v in sigma}


# ---------------------------------------------------------------------------
# elimination schemas
# ---------------------------------------------------------------------------

def elimination_schemas(store: TermStore, body: TermId,
                        nesting: int = 2) -> list[tuple[TermId, tuple[TermId, ...]]]:
    """Sound (conclusion, premises) pairs for the connective term `body`.

    When a conclusion is itself a rule-shaped term (a rule concluding a
    rule), its own schemas are composed in: body + P |- inner, and
    inner + Q |- c, give body + P + Q |- c.
    """
    out = _base_schemas(store, body)
    for _ in range(nesting):
        extra: list[tuple[TermId, tuple[TermId, ...]]] = []
        for c, prem in out:
            if c == body or not store.is_rule_like(c) or store.reading(c).kind == "forall":
                continue
            for c2, prem2 in _base_schemas(store, c):
                if c2 == c:
                    continue
                composed = (c2, prem + prem2)
                if composed not in out and composed not in extra:
                    extra.append(composed)
        if not extra:
            break
        out.extend(extra)
        if len(out) > MAX_SCHEMA_ALTERNATIVES:
            break
    return out


def _base_schemas(store: TermStore, body: TermId) -> list[tuple[TermId, tuple[TermId, ...]]]:
    r = store.reading(body)
    out: list[tuple[TermId, tuple[TermId, ...]]] = []
    if r.kind == "or-entail":
        for c in r.consequents:
            for a in r.antecedents:
                out.append((c, (a,)))
    elif r.kind == "and-entail":
        for c in r.consequents:
            out.append((c, r.antecedents))
    elif r.kind == "atomic":
        out.append((body, ()))
    elif r.kind in ("andor", "thresh"):
        members = r.members
        n = len(members)
        for k, m in enumerate(members):
            others = members[:k] + members[k + 1:]
            if r.kind == "andor":
                if r.high <= len(others):
                    for true_set in combinations(others, r.high):
                        out.append((store.complement_of(m), true_set))
                        if len(out) > MAX_SCHEMA_ALTERNATIVES:
                            return out
                if n - r.low <= len(others):
                    for false_set in combinations(others, n - r.low):
                        out.append((m, tuple(store.complement_of(x) for x in false_set)))
                        if len(out) > MAX_SCHEMA_ALTERNATIVES:
                            return out
            else:  # thresh
                if r.high < n and r.low <= len(others):
                    for true_set in combinations(others, r.low):
                        rest = tuple(x for x in others if x not in true_set)
                        for false_set in combinations(rest, n - r.high - 1):
                            prem = true_set + tuple(store.complement_of(x) for x in false_set)
                            out.append((m, prem))
                            if len(out) > MAX_SCHEMA_ALTERNATIVES:
                                return out
                if r.low >= 1 and n - r.high <= len(others):
                    for false_set in combinations(others, n - r.high):
                        rest = tuple(x for x in others if x not in false_set)
                        for true_set in combinations(rest, r.low - 1):
                            prem = tuple(store.complement_of(x) for x in false_set) + true_set
                            out.append((store.complement_of(m), prem))
                            if len(out) > MAX_SCHEMA_ALTERNATIVES:
                                return out
    return out


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AskAnswer:
    substitution: dict[TermId, TermId]
    instance: TermId
    records: tuple[SupportRecord, ...]

    def pairs(self) -> list[tuple[dict[TermId, TermId], SupportRecord]]:
        return [(self.substitution, r) for r in self.records]


@dataclass
class AskResult:
    goal: TermId
    answers: list[AskAnswer]
    cap_hit: bool = False

    def __bool__(self) -> bool:
        return bool(self.answers)

    def instances(self) -> list[TermId]:
        return [a.instance for a in self.answers]


@dataclass
class ForwardResult:
    derived: list[TermId]  # newly asserted, in derivation order
    cap_hit: bool = False


class _Entry:
    __slots__ = ("answers", "expanded")

    def __init__(self):
        self.answers: set[TermId] = set()
        self.expanded = False


# ---------------------------------------------------------------------------
# the reasoner
# ---------------------------------------------------------------------------

class Reasoner:
    """Forward and backward inference over one knowledge base.

    The owning engine supplies `record(term, origin_set)` which stores the
    derived support and runs the assertion pipeline (contradiction check,
    acting hooks) when a proposition becomes newly asserted.
    """

    def __init__(self, store: TermStore, beliefs: BeliefStore,
                 record: Callable[[TermId, frozenset], bool], depth_cap: int = 50):
        self.store = store
        self.beliefs = beliefs
        self._record = record
        self.depth_cap = depth_cap
        self.rules: set[TermId] = set()
        self._ground_watch: dict[TermId, set[TermId]] = {}
        self._functor_watch: dict[str, set[TermId]] = {}
        self._conclusion_index: dict[str, set[TermId]] = {}
        # rule-shaped interned terms that are not (yet) asserted: backward
        # chaining may prove them as subgoals before applying them
        self._potential_index: dict[str, set[TermId]] = {}
        self._scanned_upto = 0
        self._ground_schemas: dict[TermId, tuple] = {}
        self._canon_vars: list[TermId] = []
        # live forward episode state (assertions made mid-episode propagate)
        self._agenda: Optional[deque] = None
        self._queued: set[TermId] = set()

    # -- rule registry -------------------------------------------------------

    def register_rule(self, tid: TermId) -> None:
        """Index an asserted rule term for triggering and goal lookup."""
        if tid in self.rules or not self.store.is_rule_like(tid):
            return
        self.rules.add(tid)
        r = self.store.reading(tid)
        body = r.body if r.kind == "forall" else tid
        br = self.store.reading(body)
        quantified = r.kind == "forall"

        def watch(term: TermId, falsity: bool) -> None:
            if quantified:
                self._functor_watch.setdefault(self.store.functor(term), set()).add(tid)
                if self.store.is_negation(term):
                    inner = self.store.args(term)[0]
                    self._functor_watch.setdefault(self.store.functor(inner), set()).add(tid)
            else:
                self._ground_watch.setdefault(term, set()).add(tid)
                if falsity:
                    self._ground_watch.setdefault(self.store.complement_of(term), set()).add(tid)

        if br.kind in ("and-entail", "or-entail"):
            for a in br.antecedents:
                watch(a, falsity=False)
        elif br.kind in ("andor", "thresh"):
            for m in br.members:
                watch(m, falsity=True)
        for key in self._conclusion_keys(tid):
            self._conclusion_index.setdefault(key, set()).add(tid)

    def _affected_rules(self, t: TermId) -> list[TermId]:
        hit: set[TermId] = set()
        hit |= self._ground_watch.get(t, set())
        hit |= self._functor_watch.get(self.store.functor(t), set())
        if self.store.is_negation(t):
            inner = self.store.args(t)[0]
            hit |= self._functor_watch.get(self.store.functor(inner), set())
        if self.store.is_rule_like(t):
            hit.add(t)
        return sorted(hit)

    def _conclusion_keys(self, rule: TermId) -> set[str]:
        r = self.store.reading(rule)
        body = r.body if r.kind == "forall" else rule
        keys: set[str] = set()
        for c, _prem in self._schemas(body):
            keys.add(self.store.functor(c))
            if self.store.is_negation(c):
                keys.add(self.store.functor(self.store.args(c)[0]))
        return keys

    def _refresh_potential(self) -> None:
        while self._scanned_upto < len(self.store):
            tid = self._scanned_upto
            self._scanned_upto += 1
            if not self.store.is_rule_like(tid) or not self.store.is_ground(tid):
                continue
            for key in self._conclusion_keys(tid):
                self._potential_index.setdefault(key, set()).add(tid)

    def _candidate_rules(self, goal: TermId) -> list[TermId]:
        self._refresh_potential()
        keys = [self.store.functor(goal)]
        if self.store.is_negation(goal):
            keys.append(self.store.functor(self.store.args(goal)[0]))
        hit: set[TermId] = set()
        for key in keys:
            hit |= self._conclusion_index.get(key, set())
            hit |= self._potential_index.get(key, set())
        return sorted(hit)

    def _schemas(self, body: TermId) -> tuple:
        if self.store.is_ground(body):
            cached = self._ground_schemas.get(body)
            if cached is None:
                cached = tuple(elimination_schemas(self.store, body))
                self._ground_schemas[body] = cached
            return cached
        return tuple(elimination_schemas(self.store, body))

    def _rename_apart(self, rule: TermId) -> TermId:
        """Fresh-variable copy of a quantified rule's body (per application)."""
        r = self.store.reading(rule)
        if r.kind != "forall":
            return rule
        sigma = {v: self.store.fresh_variable(self.store.functor(v)) for v in r.variables}
        return resolve(self.store, sigma, r.body)

    def kb_is_datalog(self, ctx: Context) -> bool:
        """True when no asserted quantified rule can build nested instances."""
        for rule in self.rules:
            if not self.beliefs.is_asserted(rule, ctx):
                continue
            r = self.store.reading(rule)
            if r.kind != "forall":
                continue
            br = self.store.reading(r.body)
            slots = br.consequents if br.kind in ("and-entail", "or-entail") else br.members
            if br.kind == "atomic":
                slots = (r.body,)
            for c in slots:
                for arg in self.store.args(c):
                    if not self.store.is_variable(arg) and self.store.args(arg) \
                            and not self.store.is_ground(arg):
                        return False
        return True

    # -- support snapshots ----------------------------------------------------

    def _origin_choices(self, t: TermId, ctx: Context) -> list[frozenset]:
        return [r.origin_set for r in self.beliefs.supports_in(t, ctx)]

    # -- public op: connective elimination -------------------------------------

    def eliminate(self, rule: TermId, ctx: Context) -> list[tuple[TermId, frozenset]]:
        """All (derived, origin set) pairs the asserted rule yields right now."""
        r = self.store.reading(rule)
        if r.kind == "forall":
            return self._fire_quantified_fully(rule, ctx)
        return self._eliminate_ground(rule, rule, ctx)

    def _eliminate_ground(self, rule: TermId, body: TermId,
                          ctx: Context) -> list[tuple[TermId, frozenset]]:
        rule_sets = self._origin_choices(rule, ctx)
        if not rule_sets:
            return []
        out: list[tuple[TermId, frozenset]] = []
        for conclusion, premises in self._schemas(body):
            if conclusion == rule:
                continue  # e.g. andor(0,0){p} re-deriving itself
            prem_choices = []
            ok = True
            for q in premises:
                choices = self._origin_choices(q, ctx)
                if not choices:
                    ok = False
                    break
                prem_choices.append(choices)
            if not ok:
                continue
            combos = 0
            for combo in product(rule_sets, *prem_choices):
                out.append((conclusion, frozenset().union(*combo)))
                combos += 1
                if combos > MAX_ORIGIN_COMBOS:
                    break
        return out

    # -- forward chaining -------------------------------------------------------

    def enqueue(self, t: TermId) -> None:
        if self._agenda is not None and t not in self._queued:
            self._agenda.append(t)
            self._queued.add(t)

    def forward(self, seeds: list[TermId], ctx: Context) -> ForwardResult:
        """Fire eliminations to quiescence starting from the seed assertions."""
        result = ForwardResult(derived=[])
        if self._agenda is not None:
            for s in seeds:  # nested tell during an episode joins that episode
                self.enqueue(s)
            return result
        self._agenda = deque(seeds)
        self._queued = set(seeds)
        datalog = self.kb_is_datalog(ctx)
        budget = max(10_000, self.depth_cap * 200)
        fired = 0
        try:
            while self._agenda:
                t = self._agenda.popleft()
                self._queued.discard(t)
                for rule in self._affected_rules(t):
                    if not self.beliefs.is_asserted(rule, ctx):
                        continue
                    r = self.store.reading(rule)
                    if r.kind == "forall":
                        derivations = self._fire_quantified(rule, t, ctx)
                    else:
                        derivations = self._eliminate_ground(rule, rule, ctx)
                    for d, oset in sorted(derivations):
                        before = self.beliefs.is_asserted(d, ctx)
                        changed = self._record(d, oset)
                        if changed:
                            if not before:
                                result.derived.append(d)
                            self.enqueue(d)
                            if not datalog:
                                fired += 1
                                if fired > budget:
                                    result.cap_hit = True
                                    self._agenda.clear()
                                    return result
        finally:
            self._agenda = None
            self._queued = set()
        return result

    def _trigger_substs(self, slot: TermId, trigger: TermId,
                        falsity_matters: bool) -> list[Subst]:
        """Ways the trigger fact bears on a rule slot (as it, or as its complement)."""
        out = []
        s = unify(self.store, slot, trigger)
        if s is not None:
            out.append(s)
        if falsity_matters:
            if self.store.is_negation(trigger):
                s = unify(self.store, slot, self.store.args(trigger)[0])
                if s is not None:
                    out.append(s)
            if self.store.is_negation(slot):
                s = unify(self.store, self.store.args(slot)[0], trigger)
                if s is not None:
                    out.append(s)
        return out

    def _fire_quantified(self, rule: TermId, trigger: TermId,
                         ctx: Context) -> list[tuple[TermId, frozenset]]:
        body = self._rename_apart(rule)
        br = self.store.reading(body)
        rule_sets = self._origin_choices(rule, ctx)
        if not rule_sets:
            return []
        out: list[tuple[TermId, frozenset]] = []
        if br.kind in ("and-entail", "or-entail"):
            for ant in br.antecedents:
                for sigma in self._trigger_substs(ant, trigger, falsity_matters=False):
                    premises = br.antecedents if br.kind == "and-entail" else (ant,)
                    for theta, oset in self._join(premises, sigma, ctx):
                        for c in br.consequents:
                            inst = resolve(self.store, theta, c)
                            if not self.store.is_ground(inst):
                                continue  # non-range-restricted: skip open instances
                            for rs in rule_sets:
                                out.append((inst, rs | oset))
        elif br.kind in ("andor", "thresh"):
            seen: set[TermId] = set()
            for m in br.members:
                for sigma in self._trigger_substs(m, trigger, falsity_matters=True):
                    inst_body = resolve(self.store, sigma, body)
                    if not self.store.is_ground(inst_body) or inst_body in seen:
                        continue
                    seen.add(inst_body)
                    for conclusion, premises in self._schemas(inst_body):
                        prem_choices = []
                        ok = True
                        for q in premises:
                            choices = self._origin_choices(q, ctx)
                            if not choices:
                                ok = False
                                break
                            prem_choices.append(choices)
                        if not ok:
                            continue
                        for combo in product(rule_sets, *prem_choices):
                            out.append((conclusion, frozenset().union(*combo)))
        return out

    def _fire_quantified_fully(self, rule: TermId, ctx: Context) -> list[tuple[TermId, frozenset]]:
        """Evaluate a quantified rule against every asserted fact that could trigger it."""
        body_probe = self.store.reading(rule).body
        br = self.store.reading(body_probe)
        slots = br.antecedents if br.kind in ("and-entail", "or-entail") else br.members
        out: list[tuple[TermId, frozenset]] = []
        seen_triggers: set[TermId] = set()
        for slot in slots:
            functors = {self.store.functor(slot)}
            if self.store.is_negation(slot):
                functors.add(self.store.functor(self.store.args(slot)[0]))
            if br.kind in ("andor", "thresh"):
                functors.add(NEGATION_FUNCTOR)
            for f in sorted(functors):
                for fact in self.beliefs.asserted_by_functor(f, ctx):
                    if fact in seen_triggers:
                        continue
                    seen_triggers.add(fact)
                    out.extend(self._fire_quantified(rule, fact, ctx))
        return out

    def _join(self, premises: tuple[TermId, ...], sigma: Subst,
              ctx: Context) -> list[tuple[Subst, frozenset]]:
        """Solve a premise conjunction against asserted facts only."""
        acc: list[tuple[Subst, frozenset]] = [(sigma, frozenset())]
        for q in premises:
            nxt: list[tuple[Subst, frozenset]] = []
            for theta, oset in acc:
                q_inst = resolve(self.store, theta, q)
                if self.store.is_ground(q_inst):
                    for o in self._origin_choices(q_inst, ctx):
                        nxt.append((theta, oset | o))
                    continue
                for cand in self.beliefs.asserted_by_functor(self.store.functor(q_inst), ctx):
                    theta2 = unify(self.store, q_inst, cand, theta)
                    if theta2 is None:
                        continue
                    for o in self._origin_choices(cand, ctx):
                        nxt.append((theta2, oset | o))
            acc = nxt
            if not acc:
                break
        return acc

    # -- backward chaining --------------------------------------------------------

    def ask(self, goal: TermId, ctx: Context) -> AskResult:
        """Tabled backward chaining; loops are cut by the goal table and the
        table is re-expanded until no entry grows (fixpoint)."""
        if self.store.is_variable(goal):
            raise InferenceError("goal must not be a bare variable")
        self._table: dict[TermId, _Entry] = {}
        self._cap_hit = False
        self._datalog = self.kb_is_datalog(ctx)
        while True:
            for e in self._table.values():
                e.expanded = False
            before = sum(len(e.answers) for e in self._table.values())
            root = self._solve(goal, 0, ctx)
            after = sum(len(e.answers) for e in self._table.values())
            if after == before:
                break
        answers = []
        goal_vars = self.store.free_variables(goal)
        for inst in sorted(root.answers):
            records = self.beliefs.supports_in(inst, ctx)
            if not records:
                continue  # e.g. retracted by revision mid-episode
            sigma = unify(self.store, goal, inst)
            if sigma is None:
                continue
            answers.append(AskAnswer(substitution=restrict(self.store, sigma, goal_vars),
                                     instance=inst, records=records))
        result = AskResult(goal=goal, answers=answers, cap_hit=self._cap_hit)
        self._table = {}
        return result

    def _canon(self, goal: TermId) -> TermId:
        fv = self.store.free_variables(goal)
        if not fv:
            return goal
        order: list[TermId] = []

        def collect(t: TermId):
            if self.store.is_variable(t):
                if t not in order:
                    order.append(t)
                return
            for a in self.store.args(t):
                if self.store.free_variables(a):
                    collect(a)

        collect(goal)
        while len(self._canon_vars) < len(order):
            self._canon_vars.append(self.store.variable(f"_C{len(self._canon_vars)}"))
        sigma = {v: self._canon_vars[i] for i, v in enumerate(order)}
        return resolve(self.store, sigma, goal)

    def _solve(self, goal: TermId, depth: int, ctx: Context) -> _Entry:
        key = self._canon(goal)
        entry = self._table.get(key)
        if entry is None:
            entry = _Entry()
            self._table[key] = entry
        if entry.expanded or self.store.is_variable(goal):
            return entry
        if not self._datalog and depth > self.depth_cap:
            self._cap_hit = True
            return entry
        entry.expanded = True

        # facts
        for cand in self.beliefs.asserted_by_functor(self.store.functor(goal), ctx):
            if unify(self.store, goal, cand) is not None:
                entry.answers.add(cand)

        # rules
        for rule in self._candidate_rules(goal):
            if rule == goal:
                continue
            rule_sets = self._origin_choices(rule, ctx)
            if not rule_sets:
                # the rule itself may be derivable (a rule concluded by a rule)
                sub = self._solve(rule, depth + 1, ctx)
                if rule in sub.answers:
                    rule_sets = self._origin_choices(rule, ctx)
            if not rule_sets:
                continue
            body = self._rename_apart(rule)
            for conclusion, premises in self._schemas(body):
                sigma0 = unify(self.store, goal, conclusion)
                if sigma0 is None:
                    continue
                acc: list[tuple[Subst, frozenset]] = [(sigma0, rs) for rs in rule_sets]
                for q in premises:
                    nxt: list[tuple[Subst, frozenset]] = []
                    for theta, oset in acc:
                        q_inst = resolve(self.store, theta, q)
                        sub = self._solve(q_inst, depth + 1, ctx)
                        for inst in sorted(sub.answers):
                            theta2 = unify(self.store, q_inst, inst, theta)
                            if theta2 is None:
                                continue
                            for o in self._origin_choices(inst, ctx):
                                nxt.append((theta2, oset | o))
                    acc = nxt
                    if not acc:
                        break
                for theta, oset in acc:
                    inst = resolve(self.store, theta, goal)
                    if not self.store.is_ground(inst):
                        continue
                    self._record(inst, oset)
                    entry.answers.add(inst)
        return entry
