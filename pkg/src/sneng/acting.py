"""Acting layer: transduction between beliefs and acts.

Two rule forms connect the belief space to behavior, both stored as ordinary
propositions with supports:

    whendo(trigger, act)   when the trigger becomes believed, perform the act;
    ifdo(goal, act)        when a query for the goal comes up empty, perform
                           the act, then re-ask once.

Acts are terms whose functor names a registered primitive (or `sequence`).
The mental acts believe/disbelieve are built in and route through the normal
assertion pipeline, so acting can never bypass support tracking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

from .terms import TermId

if TYPE_CHECKING:
    from .engine import Engine

Handler = Callable[["Engine", tuple[TermId, ...]], None]

BUILTIN_ACTS = ("believe", "disbelieve", "sequence")


class ActError(Exception):
    pass


def _noop(engine: "Engine", args: tuple[TermId, ...]) -> None:
    pass


@dataclass
class ActRegistry:
    handlers: dict[str, tuple[int, Handler]] = field(default_factory=dict)

    def register(self, name: str, arity: int, handler: Handler) -> None:
        if name in self.handlers or name in BUILTIN_ACTS:
            raise ActError(f"act {name!r} is already registered")
        self.handlers[name] = (arity, handler)

    def lookup(self, name: str):
        return self.handlers.get(name)


def default_registry() -> ActRegistry:
    """cross/lookat/say ship as transcript-logging (no-op effect) acts."""
    reg = ActRegistry()
    reg.register("cross", 1, _noop)
    reg.register("lookat", 1, _noop)
    reg.register("say", 1, _noop)
    return reg


def perform(engine: "Engine", act: TermId) -> None:
    """Perform one act term. Structural problems raise; handler crashes are
    reported as events and leave the knowledge base untouched."""
    store = engine.store
    if not store.is_ground(act):
        raise ActError(f"act {store.display(act)} has free variables")
    name = store.functor(act)
    args = store.args(act)
    if name == "sequence":
        for a in args:
            perform(engine, a)
        return
    if name == "believe":
        if len(args) != 1:
            raise ActError("believe takes one proposition")
        engine.emit("act", term=act)
        engine.assert_hyp(args[0])
        return
    if name == "disbelieve":
        if len(args) != 1:
            raise ActError("disbelieve takes one proposition")
        if args[0] not in engine.ctx.hyps:
            raise ActError(f"{store.display(args[0])} is not a hypothesis")
        engine.emit("act", term=act)
        engine.retract_hyp(args[0])
        return
    entry = engine.acts.lookup(name)
    if entry is None:
        raise ActError(f"unknown act functor {name!r}")
    arity, handler = entry
    if arity != len(args):
        raise ActError(f"act {name!r} expects {arity} argument(s), got {len(args)}")
    engine.emit("act", term=act)
    try:
        handler(engine, args)
    except ActError:
        raise
    except Exception as exc:  # user handler crash must not corrupt the KB
        engine.emit("act_error", message=f"{store.display(act)}: {exc}")


def _act_rules(engine: "Engine", functor: str) -> list[tuple[TermId, TermId, TermId]]:
    """Asserted (rule, trigger-slot, act-slot) triples for whendo/ifdo rules,
    including all()-wrapped ones, in term-id order."""
    store = engine.store
    out = []
    for rule in store.with_functor(functor):
        if len(store.args(rule)) == 2 and engine.beliefs.is_asserted(rule, engine.ctx):
            t, a = store.args(rule)
            out.append((rule, t, a))
    for rule in sorted(engine.reasoner.rules):
        r = store.reading(rule)
        if r.kind != "forall" or not engine.beliefs.is_asserted(rule, engine.ctx):
            continue
        body = r.body
        if store.functor(body) == functor and len(store.args(body)) == 2:
            t, a = store.args(body)
            out.append((rule, t, a))
    out.sort()
    return out


def on_belief_added(engine: "Engine", p: TermId) -> list[TermId]:
    """Fire every whendo rule whose trigger unifies with the new belief."""
    from .inference import resolve, unify

    performed = []
    for rule, trigger, act in _act_rules(engine, "whendo"):
        if (rule, p) in engine.whendo_memo:
            continue
        sigma = unify(engine.store, trigger, p)
        if sigma is None:
            continue
        engine.whendo_memo.add((rule, p))
        act_inst = resolve(engine.store, sigma, act)
        try:
            perform(engine, act_inst)
            performed.append(act_inst)
        except ActError as exc:
            engine.emit("act_error", message=str(exc))
    return performed


def on_query_stuck(engine: "Engine", goal: TermId) -> bool:
    """A ground query came up empty: perform matching ifdo acts, report
    whether any ran (the caller then re-asks exactly once)."""
    from .inference import resolve, unify

    ran = False
    for rule, trigger, act in _act_rules(engine, "ifdo"):
        sigma = unify(engine.store, trigger, goal)
        if sigma is None:
            continue
        act_inst = resolve(engine.store, sigma, act)
        try:
            perform(engine, act_inst)
            ran = True
        except ActError as exc:
            engine.emit("act_error", message=str(exc))
    return ran
