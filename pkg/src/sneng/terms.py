"""Interned term store.

Every expression the engine handles -- individuals, propositions, rules,
acts -- is a term: an atom, a variable, or a functor applied to other terms.
Terms are hash-consed: building a structure that already exists returns the
existing id, so structural identity and object identity coincide (one node
per distinct entity).

Connectives are ordinary applications with reserved functor spellings that
no surface identifier can collide with (identifiers cannot contain digits
followed by ',' or '>'):

    andor{i},{j}    at least i and at most j of the members are true;
                    members are kept sorted and de-duplicated, so the
                    collection behaves as a set.  andor0,0 with a single
                    member is the canonical negation.
    thresh{i},{j}   fewer than i or more than j of the members are true;
                    members sorted/de-duplicated as above.
    &=>{k}          and-entailment: first k args are antecedents (order
                    kept), the rest consequents.
    v=>{k}          or-entailment: same layout, any one antecedent suffices.
    all{k}          universal rule: first k args are the bound variables,
                    the last is the body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

TermId = int

ATOM = "atom"
VARIABLE = "variable"
APPLICATION = "application"

_CONNECTIVE_RE = re.compile(r"\A(andor|thresh)(\d+),(\d+)\Z")
_ENTAIL_RE = re.compile(r"\A(&=>|v=>)(\d+)\Z")
_ALL_RE = re.compile(r"\Aall(\d+)\Z")

NEGATION_FUNCTOR = "andor0,0"


class Wildcard:
    """Singleton marker for 'match anything' slots in patterns."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"


WILD = Wildcard()


@dataclass(frozen=True)
class Pattern:
    """Structural retrieval pattern: a functor (or wildcard) plus arg slots.

    Each arg slot is a concrete TermId, WILD, or a variable TermId; both of
    the latter match any term, independently (no cross-slot unification).
    """

    functor: object  # str or WILD
    args: tuple = ()


@dataclass(frozen=True)
class Reading:
    """Connective-level view of a term, decoded from its functor spelling."""

    kind: str  # atomic | variable | andor | thresh | and-entail | or-entail | forall
    low: int = 0
    high: int = 0
    members: tuple[TermId, ...] = ()
    antecedents: tuple[TermId, ...] = ()
    consequents: tuple[TermId, ...] = ()
    variables: tuple[TermId, ...] = ()
    body: TermId = -1


class TermError(ValueError):
    pass


class TermStore:
    """Append-only interned store. Single-writer; reads are cheap and pure."""

    def __init__(self):
        self._functor: list[str] = []
        self._args: list[tuple[TermId, ...]] = []
        self._variant: list[str] = []
        self._ids: dict[tuple[str, tuple[TermId, ...], bool], TermId] = {}
        self._by_functor: dict[str, list[TermId]] = {}
        self._free_vars: list[frozenset[TermId]] = []
        self._fresh_counter = 0

    def __len__(self) -> int:
        return len(self._functor)

    def __contains__(self, tid: TermId) -> bool:
        return 0 <= tid < len(self._functor)

    def terms(self) -> Iterator[TermId]:
        return iter(range(len(self._functor)))

    # -- construction ------------------------------------------------------

    def _add(self, functor: str, args: tuple[TermId, ...], variant: str) -> TermId:
        key = (functor, args, variant == VARIABLE)
        existing = self._ids.get(key)
        if existing is not None:
            return existing
        tid = len(self._functor)
        self._functor.append(functor)
        self._args.append(args)
        self._variant.append(variant)
        self._ids[key] = tid
        self._by_functor.setdefault(functor, []).append(tid)
        if variant == VARIABLE:
            fv: frozenset[TermId] = frozenset((tid,))
        else:
            fv = frozenset().union(*(self._free_vars[a] for a in args)) if args else frozenset()
            if variant == APPLICATION:
                m = _ALL_RE.match(functor)
                if m:
                    fv = fv - frozenset(args[: int(m.group(1))])
        self._free_vars.append(fv)
        return tid

    def intern(self, functor: str, args: Sequence[TermId] = ()) -> TermId:
        """Return the id of functor(args), creating it only if absent."""
        args = tuple(args)
        for a in args:
            if a not in self:
                raise TermError(f"unknown term id {a!r}")
        if _CONNECTIVE_RE.match(functor):
            # set-oriented connectives: order-insensitive, duplicate-free
            args = tuple(sorted(set(args)))
        variant = APPLICATION if args else ATOM
        return self._add(functor, args, variant)

    def atom(self, name: str) -> TermId:
        return self.intern(name, ())

    def variable(self, name: str) -> TermId:
        return self._add(name, (), VARIABLE)

    def fresh_variable(self, base: str) -> TermId:
        """A variable term guaranteed distinct from any surface-written one."""
        base = base.split("#", 1)[0]
        self._fresh_counter += 1
        return self.variable(f"{base}#{self._fresh_counter}")

    # connective builders

    def andor(self, low: int, high: int, members: Iterable[TermId]) -> TermId:
        members = tuple(sorted(set(members)))
        if not 0 <= low <= high <= len(members):
            raise TermError(f"andor bounds ({low},{high}) invalid for {len(members)} members")
        return self.intern(f"andor{low},{high}", members)

    def thresh(self, low: int, high: int, members: Iterable[TermId]) -> TermId:
        members = tuple(sorted(set(members)))
        if not 0 <= low <= high <= len(members):
            raise TermError(f"thresh bounds ({low},{high}) invalid for {len(members)} members")
        return self.intern(f"thresh{low},{high}", members)

    def and_entail(self, antecedents: Sequence[TermId], consequents: Sequence[TermId]) -> TermId:
        if not antecedents or not consequents:
            raise TermError("entailment needs antecedents and consequents")
        return self.intern(f"&=>{len(antecedents)}", tuple(antecedents) + tuple(consequents))

    def or_entail(self, antecedents: Sequence[TermId], consequents: Sequence[TermId]) -> TermId:
        if not antecedents or not consequents:
            raise TermError("entailment needs antecedents and consequents")
        return self.intern(f"v=>{len(antecedents)}", tuple(antecedents) + tuple(consequents))

    def forall(self, variables: Sequence[TermId], body: TermId) -> TermId:
        if not variables:
            raise TermError("all() needs at least one variable")
        for v in variables:
            if not self.is_variable(v):
                raise TermError(f"all() binder {self.display(v)} is not a variable")
        return self.intern(f"all{len(variables)}", tuple(variables) + (body,))

    def negation_of(self, p: TermId) -> TermId:
        if self.is_variable(p):
            raise TermError("cannot negate a bare variable")
        return self.intern(NEGATION_FUNCTOR, (p,))

    def complement_of(self, p: TermId) -> TermId:
        """~p, except that the complement of a negation ~q is q itself."""
        if self.is_negation(p):
            return self._args[p][0]
        return self.negation_of(p)

    # -- accessors ---------------------------------------------------------

    def functor(self, tid: TermId) -> str:
        return self._functor[tid]

    def args(self, tid: TermId) -> tuple[TermId, ...]:
        return self._args[tid]

    def variant(self, tid: TermId) -> str:
        return self._variant[tid]

    def is_variable(self, tid: TermId) -> bool:
        return self._variant[tid] == VARIABLE

    def is_negation(self, tid: TermId) -> bool:
        return self._functor[tid] == NEGATION_FUNCTOR and len(self._args[tid]) == 1

    def free_variables(self, tid: TermId) -> frozenset[TermId]:
        return self._free_vars[tid]

    def is_ground(self, tid: TermId) -> bool:
        return not self._free_vars[tid]

    def with_functor(self, functor: str) -> tuple[TermId, ...]:
        return tuple(self._by_functor.get(functor, ()))

    def has_atom(self, name: str) -> bool:
        return (name, (), False) in self._ids

    def lookup(self, functor: str, args: Sequence[TermId] = ()) -> TermId | None:
        """Like intern, but returns None instead of creating."""
        args = tuple(args)
        if _CONNECTIVE_RE.match(functor):
            args = tuple(sorted(set(args)))
        return self._ids.get((functor, args, False))

    def reading(self, tid: TermId) -> Reading:
        if self._variant[tid] == VARIABLE:
            return Reading(kind="variable")
        functor = self._functor[tid]
        args = self._args[tid]
        m = _CONNECTIVE_RE.match(functor)
        if m:
            kind = "andor" if m.group(1) == "andor" else "thresh"
            return Reading(kind=kind, low=int(m.group(2)), high=int(m.group(3)), members=args)
        m = _ENTAIL_RE.match(functor)
        if m:
            k = int(m.group(2))
            kind = "and-entail" if m.group(1) == "&=>" else "or-entail"
            return Reading(kind=kind, antecedents=args[:k], consequents=args[k:])
        m = _ALL_RE.match(functor)
        if m:
            k = int(m.group(1))
            return Reading(kind="forall", variables=args[:k], body=args[-1])
        return Reading(kind="atomic")

    def is_rule_like(self, tid: TermId) -> bool:
        return self.reading(tid).kind in ("andor", "thresh", "and-entail", "or-entail", "forall")

    # -- retrieval ---------------------------------------------------------

    def find(self, pattern: Pattern) -> set[TermId]:
        """All interned terms matching the pattern. Pure structural filter."""
        if pattern.functor is WILD:
            candidates: Iterable[TermId] = self.terms()
        else:
            candidates = self._by_functor.get(pattern.functor, ())
        out = set()
        for tid in candidates:
            if self._variant[tid] == VARIABLE:
                continue
            if self._matches(tid, pattern):
                out.add(tid)
        return out

    def _matches(self, tid: TermId, pattern: Pattern) -> bool:
        args = self._args[tid]
        if len(args) != len(pattern.args):
            return False
        for got, want in zip(args, pattern.args):
            if want is WILD:
                continue
            if isinstance(want, int) and self.is_variable(want):
                continue  # variable slot: matches anything, no binding
            if got != want:
                return False
        return True

    # -- display -----------------------------------------------------------

    def display(self, tid: TermId) -> str:
        """Canonical surface syntax; parsing the result re-interns this term."""
        r = self.reading(tid)
        if r.kind == "variable":
            return self._functor[tid]
        if r.kind == "atomic":
            args = self._args[tid]
            if not args:
                return self._functor[tid]
            return f"{self._functor[tid]}({','.join(self.display(a) for a in args)})"
        if r.kind == "andor":
            n = len(r.members)
            # sorted by text, so the rendering is stable across stores
            inner = ",".join(sorted(self.display(m) for m in r.members))
            if (r.low, r.high) == (0, 0) and n == 1:
                return "~" + self._maybe_paren(r.members[0])
            if (r.low, r.high) == (n, n):
                return "and{%s}" % inner
            if (r.low, r.high) == (1, n):
                return "or{%s}" % inner
            return "andor(%d,%d){%s}" % (r.low, r.high, inner)
        if r.kind == "thresh":
            inner = ",".join(sorted(self.display(m) for m in r.members))
            return "thresh(%d,%d){%s}" % (r.low, r.high, inner)
        if r.kind in ("and-entail", "or-entail"):
            if r.kind == "or-entail" and len(r.antecedents) == 1 and len(r.consequents) == 1:
                lhs = self._maybe_paren(r.antecedents[0])
                return f"{lhs} => {self.display(r.consequents[0])}"
            op = "&=>" if r.kind == "and-entail" else "v=>"
            lhs = ",".join(self.display(a) for a in r.antecedents)
            rhs = ",".join(self.display(c) for c in r.consequents)
            return "{%s} %s {%s}" % (lhs, op, rhs)
        # forall
        names = ",".join(self._functor[v] for v in r.variables)
        return f"all({names})({self.display(r.body)})"

    def _maybe_paren(self, tid: TermId) -> str:
        # infix => forms need parens when nested under ~ or on the left of =>
        text = self.display(tid)
        r = self.reading(tid)
        if r.kind == "or-entail" and len(r.antecedents) == 1 and len(r.consequents) == 1:
            return f"({text})"
        return text
