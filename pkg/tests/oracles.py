"""Independent brute-force oracles for the test suite.

Everything here recomputes expected results from first principles --
truth-table model enumeration, set-closure loops, exhaustive search --
so the engine's own derivation machinery is never on both sides of an
assertion.
"""

from __future__ import annotations

from itertools import product

from sneng.terms import TermId, TermStore


# ---------------------------------------------------------------------------
# propositional semantics
# ---------------------------------------------------------------------------

def atomic_props(store: TermStore, tid: TermId) -> set[TermId]:
    """Atomic propositions inside a (ground) wff; individuals don't count."""
    r = store.reading(tid)
    if r.kind == "atomic":
        return {tid}
    out: set[TermId] = set()
    for part in r.members + r.antecedents + r.consequents:
        out |= atomic_props(store, part)
    if r.kind == "forall":
        out |= atomic_props(store, r.body)
    return out


def eval_wff(store: TermStore, tid: TermId, assign: dict[TermId, bool]) -> bool:
    r = store.reading(tid)
    if r.kind == "atomic":
        return assign[tid]
    if r.kind == "andor":
        true = sum(eval_wff(store, m, assign) for m in r.members)
        return r.low <= true <= r.high
    if r.kind == "thresh":
        true = sum(eval_wff(store, m, assign) for m in r.members)
        return true < r.low or true > r.high
    if r.kind == "and-entail":
        if all(eval_wff(store, a, assign) for a in r.antecedents):
            return all(eval_wff(store, c, assign) for c in r.consequents)
        return True
    if r.kind == "or-entail":
        if any(eval_wff(store, a, assign) for a in r.antecedents):
            return all(eval_wff(store, c, assign) for c in r.consequents)
        return True
    raise ValueError(f"oracle cannot evaluate {store.display(tid)}")


def entails(store: TermStore, premises: list[TermId], conclusion: TermId) -> bool:
    """Truth-table entailment; fine up to a dozen or so atoms."""
    atoms = sorted(set().union(*(atomic_props(store, p) for p in premises),
                               atomic_props(store, conclusion)))
    for values in product((False, True), repeat=len(atoms)):
        assign = dict(zip(atoms, values))
        if all(eval_wff(store, p, assign) for p in premises):
            if not eval_wff(store, conclusion, assign):
                return False
    return True


# ---------------------------------------------------------------------------
# three-valued propagation search (for bigger ground KBs)
# ---------------------------------------------------------------------------

def _keval(store: TermStore, tid: TermId, assign: dict[TermId, bool]):
    """Kleene evaluation: True / False / None (unknown)."""
    r = store.reading(tid)
    if r.kind == "atomic":
        return assign.get(tid)
    if r.kind in ("andor", "thresh"):
        true = unknown = 0
        for m in r.members:
            v = _keval(store, m, assign)
            if v is True:
                true += 1
            elif v is None:
                unknown += 1
        lo, hi = true, true + unknown
        if r.kind == "andor":
            if lo > r.high or hi < r.low:
                return False
            if lo >= r.low and hi <= r.high:
                return True
            return None
        if lo > r.high or hi < r.low:
            return True
        if lo >= r.low and hi <= r.high:
            return False
        return None
    ants = [_keval(store, a, assign) for a in r.antecedents]
    cqs = [_keval(store, c, assign) for c in r.consequents]
    if False in cqs:
        cq = False
    elif None in cqs:
        cq = None
    else:
        cq = True
    if r.kind == "and-entail":
        if False in ants:
            return True
        ant = None if None in ants else True
    else:  # or-entail
        if True in ants:
            ant = True
        elif all(a is False for a in ants):
            return True
        else:
            ant = None
    if ant is True:
        return cq
    if cq is True:
        return True
    return None


def satisfiable(store: TermStore, wffs: list[TermId]) -> bool:
    """Backtracking model search with unit-style propagation."""
    atoms = sorted(set().union(set(), *(atomic_props(store, w) for w in wffs)))

    def search(assign: dict[TermId, bool]) -> bool:
        while True:
            forced_something = False
            for w in wffs:
                v = _keval(store, w, assign)
                if v is False:
                    return False
                if v is not None:
                    continue
                for a in atomic_props(store, w):
                    if a in assign:
                        continue
                    assign[a] = True
                    bad_true = _keval(store, w, assign) is False
                    assign[a] = False
                    bad_false = _keval(store, w, assign) is False
                    del assign[a]
                    if bad_true and bad_false:
                        return False
                    if bad_true or bad_false:
                        assign[a] = not bad_true
                        forced_something = True
            if not forced_something:
                break
        pick = next((a for a in atoms if a not in assign), None)
        if pick is None:
            return all(_keval(store, w, assign) is True for w in wffs)
        for v in (False, True):
            trial = dict(assign)
            trial[pick] = v
            if search(trial):
                return True
        return False

    return search({})


def entails_big(store: TermStore, premises: list[TermId], conclusion: TermId) -> bool:
    return not satisfiable(store, premises + [store.negation_of(conclusion)])


# ---------------------------------------------------------------------------
# grounding (independent of the engine's substitution code)
# ---------------------------------------------------------------------------

def substitute(store: TermStore, sigma: dict[TermId, TermId], tid: TermId) -> TermId:
    if store.is_variable(tid):
        return sigma.get(tid, tid)
    args = store.args(tid)
    if not args:
        return tid
    return store.intern(store.functor(tid), tuple(substitute(store, sigma, a) for a in args))


def ground_rules(store: TermStore, wffs: list[TermId], constants: list[TermId]) -> list[TermId]:
    """Instantiate every all() rule over the constant universe."""
    out = []
    for w in wffs:
        r = store.reading(w)
        if r.kind != "forall":
            out.append(w)
            continue
        for combo in product(constants, repeat=len(r.variables)):
            sigma = dict(zip(r.variables, combo))
            out.append(substitute(store, sigma, r.body))
    return out


# ---------------------------------------------------------------------------
# miscellaneous brute force
# ---------------------------------------------------------------------------

def transitive_closure(pairs: set[tuple]) -> set[tuple]:
    closure = set(pairs)
    while True:
        extra = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
        if not extra:
            return closure
        closure |= extra


def minimal_antichain(sets: list[frozenset]) -> set[frozenset]:
    return {s for s in sets if not any(t < s for t in sets)}
