"""Answer-set enumeration and brave/cautious query answering.

The solvable fragment is what fact/rule authoring produces: disjunction
from or-facts and rule heads, negation-as-failure that is stratified at
the ground-atom level (the inertia axioms and "not provable" premises
are).  Enumeration case-splits on head disjunctions, computes the
stratified least fixpoint per split, keeps candidates that are models of
the full program, and filters them down to stable models (each candidate
is checked to be a minimal model of its reduct).  Small non-stratified
programs fall back to guess-and-check over the atom universe.

Query matching is frame-style subsumption: a query term matches a stored
term carrying at least the query's roles, never the reverse.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

from .errors import CapacityError, UnsupportedProgramError
from .ground import GroundProgram, unify_atom
from .logic import Atom, Literal, Rule

MAX_DISJUNCTION_POINTS = 20
GUESS_CHECK_ATOM_CAP = 18

BRAVE = "brave"
CAUTIOUS = "cautious"


def _strata(rules, atoms) -> dict | None:
    """Ground-atom stratum per atom, or None when naf sits on a cycle."""
    stratum = {a: 0 for a in atoms}
    n = len(atoms) or 1
    for _round in range(n + 1):
        changed = False
        for r in rules:
            for item in r.body:
                if not isinstance(item, Literal):
                    continue
                if item.atom not in stratum:
                    stratum[item.atom] = 0
                base = stratum[item.atom] + (1 if item.naf else 0)
                for h in r.heads:
                    if stratum.get(h, 0) < base:
                        stratum[h] = base
                        changed = True
        if not changed:
            return stratum
    return None


def _split_fixpoint(rules, stratum) -> frozenset:
    """Perfect model of a disjunction-free program, strata bottom-up."""
    by_level = defaultdict(list)
    for r in rules:
        by_level[max((stratum.get(h, 0) for h in r.heads), default=0)].append(r)
    model: set = set()
    for level in sorted(by_level):
        settled = frozenset(model)
        changed = True
        while changed:
            changed = False
            for r in by_level[level]:
                head = r.heads[0]
                if head in model:
                    continue
                ok = True
                for item in r.body:
                    if item.naf:
                        # naf atoms live strictly below; settled is final
                        if item.atom in settled:
                            ok = False
                            break
                    elif item.atom not in model:
                        ok = False
                        break
                if ok:
                    model.add(head)
                    changed = True
    return frozenset(model)


def is_model(rules, candidate: frozenset) -> bool:
    for r in rules:
        applicable = True
        for item in r.body:
            if item.naf:
                if item.atom in candidate:
                    applicable = False
                    break
            elif item.atom not in candidate:
                applicable = False
                break
        if applicable and not any(h in candidate for h in r.heads):
            return False
    return True


def gl_reduct(rules, candidate: frozenset) -> list[Rule]:
    out = []
    for r in rules:
        if any(item.naf and item.atom in candidate for item in r.body):
            continue
        out.append(
            Rule(
                heads=r.heads,
                body=tuple(item for item in r.body if not item.naf),
            )
        )
    return out


def _least_model_definite(rules) -> frozenset:
    model: set = set()
    changed = True
    while changed:
        changed = False
        for r in rules:
            if r.heads[0] not in model and all(
                item.atom in model for item in r.body
            ):
                model.add(r.heads[0])
                changed = True
    return frozenset(model)


def _splits(rules, cap: int):
    """All single-head versions of a program, one choice per disjunction."""
    disjunctive = [r for r in rules if len(r.heads) > 1]
    if len(disjunctive) > cap:
        raise CapacityError(
            f"{len(disjunctive)} disjunction points exceed the cap of {cap}"
        )
    fixed = [r for r in rules if len(r.heads) == 1]
    for choice in itertools.product(*(r.heads for r in disjunctive)):
        chosen = [
            Rule(heads=(head,), body=r.body)
            for head, r in zip(choice, disjunctive)
        ]
        yield fixed + chosen


def is_stable(rules, candidate: frozenset,
              cap: int = MAX_DISJUNCTION_POINTS) -> bool:
    """Is the candidate a minimal model of its reduct?"""
    reduct = gl_reduct(rules, candidate)
    if not is_model(reduct, candidate):
        return False
    for split in _splits(reduct, cap):
        least = _least_model_definite(split)
        if least < candidate and is_model(reduct, least):
            return False
    return True


def answer_sets(
    program: GroundProgram,
    max_disjunctions: int = MAX_DISJUNCTION_POINTS,
    guess_cap: int = GUESS_CHECK_ATOM_CAP,
) -> list[frozenset]:
    """All stable models, deterministically ordered.

    Every returned set is verified to satisfy the full program and to be
    reduct-minimal before it is reported.
    """
    rules = list(program.rules)
    stratum = _strata(rules, program.atoms)
    candidates: list[frozenset] = []
    if stratum is not None:
        seen = set()
        for split in _splits(rules, max_disjunctions):
            model = _split_fixpoint(split, stratum)
            if model not in seen:
                seen.add(model)
                candidates.append(model)
    else:
        if len(program.atoms) > guess_cap:
            raise UnsupportedProgramError(
                "negation-as-failure is not stratified and the atom universe "
                f"({len(program.atoms)}) exceeds the guess-and-check cap"
            )
        for bits in itertools.product((False, True), repeat=len(program.atoms)):
            subset = frozenset(
                a for a, keep in zip(sorted(program.atoms, key=_atom_key), bits)
                if keep
            )
            candidates.append(subset)

    stable = []
    for m in candidates:
        if is_model(rules, m) and is_stable(rules, m) and m not in stable:
            stable.append(m)
    # among stable models, none subsumes another; keep deterministic order
    stable.sort(key=lambda m: sorted(_atom_key(a) for a in m))
    return stable


def _atom_key(atom: Atom) -> str:
    return atom.render()


# -- query answering -------------------------------------------------------


def match_subsuming(query: Atom, stored: Atom, binding: dict) -> dict | None:
    """Unify a query atom against a stored atom with role subsumption.

    The stored structured term may carry more roles than the query asks
    for; the query may not ask for roles the fact lacks.
    """
    from .logic import ULRTerm, Variable  # local to avoid import cycle noise

    def match_value(pat, ground, b):
        if isinstance(pat, Variable):
            bound = b.get(pat.name)
            if bound is None:
                b = dict(b)
                b[pat.name] = ground
                return b
            return b if bound == ground else None
        if isinstance(pat, ULRTerm):
            if not isinstance(ground, ULRTerm) or pat.frame != ground.frame:
                return None
            gmap = ground.role_map()
            for rb in pat.bindings:
                if rb.role not in gmap:
                    return None
                b = match_value(rb.filler, gmap[rb.role], b)
                if b is None:
                    return None
            return b
        return b if pat == ground else None

    if query.predicate != stored.predicate or len(query.args) != len(stored.args):
        return None
    for pat, ground_arg in zip(query.args, stored.args):
        binding = match_value(pat, ground_arg, binding)
        if binding is None:
            return None
    return binding


def _bindings_in(model: frozenset, query: Atom) -> set:
    out = set()
    for atom in model:
        b = match_subsuming(query, atom, {})
        if b is not None:
            out.add(tuple(sorted(b.items())))
    return out


def query(models, q: Atom, mode: str = BRAVE) -> list[dict]:
    """Answers over precomputed answer sets, brave (union) or cautious
    (intersection); each answer is a variable binding map (empty for a
    ground query that holds)."""
    if mode not in {BRAVE, CAUTIOUS}:
        raise ValueError(f"unknown query mode {mode!r}")
    models = list(models)
    if not models:
        return []
    per_model = [_bindings_in(m, q) for m in models]
    if mode == BRAVE:
        merged = set().union(*per_model)
    else:
        merged = set.intersection(*per_model)
    return [
        dict(items)
        for items in sorted(merged, key=lambda kv: [(k, repr(v)) for k, v in kv])
    ]
