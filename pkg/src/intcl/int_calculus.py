"""The Int sequent calculus: proof objects, checking, and a decision procedure.

Proof search works backward over antecedents-as-sets (Exchange, Weakening
and Contraction absorbed) with a visited store for loop detection; success
plans are replayed into strict proofs that re-insert the structural rules,
so every emitted proof validates against the exact rule schemata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .syntax import (
    Atom,
    ChoiceAnd,
    ChoiceOr,
    DOLLAR,
    Dollar,
    Formula,
    IntSequent,
    WeakImp,
    is_int_formula,
    show,
)


# ---------------------------------------------------------------------------
# Rules and proofs


@dataclass(frozen=True)
class Axiom:
    pass


@dataclass(frozen=True)
class Exchange:
    pos: int  # conclusion antecedent positions pos, pos+1 are the swapped pair


@dataclass(frozen=True)
class Weakening:
    pass


@dataclass(frozen=True)
class Contraction:
    pass


@dataclass(frozen=True)
class LeftWeakImp:
    split: int  # length of the G part of the conclusion antecedent


@dataclass(frozen=True)
class RightWeakImp:
    pass


@dataclass(frozen=True)
class LeftChoiceOr:
    pass


@dataclass(frozen=True)
class RightChoiceOr:
    i: int


@dataclass(frozen=True)
class LeftChoiceAnd:
    i: int


@dataclass(frozen=True)
class RightChoiceAnd:
    pass


IntRule = object


@dataclass(frozen=True)
class IntProof:
    conclusion: IntSequent
    rule: IntRule
    premises: Tuple["IntProof", ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def to_json(self) -> dict:
        r = self.rule
        name = type(r).__name__
        params = {k: getattr(r, k) for k in getattr(r, "__dataclass_fields__", {})}
        return {
            "rule": name,
            **({"params": params} if params else {}),
            "conclusion": show(self.conclusion),
            "premises": [p.to_json() for p in self.premises],
        }

    def render(self, indent: int = 0) -> str:
        head = "  " * indent + f"{show(self.conclusion)}   [{type(self.rule).__name__}]"
        return "\n".join([head] + [p.render(indent + 1) for p in self.premises])


@dataclass(frozen=True)
class Verdict:
    ok: bool
    path: Tuple[int, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _bad(path, msg) -> Verdict:
    return Verdict(False, tuple(path), msg)


def check_int_proof(p: IntProof) -> Verdict:
    """Accept iff every node instantiates its rule schema exactly."""

    def rec(node: IntProof, path: List[int]) -> Verdict:
        c = node.conclusion
        if not all(is_int_formula(g) for g in c.antecedent) or not is_int_formula(
            c.succedent
        ):
            return _bad(path, "conclusion is not an Int-sequent")
        r = node.rule
        prem = node.premises
        ant, suc = c.antecedent, c.succedent

        def arity(n):
            return len(prem) == n or _bad(path, f"rule needs {n} premises")

        if isinstance(r, Axiom):
            if prem:
                return _bad(path, "axiom has no premises")
            if ant == (suc,) or ant == (DOLLAR,):
                return Verdict(True)
            return _bad(path, "not an instance of K => K or $ => K")
        if isinstance(r, Exchange):
            if (v := arity(1)) is not True:
                return v
            i = r.pos
            pa = prem[0].conclusion.antecedent
            if (
                0 <= i < len(ant) - 1
                and len(pa) == len(ant)
                and pa[:i] == ant[:i]
                and pa[i] == ant[i + 1]
                and pa[i + 1] == ant[i]
                and pa[i + 2 :] == ant[i + 2 :]
                and prem[0].conclusion.succedent == suc
            ):
                return rec(prem[0], path + [0])
            return _bad(path, "Exchange schema mismatch")
        if isinstance(r, Weakening):
            if (v := arity(1)) is not True:
                return v
            if ant and prem[0].conclusion == IntSequent(ant[:-1], suc):
                return rec(prem[0], path + [0])
            return _bad(path, "Weakening schema mismatch")
        if isinstance(r, Contraction):
            if (v := arity(1)) is not True:
                return v
            if ant and prem[0].conclusion == IntSequent(ant + (ant[-1],), suc):
                return rec(prem[0], path + [0])
            return _bad(path, "Contraction schema mismatch")
        if isinstance(r, RightWeakImp):
            if (v := arity(1)) is not True:
                return v
            if isinstance(suc, WeakImp) and prem[0].conclusion == IntSequent(
                ant + (suc.left,), suc.right
            ):
                return rec(prem[0], path + [0])
            return _bad(path, "Right o- schema mismatch")
        if isinstance(r, LeftWeakImp):
            if (v := arity(2)) is not True:
                return v
            if not ant or not isinstance(ant[-1], WeakImp):
                return _bad(path, "Left o- principal must end the antecedent")
            d = ant[-1]  # K2 o- E
            g, h = ant[: r.split], ant[r.split : -1]
            p1, p2 = prem[0].conclusion, prem[1].conclusion
            if (
                p1 == IntSequent(g + (d.right,), suc)
                and p2 == IntSequent(h, d.left)
            ):
                v1 = rec(prem[0], path + [0])
                return v1 if not v1 else rec(prem[1], path + [1])
            return _bad(path, "Left o- schema mismatch")
        if isinstance(r, LeftChoiceOr):
            if (v := arity(2)) is not True:
                return v
            if not ant or not isinstance(ant[-1], ChoiceOr) or len(ant[-1].items) != 2:
                return _bad(path, "Left | principal must be a binary | at the end")
            e1, e2 = ant[-1].items
            if prem[0].conclusion == IntSequent(ant[:-1] + (e1,), suc) and prem[
                1
            ].conclusion == IntSequent(ant[:-1] + (e2,), suc):
                v1 = rec(prem[0], path + [0])
                return v1 if not v1 else rec(prem[1], path + [1])
            return _bad(path, "Left | schema mismatch")
        if isinstance(r, RightChoiceOr):
            if (v := arity(1)) is not True:
                return v
            if (
                isinstance(suc, ChoiceOr)
                and len(suc.items) == 2
                and r.i in (1, 2)
                and prem[0].conclusion == IntSequent(ant, suc.items[r.i - 1])
            ):
                return rec(prem[0], path + [0])
            return _bad(path, "Right | schema mismatch (K_i)")
        if isinstance(r, LeftChoiceAnd):
            if (v := arity(1)) is not True:
                return v
            if (
                ant
                and isinstance(ant[-1], ChoiceAnd)
                and len(ant[-1].items) == 2
                and r.i in (1, 2)
                and prem[0].conclusion
                == IntSequent(ant[:-1] + (ant[-1].items[r.i - 1],), suc)
            ):
                return rec(prem[0], path + [0])
            return _bad(path, "Left & schema mismatch")
        if isinstance(r, RightChoiceAnd):
            if (v := arity(2)) is not True:
                return v
            if (
                isinstance(suc, ChoiceAnd)
                and len(suc.items) == 2
                and prem[0].conclusion == IntSequent(ant, suc.items[0])
                and prem[1].conclusion == IntSequent(ant, suc.items[1])
            ):
                v1 = rec(prem[0], path + [0])
                return v1 if not v1 else rec(prem[1], path + [1])
            return _bad(path, "Right & schema mismatch")
        return _bad(path, f"unknown rule {r!r}")

    return rec(p, [])


# ---------------------------------------------------------------------------
# Decision procedure


class SearchLimitError(RuntimeError):
    pass


_key = show  # total order on formulas via the canonical printed form


def _sorted(fs) -> Tuple[Formula, ...]:
    return tuple(sorted(fs, key=_key))


@dataclass
class _Plan:
    kind: str
    data: object = None
    children: Tuple["_Plan", ...] = ()
    goal: Tuple[FrozenSet[Formula], Formula] = None


class _Prover:
    """Tabled backward search over (antecedent set, succedent) states."""

    def __init__(self, store_limit: int = 2_000_000):
        self.memo: Dict[Tuple[FrozenSet, Formula], Optional[_Plan]] = {}
        self.store_limit = store_limit

    def prove(self, a: FrozenSet[Formula], k: Formula, stack: frozenset) -> Tuple[Optional[_Plan], bool]:
        """Return (plan or None, clean). `clean` means the failure did not
        lean on an in-progress assumption and may be cached."""
        key = (a, k)
        if key in self.memo:
            return self.memo[key], True
        if key in stack:
            return None, False
        if len(self.memo) > self.store_limit:
            raise SearchLimitError("sequent store bound exceeded")
        stack = stack | {key}

        def done(plan: _Plan) -> Tuple[_Plan, bool]:
            plan.goal = key
            self.memo[key] = plan
            return plan, True

        # axioms (modulo structural rules)
        if k in a:
            return done(_Plan("ax-id"))
        if DOLLAR in a:
            return done(_Plan("ax-dollar"))

        # invertible succedent rules
        if isinstance(k, WeakImp):
            sub, clean = self.prove(a | {k.left}, k.right, stack)
            if sub:
                return done(_Plan("rimp", None, (sub,)))
            if clean:
                self.memo[key] = None
            return None, clean
        if isinstance(k, ChoiceAnd):
            sub1, c1 = self.prove(a, k.items[0], stack)
            if not sub1:
                if c1:
                    self.memo[key] = None
                return None, c1
            sub2, c2 = self.prove(a, k.items[1], stack)
            if sub2:
                return done(_Plan("rand", None, (sub1, sub2)))
            if c2:
                self.memo[key] = None
            return None, c2

        # invertible antecedent rules (saturating)
        for d in sorted(a, key=_key):
            if isinstance(d, ChoiceOr):
                e1, e2 = d.items
                rest = a - {d}
                if e1 not in rest or e2 not in rest:
                    sub1, c1 = self.prove(rest | {e1}, k, stack)
                    if not sub1:
                        if c1:
                            self.memo[key] = None
                        return None, c1
                    sub2, c2 = self.prove(rest | {e2}, k, stack)
                    if sub2:
                        return done(_Plan("lor", d, (sub1, sub2)))
                    if c2:
                        self.memo[key] = None
                    return None, c2
            if isinstance(d, ChoiceAnd):
                e1, e2 = d.items
                if e1 not in a or e2 not in a:
                    sub, clean = self.prove((a - {d}) | {e1, e2}, k, stack)
                    if sub:
                        return done(_Plan("land", d, (sub,)))
                    if clean:
                        self.memo[key] = None
                    return None, clean

        clean_overall = True
        # succedent choice
        if isinstance(k, ChoiceOr):
            for i in (1, 2):
                sub, clean = self.prove(a, k.items[i - 1], stack)
                clean_overall &= clean
                if sub:
                    return done(_Plan("ror", i, (sub,)))
        # Left o- firings: gain d.right by proving d.left
        for d in sorted(a, key=_key):
            if isinstance(d, WeakImp) and d.right not in a:
                sub2, c2 = self.prove(a, d.left, stack)
                clean_overall &= c2
                if not sub2:
                    continue
                sub1, c1 = self.prove(a | {d.right}, k, stack)
                clean_overall &= c1
                if sub1:
                    return done(_Plan("limp", d, (sub1, sub2)))
        if clean_overall:
            self.memo[key] = None
        return None, clean_overall


def decide_int(s, store_limit: int = 2_000_000) -> bool:
    """Provability only (no proof object); shares logic with prove_int."""
    seq = s if isinstance(s, IntSequent) else IntSequent((), s)
    pr = _Prover(store_limit)
    plan, _ = pr.prove(frozenset(seq.antecedent), seq.succedent, frozenset())
    return plan is not None


# ---------------------------------------------------------------------------
# Strict proof reconstruction


def _adapt(proof: IntProof, target: Tuple[Formula, ...]) -> IntProof:
    """From a proof of L => S derive target => S, where every formula of L
    occurs in target (weakening appends, exchanges permute)."""
    cur = list(proof.conclusion.antecedent)
    suc = proof.conclusion.succedent
    need = list(target)
    missing = list(need)
    for g in cur:
        missing.remove(g)  # raises if L is not covered: construction bug
    for g in missing:
        cur.append(g)
        proof = IntProof(IntSequent(tuple(cur), suc), Weakening(), (proof,))
    # bubble into the exact target order
    for i in range(len(need)):
        if cur[i] == need[i]:
            continue
        j = next(j for j in range(i + 1, len(cur)) if cur[j] == need[i])
        while j > i:
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            proof = IntProof(IntSequent(tuple(cur), suc), Exchange(j - 1), (proof,))
            j -= 1
    return proof


def _to_pos(proof: IntProof, g: Formula, pos: int) -> IntProof:
    """Exchange the rightmost occurrence of g at or before `pos` to `pos`."""
    cur = list(proof.conclusion.antecedent)
    suc = proof.conclusion.succedent
    j = pos - cur[:pos + 1][::-1].index(g)
    while j < pos:
        cur[j], cur[j + 1] = cur[j + 1], cur[j]
        proof = IntProof(IntSequent(tuple(cur), suc), Exchange(j), (proof,))
        j += 1
    return proof


def _to_end(proof: IntProof, g: Formula) -> IntProof:
    return _to_pos(proof, g, len(proof.conclusion.antecedent) - 1)


def _emit(plan: _Plan) -> IntProof:
    """Replay a search plan into a strict proof of sorted(A) => K."""
    a, k = plan.goal
    target = _sorted(a)
    kind = plan.kind
    if kind == "ax-id":
        return _adapt(IntProof(IntSequent((k,), k), Axiom()), target)
    if kind == "ax-dollar":
        return _adapt(IntProof(IntSequent((DOLLAR,), k), Axiom()), target)
    if kind == "rimp":
        sub = _to_end(_emit(plan.children[0]), k.left)
        g = sub.conclusion.antecedent[:-1]
        proof = IntProof(IntSequent(g, k), RightWeakImp(), (sub,))
        return _adapt(proof, target)
    if kind == "rand":
        s1 = _adapt(_emit(plan.children[0]), target)
        s2 = _adapt(_emit(plan.children[1]), target)
        return IntProof(IntSequent(target, k), RightChoiceAnd(), (s1, s2))
    if kind == "ror":
        sub = _adapt(_emit(plan.children[0]), target)
        return IntProof(IntSequent(target, k), RightChoiceOr(plan.data), (sub,))
    if kind == "lor":
        d = plan.data
        e1, e2 = d.items
        ga, _ = plan.children[0].goal
        gb, _ = plan.children[1].goal
        common = _sorted((ga - {e1}) | (gb - {e2}))
        s1 = _adapt(_emit(plan.children[0]), common + (e1,))
        s2 = _adapt(_emit(plan.children[1]), common + (e2,))
        proof = IntProof(IntSequent(common + (d,), k), LeftChoiceOr(), (s1, s2))
        return _adapt(proof, target)
    if kind == "land":
        d = plan.data
        e1, e2 = d.items
        sub = _emit(plan.children[0])
        base = _sorted(set(sub.conclusion.antecedent) - {e1, e2})
        sub = _adapt(sub, base + (e2, e1))
        proof = IntProof(IntSequent(base + (e2, d), k), LeftChoiceAnd(1), (sub,))
        proof = _to_end(proof, e2)
        proof = IntProof(
            IntSequent(base + (d, d), k), LeftChoiceAnd(2), (proof,)
        )
        proof = IntProof(IntSequent(base + (d,), k), Contraction(), (proof,))
        return _adapt(proof, target)
    if kind == "limp":
        d = plan.data  # K2 o- E, premises (A+{E} => K) and (A => K2)
        ga, _ = plan.children[0].goal
        g_part = _sorted(ga - {d.right})
        s1 = _adapt(_emit(plan.children[0]), g_part + (d.right,))
        gb, _ = plan.children[1].goal
        h_part = _sorted(gb)
        s2 = _adapt(_emit(plan.children[1]), h_part)
        concl = g_part + h_part + (d,)
        proof = IntProof(IntSequent(concl, k), LeftWeakImp(len(g_part)), (s1, s2))
        # contract the duplicated context down to the plain set
        want = _sorted(set(concl))
        while len(proof.conclusion.antecedent) > len(want):
            cur = proof.conclusion.antecedent
            dup = next(g for g in cur if cur.count(g) > 1)
            proof = _to_end(proof, dup)
            proof = _to_pos(proof, dup, len(cur) - 2)
            proof = IntProof(
                IntSequent(proof.conclusion.antecedent[:-1], k),
                Contraction(),
                (proof,),
            )
        return _adapt(proof, target)
    raise AssertionError(f"unknown plan kind {kind}")


@dataclass(frozen=True)
class FailureWitness:
    """Definitive failure: the search space was exhausted."""

    sequent: IntSequent


def prove_int(s, store_limit: int = 2_000_000):
    """Decide the sequent; return a checkable IntProof or a FailureWitness."""
    seq = s if isinstance(s, IntSequent) else IntSequent((), s)
    if not all(is_int_formula(g) for g in seq.antecedent) or not is_int_formula(
        seq.succedent
    ):
        raise ValueError("prove_int expects an Int-sequent")
    pr = _Prover(store_limit)
    plan, _ = pr.prove(frozenset(seq.antecedent), seq.succedent, frozenset())
    if plan is None:
        return FailureWitness(seq)
    proof = _emit(plan)
    return _adapt(proof, seq.antecedent)
