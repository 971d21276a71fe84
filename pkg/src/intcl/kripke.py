"""Finite Kripke tree models: forcing, sequent evaluation, countermodel search.

Worlds are 1..n with 1 the root; the accessibility relation is the
reflexive-transitive ancestor relation of the tree.  Countermodel search
enumerates *reduced* canonical tree models (no duplicate sibling subtrees,
no only-child carrying its parent's valuation) in a fixed order, smallest
size first; any refutable sequent refutable within the bound is refuted by
a reduced model of the same minimal size, so the search is complete and the
returned model is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, Optional, Tuple

from .syntax import (
    Atom,
    ChoiceAnd,
    ChoiceOr,
    Dollar,
    Formula,
    IntSequent,
    WeakImp,
    atoms_of,
)


@dataclass(frozen=True)
class KripkeModel:
    """parents[i] is the parent of world i+2; world 1 is the root."""

    parents: Tuple[int, ...]
    forcing: FrozenSet[Tuple[int, int]]  # (world, atom index)

    def __post_init__(self):
        n = self.size
        for w, p in enumerate(self.parents, start=2):
            if not 1 <= p < w:
                raise ValueError(f"parent of world {w} must be an earlier world")
        for w, a in self.forcing:
            if not 1 <= w <= n:
                raise ValueError(f"forcing names world {w} outside 1..{n}")
        # monotonicity: forced atoms persist in every accessible world
        for w, a in self.forcing:
            for q in range(2, n + 1):
                if self._accessible(w, q) and (q, a) not in self.forcing:
                    raise ValueError(f"forcing not monotone: P{a} at {w} but not {q}")

    @property
    def size(self) -> int:
        return len(self.parents) + 1

    def parent(self, w: int) -> int:
        return self.parents[w - 2]

    def _accessible(self, p: int, q: int) -> bool:
        while q > p:
            q = self.parent(q)
        return q == p

    def accessible(self, p: int, q: int) -> bool:
        """True iff q is accessible from p (p R q)."""
        return self._accessible(p, q)

    def cone(self, p: int) -> Tuple[int, ...]:
        """All worlds accessible from p, ascending."""
        return tuple(q for q in range(1, self.size + 1) if self._accessible(p, q))

    def to_json(self) -> dict:
        return {
            "n": self.size,
            "parent": [0] + list(self.parents),
            "forcing": sorted([w, f"P{a}"] for w, a in self.forcing),
        }

    @staticmethod
    def from_json(d: dict) -> "KripkeModel":
        parents = tuple(d["parent"][1:])
        forcing = frozenset((w, int(a[1:])) for w, a in d["forcing"])
        return KripkeModel(parents, forcing)

    def dump(self) -> str:
        lines = []

        def rec(w, depth):
            atoms = ",".join(f"P{a}" for q, a in sorted(self.forcing) if q == w)
            lines.append("  " * depth + f"{w}" + (f" [{atoms}]" if atoms else ""))
            for c in range(2, self.size + 1):
                if self.parent(c) == w:
                    rec(c, depth + 1)

        rec(1, 0)
        return "\n".join(lines)


def forces(m: KripkeModel, p: int, f: Formula, _cache: Optional[dict] = None) -> bool:
    """The forcing clauses, computed literally."""
    if _cache is None:
        _cache = {}
    key = (p, f)
    if key in _cache:
        return _cache[key]
    if isinstance(f, Atom):
        v = (p, f.index) in m.forcing
    elif isinstance(f, Dollar):
        v = False
    elif isinstance(f, ChoiceOr):
        v = any(forces(m, p, it, _cache) for it in f.items)
    elif isinstance(f, ChoiceAnd):
        v = all(forces(m, p, it, _cache) for it in f.items)
    elif isinstance(f, WeakImp):
        v = all(
            forces(m, q, f.right, _cache)
            for q in m.cone(p)
            if forces(m, q, f.left, _cache)
        )
    else:
        raise TypeError(f"not an Int-formula: {f!r}")
    _cache[key] = v
    return v


def forces_sequent(m: KripkeModel, p: int, s: IntSequent, _cache=None) -> bool:
    if _cache is None:
        _cache = {}
    return all(
        forces(m, q, s.succedent, _cache)
        for q in m.cone(p)
        if all(forces(m, q, g, _cache) for g in s.antecedent)
    )


def equivalent(m: KripkeModel, e: Formula, f: Formula) -> bool:
    """True iff every world forces e exactly when it forces f."""
    cache: dict = {}
    return all(
        forces(m, p, e, cache) == forces(m, p, f, cache) for p in range(1, m.size + 1)
    )


# ---------------------------------------------------------------------------
# Countermodel search over reduced canonical trees
#
# A canon is (val, children) with val a sorted tuple of atom indices and
# children a tuple of canons sorted by the canonical order, pairwise
# distinct, each child's valuation a superset of val, and never a single
# child with exactly the parent's valuation.


class _Canon:
    __slots__ = ("val", "children", "size", "key")

    def __init__(self, val: Tuple[int, ...], children: Tuple["_Canon", ...]):
        self.val = val
        self.children = children
        self.size = 1 + sum(c.size for c in children)
        self.key = (self.size, val, tuple(c.key for c in children))

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return self.key == other.key

    def __lt__(self, other):
        return self.key < other.key


@lru_cache(maxsize=None)
def _upsets(vals: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    """All subsets of the atom list, as sorted tuples, in lex order."""
    out = []
    for r in range(len(vals) + 1):
        for combo in itertools.combinations(vals, r):
            out.append(tuple(sorted(combo)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _canons(atoms: Tuple[int, ...], size: int) -> Tuple[_Canon, ...]:
    """All reduced canons of exactly `size` worlds over the given atoms."""
    if size == 1:
        return tuple(_Canon(v, ()) for v in _upsets(atoms))
    out = []
    for val in _upsets(atoms):
        pool = [
            c
            for s in range(1, size)
            for c in _canons(atoms, s)
            if set(val) <= set(c.val)
        ]
        pool.sort(key=lambda c: c.key)

        def pick(start: int, left: int, chosen):
            if left == 0:
                if len(chosen) == 1 and chosen[0].val == val:
                    return  # only child with the parent's valuation: reducible
                out.append(_Canon(val, tuple(chosen)))
                return
            for i in range(start, len(pool)):
                c = pool[i]
                if c.size > left:
                    continue
                pick(i + 1, left - c.size, chosen + [c])

        pick(0, size - 1, [])
    out.sort(key=lambda c: c.key)
    return tuple(out)


_FORCE_CACHE: Dict[Tuple[_Canon, Formula], bool] = {}


def _subtrees(c: _Canon) -> Iterator[_Canon]:
    yield c
    for ch in c.children:
        yield from _subtrees(ch)


def _canon_forces(c: _Canon, f: Formula) -> bool:
    key = (c, f)
    v = _FORCE_CACHE.get(key)
    if v is not None:
        return v
    if isinstance(f, Atom):
        v = f.index in c.val
    elif isinstance(f, Dollar):
        v = False
    elif isinstance(f, ChoiceOr):
        v = any(_canon_forces(c, it) for it in f.items)
    elif isinstance(f, ChoiceAnd):
        v = all(_canon_forces(c, it) for it in f.items)
    elif isinstance(f, WeakImp):
        v = all(
            _canon_forces(s, f.right)
            for s in _subtrees(c)
            if _canon_forces(s, f.left)
        )
    else:
        raise TypeError(f"not an Int-formula: {f!r}")
    _FORCE_CACHE[key] = v
    return v


def _canon_forces_sequent(c: _Canon, s: IntSequent) -> bool:
    return all(
        _canon_forces(sub, s.succedent)
        for sub in _subtrees(c)
        if all(_canon_forces(sub, g) for g in s.antecedent)
    )


def _canon_to_model(c: _Canon) -> KripkeModel:
    parents = []
    forcing = []

    def rec(node: _Canon, parent_num: int) -> None:
        num = len(parents) + 1 if parent_num == 0 else None
        if parent_num == 0:
            my = 1
        else:
            parents.append(parent_num)
            my = len(parents) + 1
        for a in node.val:
            forcing.append((my, a))
        for ch in node.children:
            rec(ch, my)

    rec(c, 0)
    return KripkeModel(tuple(parents), frozenset(forcing))


def _as_sequent(s) -> IntSequent:
    return s if isinstance(s, IntSequent) else IntSequent((), s)


def countermodel(s, max_size: int) -> Optional[KripkeModel]:
    """Smallest (then canonically least) reduced tree model whose root does
    not force the sequent, or None if there is none within the bound."""
    seq = _as_sequent(s)
    atoms = tuple(sorted(a.index for a in atoms_of(seq)))
    for n in range(1, max_size + 1):
        for c in _canons(atoms, n):
            if not _canon_forces_sequent(c, seq):
                return _canon_to_model(c)
    return None


def countermodels_upto(s, max_size: int) -> Iterator[KripkeModel]:
    """All reduced countermodels within the bound, smallest first."""
    seq = _as_sequent(s)
    atoms = tuple(sorted(a.index for a in atoms_of(seq)))
    for n in range(1, max_size + 1):
        for c in _canons(atoms, n):
            if not _canon_forces_sequent(c, seq):
                yield _canon_to_model(c)


def refutable(s, max_size: int) -> bool:
    seq = _as_sequent(s)
    atoms = tuple(sorted(a.index for a in atoms_of(seq)))
    return any(
        not _canon_forces_sequent(c, seq)
        for n in range(1, max_size + 1)
        for c in _canons(atoms, n)
    )
