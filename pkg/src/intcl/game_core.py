"""The semantic universe: constant games, runs, legality, winners, interpretations.

Games are immutable values exposing legality of a move in a position and
the winner of a finite legal run.  Moves are dot-joined token paths:
numeric tokens select components or choices, bitstring tokens (``e`` for
the empty string) address nodes of a recurrence's underlying tree, a
trailing ``w:`` token replicates leaf w, and a final positive integer in a
constant-choice game picks a constant.

Negation is transparent for addressing: it flips labels, not paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import syntax as syn
from .syntax import (
    Atom,
    Bang,
    ChoiceAnd,
    ChoiceOr,
    Cobang,
    Dollar,
    ElemAtom,
    Formula,
    Neg,
    ParAnd,
    ParOr,
    WeakImp,
)

TOP = "T"
BOT = "B"


def flip(player: str) -> str:
    return BOT if player == TOP else TOP


Move = Tuple[str, ...]
LabMove = Tuple[str, Move]
Run = Tuple[LabMove, ...]


def move_str(m: Move) -> str:
    return ".".join(m)


def parse_move(s: str) -> Move:
    if not s:
        raise ValueError("empty move")
    return tuple(s.split("."))


def run_lines(run: Run) -> str:
    return "\n".join(f"{pl}:{move_str(m)}" for pl, m in run)


def parse_run(text: str) -> Run:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        pl, m = line.split(":", 1)
        out.append((pl, parse_move(m)))
    return tuple(out)


def negate_run(run: Run) -> Run:
    return tuple((flip(pl), m) for pl, m in run)


def _is_bits(tok: str) -> bool:
    return tok == "e" or (tok != "" and all(c in "01" for c in tok))


def _bits(tok: str) -> str:
    return "" if tok == "e" else tok


def bits_token(bits: str) -> str:
    return bits if bits else "e"


def _is_split(tok: str) -> bool:
    return tok.endswith(":") and _is_bits(tok[:-1] or "e")


def _is_index(tok: str) -> bool:
    return tok.isdigit()


class IllegalRunError(ValueError):
    def __init__(self, prefix: Run, offender: LabMove):
        super().__init__(
            f"illegal move {offender[0]}:{move_str(offender[1])} after "
            f"<{'; '.join(p + ':' + move_str(m) for p, m in prefix)}>"
        )
        self.prefix = prefix
        self.offender = offender


# ---------------------------------------------------------------------------
# Games


class Game:
    def is_legal(self, pos: Run, lm: LabMove) -> bool:
        raise NotImplementedError

    def winner(self, run: Run) -> str:
        """Winner of a finite legal run (legality assumed)."""
        raise NotImplementedError

    def moves(self, pos: Run, player: str, budget: "MoveBudget") -> List[Move]:
        raise NotImplementedError


@dataclass(frozen=True)
class Elem(Game):
    """Moveless elementary game, won by the machine iff true."""

    value: bool

    def is_legal(self, pos, lm):
        return False

    def winner(self, run):
        return TOP if self.value else BOT

    def moves(self, pos, player, budget):
        return []


@dataclass(frozen=True)
class NegG(Game):
    body: Game

    def is_legal(self, pos, lm):
        return self.body.is_legal(negate_run(pos), (flip(lm[0]), lm[1]))

    def winner(self, run):
        return flip(self.body.winner(negate_run(run)))

    def moves(self, pos, player, budget):
        return self.body.moves(negate_run(pos), flip(player), budget)


def _proj(pos: Run, tok: str) -> Run:
    return tuple((pl, m[1:]) for pl, m in pos if m and m[0] == tok)


class _ParG(Game):
    items: Tuple[Game, ...]

    def is_legal(self, pos, lm):
        pl, m = lm
        if len(m) < 2 or not _is_index(m[0]):
            return False
        i = int(m[0])
        if not 1 <= i <= len(self.items):
            return False
        return self.items[i - 1].is_legal(_proj(pos, m[0]), (pl, m[1:]))

    def _winners(self, run):
        return [g.winner(_proj(run, str(i + 1))) for i, g in enumerate(self.items)]

    def moves(self, pos, player, budget):
        out = []
        for i, g in enumerate(self.items, start=1):
            out.extend(
                (str(i),) + m for m in g.moves(_proj(pos, str(i)), player, budget)
            )
        return out


@dataclass(frozen=True)
class ParAndG(_ParG):
    items: Tuple[Game, ...]

    def winner(self, run):
        return TOP if all(w == TOP for w in self._winners(run)) else BOT


@dataclass(frozen=True)
class ParOrG(_ParG):
    items: Tuple[Game, ...]

    def winner(self, run):
        return TOP if any(w == TOP for w in self._winners(run)) else BOT


class _ChoiceG(Game):
    """First move: the chooser names a component; play continues inside it."""

    chooser = TOP
    empty_winner = BOT

    def _component(self, i: int) -> Optional[Game]:
        raise NotImplementedError

    def _indices(self, budget) -> Iterable[int]:
        raise NotImplementedError

    def is_legal(self, pos, lm):
        pl, m = lm
        if not pos:
            return (
                pl == self.chooser
                and len(m) == 1
                and _is_index(m[0])
                and self._component(int(m[0])) is not None
            )
        g = self._component(int(pos[0][1][0]))
        return g.is_legal(pos[1:], lm)

    def winner(self, run):
        if not run:
            return self.empty_winner
        return self._component(int(run[0][1][0])).winner(run[1:])

    def moves(self, pos, player, budget):
        if not pos:
            if player != self.chooser:
                return []
            return [(str(i),) for i in self._indices(budget)]
        return self._component(int(pos[0][1][0])).moves(pos[1:], player, budget)


@dataclass(frozen=True)
class ChoiceOrG(_ChoiceG):
    items: Tuple[Game, ...]
    chooser = TOP
    empty_winner = BOT  # failing to choose loses

    def _component(self, i):
        return self.items[i - 1] if 1 <= i <= len(self.items) else None

    def _indices(self, budget):
        return range(1, len(self.items) + 1)


@dataclass(frozen=True)
class ChoiceAndG(_ChoiceG):
    items: Tuple[Game, ...]
    chooser = BOT
    empty_winner = TOP

    def _component(self, i):
        return self.items[i - 1] if 1 <= i <= len(self.items) else None

    def _indices(self, budget):
        return range(1, len(self.items) + 1)


@dataclass(frozen=True)
class ConstChoice(Game):
    """⊔x A(x): the machine picks a constant; A is a finite truth table."""

    letter: str
    table: Tuple[Tuple[int, bool], ...]
    default: bool = False

    def truth(self, a: int) -> bool:
        for c, v in self.table:
            if c == a:
                return v
        return self.default

    def is_legal(self, pos, lm):
        pl, m = lm
        return (
            not pos
            and pl == TOP
            and len(m) == 1
            and _is_index(m[0])
            and int(m[0]) >= 1
        )

    def winner(self, run):
        if not run:
            return BOT
        return TOP if self.truth(int(run[0][1][0])) else BOT

    def moves(self, pos, player, budget):
        if pos or player != TOP:
            return []
        consts = sorted({c for c, _ in self.table} | set(range(1, budget.max_constant + 1)))
        return [(str(c),) for c in consts]


@dataclass(frozen=True)
class UniversalProblemG(_ChoiceG):
    """Standard universal problem: base ⊓ P1* ⊓ P2* ⊓ ... (token m picks P_m*,
    token 0 the base).  Failing to choose is a loss for the environment."""

    base: Game
    atoms: Tuple[Tuple[int, Game], ...]
    default: Optional[Game] = None
    chooser = BOT
    empty_winner = TOP

    def _component(self, i):
        if i == 0:
            return self.base
        for j, g in self.atoms:
            if j == i:
                return g
        return self.default

    def _indices(self, budget):
        known = {j for j, _ in self.atoms}
        hi = max(known | {budget.max_universe_index})
        out = [0] + sorted(known | set(range(1, hi + 1)))
        return dict.fromkeys(out)  # stable dedup


def tree_of(pos: Run) -> frozenset:
    """Nodes of the bitstring tree grown by the replicative moves of pos."""
    nodes = {""}
    for _, m in pos:
        if m and _is_split(m[0]):
            w = _bits(m[0][:-1] or "e")
            nodes.add(w + "0")
            nodes.add(w + "1")
    return frozenset(nodes)


def leaves_of(nodes: frozenset) -> List[str]:
    return sorted(
        (w for w in nodes if w + "0" not in nodes),
        key=lambda w: (len(w), w),
    )


def branch_project(pos: Run, w: str) -> Run:
    """Game moves made at nodes on the path to branch w, node token stripped."""
    out = []
    for pl, m in pos:
        if not m or _is_split(m[0]):
            continue
        v = _bits(m[0])
        if w.startswith(v):
            out.append((pl, m[1:]))
    return tuple(out)


class _RecurrenceG(Game):
    """Shared tree semantics of ! and ?; they differ in replicator and winner."""

    replicator = BOT

    def is_legal(self, pos, lm):
        pl, m = lm
        if not m:
            return False
        nodes = tree_of(pos)
        if _is_split(m[0]):
            if len(m) != 1 or pl != self.replicator:
                return False
            w = _bits(m[0][:-1] or "e")
            return w in nodes and w + "0" not in nodes
        if not _is_bits(m[0]):
            return False
        v = _bits(m[0])
        if v not in nodes:
            return False
        return all(
            self.body.is_legal(branch_project(pos, l), (pl, m[1:]))
            for l in leaves_of(nodes)
            if l.startswith(v)
        )

    def _branch_winners(self, run):
        nodes = tree_of(run)
        return [self.body.winner(branch_project(run, l)) for l in leaves_of(nodes)]

    def moves(self, pos, player, budget):
        nodes = tree_of(pos)
        out = []
        for l in leaves_of(nodes):
            for m in self.body.moves(branch_project(pos, l), player, budget):
                out.append((bits_token(l),) + m)
        if player == self.replicator and budget.allow_splits:
            for l in leaves_of(nodes):
                if len(l) < budget.max_tree_depth:
                    out.append((bits_token(l) + ":",))
        return out


@dataclass(frozen=True)
class BangG(_RecurrenceG):
    body: Game
    replicator = BOT

    def winner(self, run):
        return TOP if all(w == TOP for w in self._branch_winners(run)) else BOT


@dataclass(frozen=True)
class CobangG(_RecurrenceG):
    body: Game
    replicator = TOP

    def winner(self, run):
        return TOP if any(w == TOP for w in self._branch_winners(run)) else BOT


@dataclass(frozen=True)
class MoveBudget:
    max_constant: int = 3
    max_universe_index: int = 3
    allow_splits: bool = True
    max_tree_depth: int = 2


# ---------------------------------------------------------------------------
# Run utilities


def run_legal(g: Game, run: Run) -> Optional[Tuple[Run, LabMove]]:
    """None if legal; otherwise (prefix, offending labmove)."""
    for i, lm in enumerate(run):
        if not g.is_legal(run[:i], lm):
            return run[:i], lm
    return None


def winner(g: Game, run: Run) -> str:
    bad = run_legal(g, run)
    if bad is not None:
        raise IllegalRunError(*bad)
    return g.winner(run)


def project(run: Run, address: str) -> Run:
    """Subsequence of moves under a dot address, the address stripped."""
    out = run
    for tok in address.split(".") if address else []:
        out = _proj(out, tok)
    return out


def merge_runs(parts: Sequence[Tuple[str, Run]], order: Sequence[Tuple[int, int]]) -> Run:
    """Inverse of projection: interleave component runs by (part, index) order."""
    out = []
    for pi, mi in order:
        tok, sub = parts[pi]
        pl, m = sub[mi]
        out.append((pl, (tok,) + m))
    return tuple(out)


# ---------------------------------------------------------------------------
# Interpretations


@dataclass(frozen=True)
class PredTable:
    """Finite-support unary predicate: default truth outside the table."""

    entries: Tuple[Tuple[int, bool], ...] = ()
    default: bool = False

    def truth(self, a: int) -> bool:
        for c, v in self.entries:
            if c == a:
                return v
        return self.default


@dataclass(frozen=True)
class Interpretation:
    """Sends atoms to static games; $ goes to the standard universal problem
    over the canonical atom universe with the given base."""

    atoms: Tuple[Tuple[int, Game], ...] = ()
    base: Game = Elem(False)
    default_atom: Optional[Game] = None
    elem: Tuple[Tuple[str, PredTable], ...] = ()

    def atom_game(self, index: int) -> Game:
        for i, g in self.atoms:
            if i == index:
                return g
        if self.default_atom is not None:
            return self.default_atom
        raise KeyError(f"unbound atom P{index}")

    def dollar_game(self) -> Game:
        return UniversalProblemG(self.base, self.atoms, self.default_atom)

    def elem_game(self, name: str) -> Game:
        for n, t in self.elem:
            if n == name:
                return ConstChoice(name, t.entries, t.default)
        return ConstChoice(name, (), False)


def interpret(f: Formula, itp: Interpretation) -> Game:
    """Structural interpretation commuting with all connectives."""
    if isinstance(f, Atom):
        return itp.atom_game(f.index)
    if isinstance(f, Dollar):
        return itp.dollar_game()
    if isinstance(f, ElemAtom):
        return itp.elem_game(f.name)
    if isinstance(f, Neg):
        return NegG(interpret(f.body, itp))
    if isinstance(f, ChoiceAnd):
        return ChoiceAndG(tuple(interpret(it, itp) for it in f.items))
    if isinstance(f, ChoiceOr):
        return ChoiceOrG(tuple(interpret(it, itp) for it in f.items))
    if isinstance(f, ParAnd):
        return ParAndG(tuple(interpret(it, itp) for it in f.items))
    if isinstance(f, ParOr):
        return ParOrG(tuple(interpret(it, itp) for it in f.items))
    if isinstance(f, Bang):
        return BangG(interpret(f.body, itp))
    if isinstance(f, Cobang):
        return CobangG(interpret(f.body, itp))
    if isinstance(f, WeakImp):
        return interpret(syn.normalize_negation(syn.expand_weakimp(f)), itp)
    raise TypeError(f"not a formula: {f!r}")


def random_finite_game(rng, depth: int = 2, max_const: int = 3) -> Game:
    """Random finite game of bounded depth (for sampled interpretations)."""
    if depth == 0 or rng.random() < 0.35:
        return Elem(rng.random() < 0.5)
    kind = rng.randrange(5)
    if kind == 4:
        table = tuple(
            (c, rng.random() < 0.5) for c in range(1, rng.randint(1, max_const) + 1)
        )
        return ConstChoice("A", table, False)
    n = rng.randint(2, 3)
    items = tuple(random_finite_game(rng, depth - 1, max_const) for _ in range(n))
    return (ChoiceOrG, ChoiceAndG, ParAndG, ParOrG)[kind](items)


def sample_interpretation(rng, indices: Iterable[int], depth: int = 2) -> Interpretation:
    """Random finite interpretation over the given atom indices; $ becomes the
    standard universal problem over them."""
    atoms = tuple(sorted((i, random_finite_game(rng, depth)) for i in set(indices)))
    return Interpretation(
        atoms=atoms,
        base=random_finite_game(rng, depth),
        default_atom=Elem(rng.random() < 0.5),
    )
