"""Strategies, the machine-vs-machine arena, copy-cat, and the composition
combinators (modus-ponens composition, recurrence lift, replacement).

A strategy is a deterministic state machine: it is fed every labmove of the
evolving run through ``observe`` and asked for at most one move per
activation through ``step`` (returning None passes; for an EPM a pass is a
permission grant).  The arena realizes the scheduling contract in which the
bottom (EPM) player runs freely and the top player is woken exactly once
per permission grant.  An illegal move ends the session with an immediate
win for the opponent.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .game_core import (
    BOT,
    Game,
    LabMove,
    Move,
    MoveBudget,
    Run,
    TOP,
    bits_token,
    flip,
    move_str,
    _bits,
    _is_split,
)


class Strategy:
    """Deterministic strategy program; EPM unless declared otherwise."""

    discipline = "EPM"

    def observe(self, lm: LabMove) -> None:
        """Called for every move appended to the run (own moves included)."""

    def step(self) -> Optional[Move]:
        """One activation; at most one move, None to pass."""
        return None

    def fork(self) -> "Strategy":
        return copy.deepcopy(self)


class Passive(Strategy):
    """Always passes (an EPM this is an infinite permission loop)."""


@dataclass
class Scripted(Strategy):
    """Plays a fixed move list in order, then passes forever."""

    moves: List[Move]
    _at: int = 0

    def step(self):
        if self._at < len(self.moves):
            m = self.moves[self._at]
            self._at += 1
            return tuple(m)
        return None


class RandomLegal(Strategy):
    """Samples uniformly among legal moves (or passes), seeded, clean."""

    def __init__(self, game: Game, color: str, seed: int, move_budget: int = 12,
                 pass_prob: float = 0.35, budget: MoveBudget = MoveBudget()):
        import random

        self.game = game
        self.color = color
        self.rng = random.Random(seed)
        self.left = move_budget
        self.pass_prob = pass_prob
        self.budget = budget
        self.pos: List[LabMove] = []

    def observe(self, lm):
        self.pos.append(lm)

    def step(self):
        if self.left <= 0 or self.rng.random() < self.pass_prob:
            return None
        menu = self.game.moves(tuple(self.pos), self.color, self.budget)
        if not menu:
            return None
        self.left -= 1
        return menu[self.rng.randrange(len(menu))]


@dataclass
class ArenaResult:
    run: Run
    steps_used: int
    quiesced: bool
    permission_count: int
    illegal_by: Optional[str] = None  # player who moved illegally, if any

    def verdict(self, game: Game) -> str:
        """Winner of the session: clean-environment rule, else run evaluation."""
        if self.illegal_by is not None:
            return flip(self.illegal_by)
        return game.winner(self.run)

    def to_json(self) -> dict:
        return {
            "run": [f"{pl}:{move_str(m)}" for pl, m in self.run],
            "steps": self.steps_used,
            "quiesced": self.quiesced,
            "permissions": self.permission_count,
            "illegal_by": self.illegal_by,
        }


def arena_run(top: Strategy, bottom: Strategy, game: Game, budget: int = 10_000) -> ArenaResult:
    """Deterministic co-simulation: bottom (EPM) runs; each pass grants
    permission and wakes top for one step.  Ends at quiescence (both pass
    consecutively) or budget exhaustion."""
    if bottom.discipline != "EPM":
        raise ValueError("bottom strategy must declare the EPM discipline")
    run: List[LabMove] = []
    steps = 0
    permissions = 0

    def play(player: str, m: Move, mover: Strategy, other: Strategy) -> Optional[str]:
        if not game.is_legal(tuple(run), (player, m)):
            return player
        run.append((player, m))
        mover.observe((player, m))
        other.observe((player, m))
        return None

    while steps < budget:
        m = bottom.step()
        steps += 1
        if m is not None:
            bad = play(BOT, m, bottom, top)
            if bad:
                return ArenaResult(tuple(run), steps, False, permissions, bad)
            continue
        permissions += 1
        if steps >= budget:
            break
        t = top.step()
        steps += 1
        if t is not None:
            bad = play(TOP, t, top, bottom)
            if bad:
                return ArenaResult(tuple(run), steps, False, permissions, bad)
            continue
        return ArenaResult(tuple(run), steps, True, permissions)
    return ArenaResult(tuple(run), steps, False, permissions)


# ---------------------------------------------------------------------------
# Copy-cat


class Mirror(Strategy):
    """Copy-cat between two address prefixes: answers an adversary move
    left+α with right+α and vice versa; never initiates."""

    def __init__(self, color: str = TOP, left: Move = ("1",), right: Move = ("2",)):
        self.color = color
        self.left = tuple(left)
        self.right = tuple(right)
        self.queue: List[Move] = []

    def observe(self, lm):
        pl, m = lm
        if pl == self.color:
            return
        if m[: len(self.left)] == self.left:
            self.queue.append(self.right + m[len(self.left):])
        elif m[: len(self.right)] == self.right:
            self.queue.append(self.left + m[len(self.right):])

    def step(self):
        if self.queue:
            return self.queue.pop(0)
        return None


def ccs() -> Strategy:
    """The copy-cat strategy for games of shape A -> A."""
    return Mirror(TOP, ("1",), ("2",))


# ---------------------------------------------------------------------------
# Routing network: strategies glued along linked address spaces


@dataclass
class Port:
    prefix: Move            # prefix in the part's own address space
    kind: str               # "ext" or "link"
    ext_prefix: Move = ()   # prefix in the composite's address space
    peer: int = -1          # linked part
    peer_prefix: Move = ()  # prefix in the peer's address space


class Router(Strategy):
    """Runs sub-strategies; moves under linked prefixes are delivered to the
    peer as adversary traffic, external prefixes surface.  Internal traffic
    is drained within one activation, so a pass means global quiescence."""

    MAX_INTERNAL = 100_000

    def __init__(self, parts: Sequence[Tuple[Strategy, Sequence[Port]]]):
        self.parts = [p for p, _ in parts]
        self.ports = [list(ps) for _, ps in parts]
        self.out: List[Move] = []

    def _route_out(self, idx: int, m: Move) -> None:
        for port in self.ports[idx]:
            if m[: len(port.prefix)] == tuple(port.prefix):
                suffix = m[len(port.prefix):]
                if port.kind == "ext":
                    self.out.append(tuple(port.ext_prefix) + suffix)
                else:
                    peer_m = tuple(port.peer_prefix) + suffix
                    self.parts[port.peer].observe((BOT, peer_m))
                return
        raise RuntimeError(f"unrouted internal move {move_str(m)}")

    def observe(self, lm):
        pl, m = lm
        if pl == TOP:
            return  # own surfaced moves were routed at emission time
        for idx, ports in enumerate(self.ports):
            for port in ports:
                if port.kind == "ext" and m[: len(port.ext_prefix)] == tuple(port.ext_prefix):
                    own = tuple(port.prefix) + m[len(port.ext_prefix):]
                    self.parts[idx].observe((BOT, own))
                    return
        raise RuntimeError(f"unrouted external move {move_str(m)}")

    def step(self):
        if self.out:
            return self.out.pop(0)
        for _ in range(self.MAX_INTERNAL):
            progressed = False
            for idx, part in enumerate(self.parts):
                m = part.step()
                if m is not None:
                    part.observe((TOP, m))
                    self._route_out(idx, m)
                    progressed = True
                    if self.out:
                        return self.out.pop(0)
            if not progressed:
                return None
        raise RuntimeError("internal routing did not quiesce")


def compose_mp(e_a: Strategy, e_ab: Strategy) -> Strategy:
    """Fact 3.2's f: from strategies for A and A->B, a strategy for B.
    e_a is simulated against e_ab's antecedent; consequent traffic surfaces."""
    return Router(
        [
            (e_a, [Port((), "link", peer=1, peer_prefix=("1",))]),
            (
                e_ab,
                [
                    Port(("1",), "link", peer=0, peer_prefix=()),
                    Port(("2",), "ext", ext_prefix=()),
                ],
            ),
        ]
    )


# ---------------------------------------------------------------------------
# Recurrence lift


class BangLift(Strategy):
    """Fact 3.3's h: from a strategy for A, a strategy for !A.  One forked
    copy of the base strategy runs per branch of the evolving tree; forking
    duplicates the deterministic machine state (equivalent to replaying the
    shared prefix)."""

    def __init__(self, base: Strategy):
        self.instances: Dict[str, Strategy] = {"": base}
        self.order: List[str] = [""]

    def observe(self, lm):
        pl, m = lm
        if pl == TOP:
            return
        if _is_split(m[0]):
            w = _bits(m[0][:-1] or "e")
            inst = self.instances.pop(w)
            self.order.remove(w)
            self.instances[w + "0"] = inst
            self.instances[w + "1"] = inst.fork()
            self.order.extend([w + "0", w + "1"])
            return
        v = _bits(m[0])
        for w in list(self.order):
            if w.startswith(v):
                self.instances[w].observe((pl, m[1:]))

    def step(self):
        for w in list(self.order):
            m = self.instances[w].step()
            if m is not None:
                self.instances[w].observe((TOP, m))
                return (bits_token(w),) + m
        return None


def bang_lift(e: Strategy) -> Strategy:
    return BangLift(e)


def replace(e_h1: Strategy, c: Strategy, g1, g2, h1, h2, occ) -> Strategy:
    """Lemma 3.5: from a strategy for H1 and one for G1->G2, a strategy for
    H2 = H1 with the positive occurrence at `occ` replaced: the composition
    f(E, f(h(C), B)) with B extracted from the replacement proof."""
    from . import affine

    proof = affine.replacement_implication_proof(g1, g2, h1, h2, occ)
    b = affine.ai_to_strategy(proof)
    return compose_mp(e_h1, compose_mp(bang_lift(c), b))
