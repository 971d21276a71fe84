"""Formula ASTs, parsing, printing, negation normalization and the Int->AI embedding.

Two formula languages share one AST:

* Int-formulas: atoms (``P1``, ``P2``, ..., ``$``), binary choice connectives
  ``&`` / ``|`` and the weak implication ``o-`` (kept abstract as
  :class:`WeakImp` so the Int proof rules can pattern-match on it).
* AI-formulas: atoms, ``~`` (negation), variable-arity ``/\\`` ``\\/`` ``&``
  ``|``, and the recurrences ``!`` (branching recurrence) and ``?`` (its
  dual).  ``->`` and ``o-`` are abbreviations and expand eagerly when parsed
  in AI mode.

``^P3`` denotes the one-variable elementary atom derived from ``P3`` (a
constant-choice over a unary predicate); it only appears in the elementary
fragment produced by the completeness transformations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple, Union


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Atom:
    """Nonlogical atom P<index>, index >= 1."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("atom index must be >= 1")


@dataclass(frozen=True)
class Dollar:
    """The logical atom $ (universal problem)."""


@dataclass(frozen=True)
class ElemAtom:
    """Elementary one-variable atom: the constant-choice game over Ȧ(x)."""

    name: str


@dataclass(frozen=True)
class Neg:
    body: "Formula"


@dataclass(frozen=True)
class ChoiceAnd:
    items: Tuple["Formula", ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("ChoiceAnd arity must be >= 2")


@dataclass(frozen=True)
class ChoiceOr:
    items: Tuple["Formula", ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("ChoiceOr arity must be >= 2")


@dataclass(frozen=True)
class ParAnd:
    items: Tuple["Formula", ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("ParAnd arity must be >= 2")


@dataclass(frozen=True)
class ParOr:
    items: Tuple["Formula", ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("ParOr arity must be >= 2")


@dataclass(frozen=True)
class Bang:
    body: "Formula"


@dataclass(frozen=True)
class Cobang:
    body: "Formula"


@dataclass(frozen=True)
class WeakImp:
    """left o- right: right is to be solved with left as a reusable resource."""

    left: "Formula"
    right: "Formula"


Formula = Union[
    Atom, Dollar, ElemAtom, Neg, ChoiceAnd, ChoiceOr, ParAnd, ParOr, Bang, Cobang, WeakImp
]

DOLLAR = Dollar()


@dataclass(frozen=True)
class IntSequent:
    antecedent: Tuple[Formula, ...]
    succedent: Formula


AISequent = Tuple[Formula, ...]


def cand(*items: Formula) -> ChoiceAnd:
    return ChoiceAnd(tuple(items))


def cor(*items: Formula) -> ChoiceOr:
    return ChoiceOr(tuple(items))


def pand(*items: Formula) -> Formula:
    items = tuple(items)
    return items[0] if len(items) == 1 else ParAnd(items)


def por(*items: Formula) -> Formula:
    items = tuple(items)
    return items[0] if len(items) == 1 else ParOr(items)


def wimp(left: Formula, right: Formula) -> WeakImp:
    return WeakImp(left, right)


def atoms_of(f) -> frozenset:
    """All nonlogical atoms occurring in a formula or sequent."""
    acc = set()

    def walk(g):
        if isinstance(g, Atom):
            acc.add(g)
        elif isinstance(g, (Dollar, ElemAtom)):
            pass
        elif isinstance(g, Neg):
            walk(g.body)
        elif isinstance(g, (Bang, Cobang)):
            walk(g.body)
        elif isinstance(g, WeakImp):
            walk(g.left)
            walk(g.right)
        else:
            for it in g.items:
                walk(it)

    if isinstance(f, IntSequent):
        for g in f.antecedent:
            walk(g)
        walk(f.succedent)
    else:
        walk(f)
    return frozenset(acc)


def has_dollar(f) -> bool:
    if isinstance(f, IntSequent):
        return any(has_dollar(g) for g in f.antecedent) or has_dollar(f.succedent)
    if isinstance(f, Dollar):
        return True
    if isinstance(f, (Atom, ElemAtom)):
        return False
    if isinstance(f, (Neg, Bang, Cobang)):
        return has_dollar(f.body)
    if isinstance(f, WeakImp):
        return has_dollar(f.left) or has_dollar(f.right)
    return any(has_dollar(it) for it in f.items)


def is_int_formula(f) -> bool:
    """Int-formulas use only atoms, binary choice connectives and WeakImp."""
    if isinstance(f, (Atom, Dollar)):
        return True
    if isinstance(f, (ChoiceAnd, ChoiceOr)):
        return len(f.items) == 2 and all(is_int_formula(it) for it in f.items)
    if isinstance(f, WeakImp):
        return is_int_formula(f.left) and is_int_formula(f.right)
    return False


def connective_count(f) -> int:
    if isinstance(f, (Atom, Dollar, ElemAtom)):
        return 0
    if isinstance(f, (Neg, Bang, Cobang)):
        return 1 + connective_count(f.body)
    if isinstance(f, WeakImp):
        return 1 + connective_count(f.left) + connective_count(f.right)
    return 1 + sum(connective_count(it) for it in f.items)


def subformulas(f) -> Iterator[Formula]:
    """All subformulas (with repetition), outermost first."""
    yield f
    if isinstance(f, (Atom, Dollar, ElemAtom)):
        return
    if isinstance(f, (Neg, Bang, Cobang)):
        yield from subformulas(f.body)
    elif isinstance(f, WeakImp):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    else:
        for it in f.items:
            yield from subformulas(it)


# ---------------------------------------------------------------------------
# Printing

_PREC_ATOM = 5
_PREC_UNARY = 4
_PREC_AND = 3
_PREC_OR = 2
_PREC_IMP = 1


def _prec(f) -> int:
    if isinstance(f, (Atom, Dollar, ElemAtom)):
        return _PREC_ATOM
    if isinstance(f, (Neg, Bang, Cobang)):
        return _PREC_UNARY
    if isinstance(f, (ChoiceAnd, ParAnd)):
        return _PREC_AND
    if isinstance(f, (ChoiceOr, ParOr)):
        return _PREC_OR
    return _PREC_IMP


def show(f) -> str:
    """Canonical ASCII form; ``parse_*(show(f))`` returns an equal AST.

    Children at the same precedence level are always parenthesized, so flat
    n-ary connectives are distinguishable from nested ones.
    """
    if isinstance(f, IntSequent):
        ant = ", ".join(show(g) for g in f.antecedent)
        return f"{ant} => {show(f.succedent)}" if ant else f"=> {show(f.succedent)}"
    if isinstance(f, tuple):
        return ", ".join(show(g) for g in f)
    return _show(f)


def _show(f) -> str:
    if isinstance(f, Atom):
        return f"P{f.index}"
    if isinstance(f, Dollar):
        return "$"
    if isinstance(f, ElemAtom):
        return f"^{f.name}"
    if isinstance(f, Neg):
        return "~" + _child(f.body, _PREC_UNARY)
    if isinstance(f, Bang):
        return "!" + _child(f.body, _PREC_UNARY)
    if isinstance(f, Cobang):
        return "?" + _child(f.body, _PREC_UNARY)
    if isinstance(f, ChoiceAnd):
        return " & ".join(_child(it, _PREC_AND) for it in f.items)
    if isinstance(f, ParAnd):
        return " /\\ ".join(_child(it, _PREC_AND) for it in f.items)
    if isinstance(f, ChoiceOr):
        return " | ".join(_child(it, _PREC_OR) for it in f.items)
    if isinstance(f, ParOr):
        return " \\/ ".join(_child(it, _PREC_OR) for it in f.items)
    if isinstance(f, WeakImp):
        return _child(f.left, _PREC_IMP) + " o- " + _child(f.right, _PREC_IMP)
    raise TypeError(f"not a formula: {f!r}")


def _child(f, parent_prec: int) -> str:
    s = _show(f)
    if _prec(f) <= parent_prec and parent_prec != _PREC_UNARY:
        return f"({s})"
    if parent_prec == _PREC_UNARY and _prec(f) < _PREC_UNARY:
        return f"({s})"
    return s


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


_TWO_CHAR = ("o-", "=>", "/\\", "\\/", "->")
_ONE_CHAR = "&|~!?$(),^"


def _tokenize(text: str):
    toks = []  # (kind, value, pos)
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR:
            toks.append((two, two, i))
            i += 2
            continue
        if c in _ONE_CHAR:
            toks.append((c, c, i))
            i += 1
            continue
        if c == "P":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("atom needs a decimal index", i)
            idx = int(text[i + 1 : j])
            if idx < 1:
                raise ParseError("atom index must be positive", i)
            toks.append(("atom", idx, i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(("eof", None, n))
    return toks


class _Parser:
    def __init__(self, text: str, mode: str):
        self.text = text
        self.mode = mode  # "int" or "ai"
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def next(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind: str):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}", t[2])
        return t

    def fail_ai_only(self, tok):
        raise ParseError(f"{tok[0]!r} is not an Int connective", tok[2])

    def formula(self) -> Formula:
        return self.imp()

    def imp(self) -> Formula:
        left = self.or_level()
        t = self.peek()
        if t[0] == "o-":
            self.next()
            right = self.imp()
            if self.mode == "ai":
                return por(Cobang(neg(left)), right)
            return WeakImp(left, right)
        if t[0] == "->":
            if self.mode == "int":
                self.fail_ai_only(t)
            self.next()
            right = self.imp()
            return por(Neg(left), right)
        return left

    def _chain(self, sub, ops):
        first = sub()
        t = self.peek()
        if t[0] not in ops:
            return first, None
        op = t[0]
        items = [first]
        while self.peek()[0] == op:
            self.next()
            items.append(sub())
        if self.peek()[0] in ops and self.peek()[0] != op:
            raise ParseError("mixed same-precedence connectives need parentheses", self.peek()[2])
        return items, op

    def or_level(self) -> Formula:
        items, op = self._chain(self.and_level, ("|", "\\/"))
        if op is None:
            return items
        if op == "\\/" and self.mode == "int":
            raise ParseError("'\\/' is not an Int connective", 0)
        if self.mode == "int":
            # right-nested binaries, per the E1 # (E2 # ...) abbreviation
            acc = items[-1]
            for it in reversed(items[:-1]):
                acc = ChoiceOr((it, acc))
            return acc
        return ChoiceOr(tuple(items)) if op == "|" else ParOr(tuple(items))

    def and_level(self) -> Formula:
        items, op = self._chain(self.unary, ("&", "/\\"))
        if op is None:
            return items
        if op == "/\\" and self.mode == "int":
            raise ParseError("'/\\' is not an Int connective", 0)
        if self.mode == "int":
            acc = items[-1]
            for it in reversed(items[:-1]):
                acc = ChoiceAnd((it, acc))
            return acc
        return ChoiceAnd(tuple(items)) if op == "&" else ParAnd(tuple(items))

    def unary(self) -> Formula:
        t = self.peek()
        if t[0] in ("~", "!", "?"):
            if self.mode == "int":
                self.fail_ai_only(t)
            self.next()
            body = self.unary()
            return {"~": Neg, "!": Bang, "?": Cobang}[t[0]](body)
        if t[0] == "^":
            if self.mode == "int":
                self.fail_ai_only(t)
            self.next()
            a = self.expect("atom")
            return ElemAtom(f"P{a[1]}")
        if t[0] == "atom":
            self.next()
            return Atom(t[1])
        if t[0] == "$":
            self.next()
            return DOLLAR
        if t[0] == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        raise ParseError("expected a formula", t[2])


def parse_int(text: str):
    """Parse an Int-formula, or an Int-sequent when '=>' occurs."""
    p = _Parser(text, "int")
    if "=>" in text:
        ant = []
        if p.peek()[0] != "=>":
            ant.append(p.formula())
            while p.peek()[0] == ",":
                p.next()
                ant.append(p.formula())
        p.expect("=>")
        succ = p.formula()
        p.expect("eof")
        return IntSequent(tuple(ant), succ)
    f = p.formula()
    p.expect("eof")
    return f


def parse_ai(text: str):
    """Parse an AI-formula, or a comma-separated AI-sequent (tuple)."""
    p = _Parser(text, "ai")
    items = [p.formula()]
    while p.peek()[0] == ",":
        p.next()
        items.append(p.formula())
    p.expect("eof")
    return items[0] if len(items) == 1 else tuple(items)


# ---------------------------------------------------------------------------
# Negation normalization and the Int -> AI embedding


def neg(f: Formula) -> Formula:
    """Normalized negation: ~ pushed to atoms by the standard equations."""
    if isinstance(f, (Atom, Dollar, ElemAtom)):
        return Neg(f)
    if isinstance(f, Neg):
        return normalize_negation(f.body)
    if isinstance(f, Bang):
        return Cobang(neg(f.body))
    if isinstance(f, Cobang):
        return Bang(neg(f.body))
    if isinstance(f, ParAnd):
        return ParOr(tuple(neg(it) for it in f.items))
    if isinstance(f, ParOr):
        return ParAnd(tuple(neg(it) for it in f.items))
    if isinstance(f, ChoiceAnd):
        return ChoiceOr(tuple(neg(it) for it in f.items))
    if isinstance(f, ChoiceOr):
        return ChoiceAnd(tuple(neg(it) for it in f.items))
    if isinstance(f, WeakImp):
        return neg(expand_weakimp(f))
    raise TypeError(f"not a formula: {f!r}")


def normalize_negation(f: Formula) -> Formula:
    """Apply the negation equations so ~ appears on atoms only."""
    if isinstance(f, (Atom, Dollar, ElemAtom)):
        return f
    if isinstance(f, Neg):
        return neg(normalize_negation(f.body))
    if isinstance(f, Bang):
        return Bang(normalize_negation(f.body))
    if isinstance(f, Cobang):
        return Cobang(normalize_negation(f.body))
    if isinstance(f, WeakImp):
        return normalize_negation(expand_weakimp(f))
    return type(f)(tuple(normalize_negation(it) for it in f.items))


def expand_weakimp(f: Formula) -> Formula:
    """Rewrite every E o- F into ?~E \\/ F (one level at the root)."""
    return ParOr((Cobang(Neg(f.left)), f.right))


def arrow(e: Formula, f: Formula) -> Formula:
    """E -> F as the normalized ~E \\/ F."""
    return ParOr((neg(normalize_negation(e)), normalize_negation(f)))


def embed_int(f) -> Formula:
    """Int-formula or Int-sequent to its normalized AI reading.

    A sequent G1,...,Gn => K becomes !G1 /\\ ... /\\ !Gn -> K (just K when
    n = 0); every E o- F becomes ?~E \\/ F.
    """
    if isinstance(f, IntSequent):
        k = embed_int(f.succedent)
        if not f.antecedent:
            return k
        bangs = [Bang(embed_int(g)) for g in f.antecedent]
        return ParOr((neg(pand(*bangs)), k))
    return normalize_negation(f)


def fresh_atoms(k: int, avoid: Iterable[Atom]) -> Tuple[Atom, ...]:
    """The k index-smallest canonical atoms outside `avoid`, ascending."""
    taken = {a.index for a in avoid}
    out = []
    i = 1
    while len(out) < k:
        if i not in taken:
            out.append(Atom(i))
        i += 1
    return tuple(out)
