"""LTL formulas: AST, parser, renderer, length metric, random generator.

Concrete syntax (tightest binding first)::

    atoms      p q r true
    unary      ! X F G
    until      U      (right associative)
    and        &      (left associative)
    or         |      (left associative)

Parentheses override precedence. ``render_ltl`` parenthesizes every binary
operator, so ``parse_ltl(render_ltl(f)) == f`` for every formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .rng import SplitMix64

ATOM_NAMES = "pqr"
UNARY_OPS = "!XFG"
BINARY_OPS = "&|U"


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Atom:
    index: int


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class Next:
    operand: "Formula"


@dataclass(frozen=True)
class Finally:
    operand: "Formula"


@dataclass(frozen=True)
class Globally:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Top, Not, Next, Finally, Globally, And, Or, Until]

UNARY = {"!": Not, "X": Next, "F": Finally, "G": Globally}
BINARY = {"&": And, "|": Or, "U": Until}
SYMBOL = {Not: "!", Next: "X", Finally: "F", Globally: "G", And: "&", Or: "|", Until: "U"}

# binary precedence, higher binds tighter; unary operators sit above all of them
_PREC = {"|": 1, "&": 2, "U": 3}
_UNARY_PREC = 4
_RIGHT_ASSOC = {"U"}

_TOKEN = re.compile(r"\s*(?:(true)|([pqrXFGU!&|()])|(\S))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(3) is not None:
            raise LtlSyntaxError(f"unknown symbol {m.group(3)!r}", m.start(3))
        if m.group(1) is not None:
            tokens.append(("true", m.start(1)))
        else:
            tokens.append((m.group(2), m.start(2)))
        pos = m.end()
    return tokens


def parse_ltl(text: str) -> Formula:
    """Parse formula text (operator-precedence parser, no recursion)."""
    output: list[Formula] = []
    ops: list[tuple[str, int]] = []
    expect_operand = True

    def reduce(op: str, pos: int) -> None:
        if op in UNARY:
            output.append(UNARY[op](output.pop()))
        else:
            right = output.pop()
            output.append(BINARY[op](output.pop(), right))

    for tok, pos in _tokenize(text):
        if expect_operand:
            if tok in ATOM_NAMES:
                output.append(Atom(ATOM_NAMES.index(tok)))
                expect_operand = False
            elif tok == "true":
                output.append(Top())
                expect_operand = False
            elif tok in UNARY or tok == "(":
                ops.append((tok, pos))
            else:
                raise LtlSyntaxError(f"expected a formula, found {tok!r}", pos)
        elif tok in _PREC:
            prec = _PREC[tok]
            while ops and ops[-1][0] != "(":
                top = ops[-1][0]
                top_prec = _UNARY_PREC if top in UNARY else _PREC[top]
                if top_prec > prec or (top_prec == prec and tok not in _RIGHT_ASSOC):
                    reduce(*ops.pop())
                else:
                    break
            ops.append((tok, pos))
            expect_operand = True
        elif tok == ")":
            while ops and ops[-1][0] != "(":
                reduce(*ops.pop())
            if not ops:
                raise LtlSyntaxError("unbalanced ')'", pos)
            ops.pop()
        else:
            raise LtlSyntaxError(f"expected an operator or ')', found {tok!r}", pos)

    if expect_operand:
        where = ops[-1][1] if ops else len(text)
        raise LtlSyntaxError("dangling operator or empty formula", where)
    while ops:
        op, pos = ops.pop()
        if op == "(":
            raise LtlSyntaxError("unbalanced '('", pos)
        reduce(op, pos)
    return output[0]


def atom_name(index: int) -> str:
    if not 0 <= index < len(ATOM_NAMES):
        raise ValueError(f"atom index {index} has no name (supported: {ATOM_NAMES})")
    return ATOM_NAMES[index]


def render_ltl(f: Formula) -> str:
    if isinstance(f, Atom):
        return atom_name(f.index)
    if isinstance(f, Top):
        return "true"
    if isinstance(f, (Not, Next, Finally, Globally)):
        return SYMBOL[type(f)] + render_ltl(f.operand)
    return f"({render_ltl(f.left)}{SYMBOL[type(f)]}{render_ltl(f.right)})"


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Atom, Top)):
        return ()
    if isinstance(f, (Not, Next, Finally, Globally)):
        return (f.operand,)
    return (f.left, f.right)


def iter_prefix(f: Formula) -> Iterator[Formula]:
    """Nodes in prefix (Polish) order."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def token(node: Formula) -> str:
    """The single token a node contributes to the concrete syntax."""
    if isinstance(node, Atom):
        return atom_name(node.index)
    if isinstance(node, Top):
        return "true"
    return SYMBOL[type(node)]


def token_length(f: Formula) -> int:
    """Atoms plus operator occurrences; parentheses are not counted."""
    return sum(1 for _ in iter_prefix(f))


def max_atom(f: Formula) -> int:
    return max((n.index for n in iter_prefix(f) if isinstance(n, Atom)), default=-1)


def random_formula(length: int, n_props: int, rng: SplitMix64) -> Formula:
    """Random formula with exactly ``length`` tokens.

    At each node the constructor is drawn uniformly from those that fit the
    remaining budget; binary nodes split the budget uniformly.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    if not 1 <= n_props <= len(ATOM_NAMES):
        raise ValueError(f"n_props must be in 1..{len(ATOM_NAMES)}")
    unary = (Not, Next, Finally, Globally)
    every = unary + (And, Or, Until)

    def build(budget: int) -> Formula:
        if budget == 1:
            return Atom(rng.randbelow(n_props))
        op = rng.choice(unary if budget == 2 else every)
        if op in unary:
            return op(build(budget - 1))
        left = 1 + rng.randbelow(budget - 2)
        lhs = build(left)
        return op(lhs, build(budget - 1 - left))

    return build(length)


def desugar(f: Formula) -> Formula:
    """Rewrite F and G in terms of U: F g = true U g, G g = !(true U !g)."""
    if isinstance(f, (Atom, Top)):
        return f
    if isinstance(f, Finally):
        return Until(Top(), desugar(f.operand))
    if isinstance(f, Globally):
        return Not(Until(Top(), Not(desugar(f.operand))))
    if isinstance(f, (Not, Next)):
        return type(f)(desugar(f.operand))
    return type(f)(desugar(f.left), desugar(f.right))


def is_core(f: Formula) -> bool:
    return not any(isinstance(n, (Finally, Globally)) for n in iter_prefix(f))
