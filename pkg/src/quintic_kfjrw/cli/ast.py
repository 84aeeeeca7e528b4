"""AST of the operator-expression language.

Every node carries ``pos = (line, column)``; positions are excluded from
equality so that a parsed tree compares equal to a constructed one.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

__all__ = [
    "Node", "Num", "Sym", "Indexed", "Call", "Neg", "Bin", "Pow",
    "Apply", "Verify", "ExpandAt", "Pair", "Omega", "Report", "Program",
    "ATOMS", "INDEXED", "FUNCTIONS", "KEYWORDS",
]

ATOMS = ("q", "S", "x", "s", "Jpt", "Iun", "IFJRW", "IFJRWdual", "inf")
INDEXED = {"I": 2, "phi": 1, "e": 1, "d": 1}
FUNCTIONS = {"zeta": 1, "twist": 2, "invq": 1}
KEYWORDS = ("apply", "to", "order", "twist", "verify", "expand-at", "point", "pair", "omega", "report")


def _pos():
    return field(default=(0, 0), compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class Num(Node):
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Sym(Node):
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Indexed(Node):
    name: str
    indices: Tuple[int, ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: Tuple[Node, ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class Neg(Node):
    arg: Node
    pos: tuple = _pos()


@dataclass(frozen=True)
class Bin(Node):
    op: str
    left: Node
    right: Node
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exp: Fraction
    pos: tuple = _pos()


@dataclass(frozen=True)
class Apply(Node):
    op: Node
    target: Node
    order: Optional[int] = None
    twist: Optional[Node] = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class Verify(Node):
    name: str
    args: Tuple[Tuple[str, int], ...] = ()
    order: Optional[int] = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class ExpandAt(Node):
    target: Node
    point: Node
    order: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pair(Node):
    left: Node
    right: Node
    pos: tuple = _pos()


@dataclass(frozen=True)
class Omega(Node):
    left: Node
    right: Node
    pos: tuple = _pos()


@dataclass(frozen=True)
class Report(Node):
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Program(Node):
    statements: Tuple[Node, ...]
    pos: tuple = _pos()
