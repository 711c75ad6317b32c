"""Temporal properties over global states.

A property is one path quantifier applied to a boolean expression over
routing table fields, the delivery log, and the built-in loop_free check.
Expressions evaluate over ints; booleans count as 0/1 and a bare term is
true when nonzero, as in UPPAAL.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Mapping


class Quantifier(Enum):
    AF = "A<>"   # on every maximal path, eventually
    AG = "A[]"   # on every reachable state
    EF = "E<>"   # on some reachable state


@dataclass(frozen=True)
class RtField:
    owner: int
    dest: int
    field: str  # nhop | hops | dsn | valid


@dataclass(frozen=True)
class DeliveredQuery:
    receiver: int
    origin: int


@dataclass(frozen=True)
class LoopFree:
    pass


@dataclass(frozen=True)
class PcTerm:
    pass


@dataclass(frozen=True)
class IntLit:
    value: int


Term = RtField | DeliveredQuery | LoopFree | PcTerm | IntLit


@dataclass(frozen=True)
class Cmp:
    op: str  # == != < <= > >=
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Truth:
    term: Term


@dataclass(frozen=True)
class Not:
    child: "Predicate"


@dataclass(frozen=True)
class And:
    lhs: "Predicate"
    rhs: "Predicate"


@dataclass(frozen=True)
class Or:
    lhs: "Predicate"
    rhs: "Predicate"


Predicate = Cmp | Truth | Not | And | Or


@dataclass(frozen=True)
class Property:
    quantifier: Quantifier
    pred: Predicate
    text: str = ""


RT_FIELDS = ("nhop", "hops", "dsn", "valid")


def eval_term(term: Term, g) -> int:
    """Value of a term in global state g; missing table entries read as 0."""
    match term:
        case IntLit(value=v):
            return v
        case RtField(owner=o, dest=d, field=f):
            e = g.node(o).route(d)
            if e is None:
                return 0
            if f == "nhop":
                return e.nhop
            if f == "hops":
                return e.hops
            if f == "dsn":
                return e.dsn
            return int(e.valid)
        case DeliveredQuery(receiver=r, origin=o):
            return int(any(rec == r and org == o for rec, org, _ in g.delivered))
        case LoopFree():
            return int(loop_free(g))
        case PcTerm():
            return g.tester_pc
    raise TypeError(f"unhandled term {term!r}")


_CMP_OPS = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def eval_pred(pred: Predicate, g) -> bool:
    match pred:
        case Cmp(op=op, lhs=lhs, rhs=rhs):
            return _CMP_OPS[op](eval_term(lhs, g), eval_term(rhs, g))
        case Truth(term=t):
            return eval_term(t, g) != 0
        case Not(child=c):
            return not eval_pred(c, g)
        case And(lhs=a, rhs=b):
            return eval_pred(a, g) and eval_pred(b, g)
        case Or(lhs=a, rhs=b):
            return eval_pred(a, g) or eval_pred(b, g)
    raise TypeError(f"unhandled predicate {pred!r}")


def loop_free(g) -> bool:
    """No destination's valid next-hop pointers form a cycle."""
    ips = [ns.ip for ns in g.nodes]
    for dest in ips:
        nxt = {}
        for ns in g.nodes:
            e = ns.valid_route(dest)
            if e is not None:
                nxt[ns.ip] = e.nhop
        for start in nxt:
            seen = set()
            x = start
            while x in nxt:
                if x in seen:
                    return False
                seen.add(x)
                x = nxt[x]
    return True


class PropertyError(ValueError):
    """Raised for syntax errors, unknown nodes, or unknown fields."""


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<quant>A<>|A\[\]|E<>|E\[\])"
    r"|(?P<op>==|!=|<=|>=|\|\||&&|[<>()!,.\[\]])"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_]\w*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise PropertyError(f"bad character {text[pos:].strip()[0]!r} at column {pos + 1}")
        for kind in ("quant", "op", "int", "name"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val, m.start(kind)))
                break
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, node_ids: Mapping[str, int]):
        self.text = text
        self.node_ids = node_ids
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, what: str):
        kind, val, pos = self.peek()
        got = repr(val) if kind != "end" else "end of input"
        raise PropertyError(f"expected {what}, got {got} at column {pos + 1}")

    def expect(self, val: str):
        kind, got, _ = self.peek()
        if got != val or kind == "end":
            self.fail(repr(val))
        self.take()

    def node(self) -> int:
        kind, val, pos = self.peek()
        if kind != "name":
            self.fail("a node name")
        if val not in self.node_ids:
            raise PropertyError(f"unknown node {val!r} at column {pos + 1}")
        self.take()
        return self.node_ids[val]

    def property(self) -> Property:
        kind, val, _ = self.peek()
        if kind != "quant":
            self.fail("a path quantifier (A<>, A[] or E<>)")
        if val == "E[]":
            raise PropertyError("unsupported quantifier 'E[]' (use A<>, A[] or E<>)")
        self.take()
        pred = self.expr()
        if self.peek()[0] != "end":
            self.fail("end of property")
        return Property(Quantifier(val), pred, self.text.strip())

    def expr(self) -> Predicate:
        left = self.conj()
        while self.peek()[1] == "||":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Predicate:
        left = self.unary()
        while self.peek()[1] == "&&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Predicate:
        kind, val, _ = self.peek()
        if val == "!":
            self.take()
            return Not(self.unary())
        if val == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        return self.comparison()

    def comparison(self) -> Predicate:
        lhs = self.term()
        kind, val, _ = self.peek()
        if val in _CMP_OPS:
            self.take()
            return Cmp(val, lhs, self.term())
        return Truth(lhs)

    def term(self) -> Term:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return IntLit(int(val))
        if kind != "name":
            self.fail("a term")
        if val == "rt":
            self.take()
            self.expect("[")
            owner = self.node()
            self.expect("]")
            self.expect("[")
            dest = self.node()
            self.expect("]")
            self.expect(".")
            return RtField(owner, dest, self.field())
        if val == "delivered":
            self.take()
            self.expect("(")
            receiver = self.node()
            self.expect(",")
            origin = self.node()
            self.expect(")")
            return DeliveredQuery(receiver, origin)
        if val == "loop_free":
            self.take()
            return LoopFree()
        if val == "tester_pc":
            self.take()
            return PcTerm()
        if val in self.node_ids:
            owner = self.node_ids[val]
            self.take()
            if self.peek()[1] == ".":
                # UPPAAL style: s.rt[d].nhop
                self.take()
                self.expect("rt")
                self.expect("[")
                dest = self.node()
                self.expect("]")
                self.expect(".")
                return RtField(owner, dest, self.field())
            return IntLit(owner)
        raise PropertyError(f"unknown node {val!r} at column {pos + 1}")

    def field(self) -> str:
        kind, val, pos = self.peek()
        if kind != "name" or val not in RT_FIELDS:
            raise PropertyError(
                f"unknown routing table field {val!r} at column {pos + 1}"
                f" (expected one of {', '.join(RT_FIELDS)})"
            )
        self.take()
        return val


def parse_property(text: str, node_ids: Mapping[str, int]) -> Property:
    """Parse 'A<> expr', 'A[] expr' or 'E<> expr' with names from node_ids."""
    return _Parser(text, node_ids).property()
