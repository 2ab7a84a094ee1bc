"""Loop identities as data: terms, equations, a parser, printer and evaluator.

Grammar (whitespace is ignored)::

    equation := expr '=' expr
    expr     := unary (('*' | '\\' | '/') unary)*      left-associative
    unary    := atom ('^-1')*
    atom     := variable | 'e' | '(' expr ')'

Variables are single lowercase letters other than ``e``, which names the
identity.  ``a\\b`` is the ``x`` with ``a*x = b``; ``a/b`` is the ``y`` with
``y*b = a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

import numpy as np

from .core import InverseUndefinedError, LoopError, LoopTable


class TermSyntaxError(LoopError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariableError(LoopError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    pass


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class LDiv:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class RDiv:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Inv:
    child: "Term"


Term = Union[Var, Const, Mul, LDiv, RDiv, Inv]

_BINARY = {Mul: "*", LDiv: "\\", RDiv: "/"}
_OPS = {"*": Mul, "\\": LDiv, "/": RDiv}


def term_variables(t: Term) -> list[str]:
    """Variables of ``t`` in order of first occurrence."""
    out: list[str] = []

    def walk(u):
        if isinstance(u, Var):
            if u.name not in out:
                out.append(u.name)
        elif isinstance(u, Inv):
            walk(u.child)
        elif not isinstance(u, Const):
            walk(u.left)
            walk(u.right)

    walk(t)
    return out


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    variables: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        vs = term_variables(self.lhs)
        for v in term_variables(self.rhs):
            if v not in vs:
                vs.append(v)
        object.__setattr__(self, "variables", tuple(vs))

    def __str__(self):
        return format_equation(self)


# ---------------------------------------------------------------------------
# parsing


def _tokens(s: str) -> Iterator[tuple[str, int]]:
    i = 0
    while i < len(s):
        c = s[i]
        if c.isspace():
            i += 1
        elif s.startswith("^-1", i):
            yield "^-1", i
            i += 3
        elif c in "*\\/()=":
            yield c, i
            i += 1
        elif "a" <= c <= "z":
            yield c, i
            i += 1
        else:
            raise TermSyntaxError(f"unexpected character {c!r}", i)
    yield "", len(s)


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.pos = 0

    def peek(self) -> tuple[str, int]:
        return self.toks[self.pos]

    def take(self) -> tuple[str, int]:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expr(self) -> Term:
        t = self.unary()
        while self.peek()[0] in _OPS:
            op, _ = self.take()
            t = _OPS[op](t, self.unary())
        return t

    def unary(self) -> Term:
        t = self.atom()
        while self.peek()[0] == "^-1":
            self.take()
            t = Inv(t)
        return t

    def atom(self) -> Term:
        tok, at = self.take()
        if tok == "(":
            t = self.expr()
            close, at2 = self.take()
            if close != ")":
                raise TermSyntaxError("expected ')'", at2)
            return t
        if tok == "e":
            return Const()
        if len(tok) == 1 and "a" <= tok <= "z":
            return Var(tok)
        if tok in ("", "="):
            raise TermSyntaxError("empty side" if tok else "unexpected end of input", at)
        raise TermSyntaxError(f"unexpected {tok!r}", at)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.expr()
    tok, at = p.peek()
    if tok:
        raise TermSyntaxError(f"unexpected {tok!r}", at)
    return t


def parse_identity(text: str) -> Equation:
    if text.count("=") > 1:
        raise TermSyntaxError("duplicate '='", text.index("=", text.index("=") + 1))
    if "=" not in text:
        raise TermSyntaxError("missing '='", len(text))
    p = _Parser(text)
    lhs = p.expr()
    tok, at = p.take()
    if tok != "=":
        raise TermSyntaxError(f"unexpected {tok!r}", at)
    rhs = p.expr()
    tok, at = p.peek()
    if tok:
        raise TermSyntaxError(f"unexpected {tok!r}", at)
    return Equation(lhs, rhs)


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return "e"
    if isinstance(t, Inv):
        return format_term(t.child) + "^-1"
    return f"({format_term(t.left)}{_BINARY[type(t)]}{format_term(t.right)})"


def format_equation(eq: Equation) -> str:
    return f"{format_term(eq.lhs)} = {format_term(eq.rhs)}"


# ---------------------------------------------------------------------------
# evaluation


def eval_term(L: LoopTable, t: Term, asg: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return asg[t.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {t.name}") from None
    if isinstance(t, Const):
        return 0
    if isinstance(t, Inv):
        x = eval_term(L, t.child, asg)
        left, right = L._rdiv[x][0], L._ldiv[x][0]
        if left != right:
            raise InverseUndefinedError(x)
        return left
    a = eval_term(L, t.left, asg)
    b = eval_term(L, t.right, asg)
    if isinstance(t, Mul):
        return L.cells[a][b]
    if isinstance(t, LDiv):
        return L._ldiv[a][b]
    return L._rdiv[b][a]


HOLDS, FAILS, INAPPLICABLE = "holds", "fails", "inapplicable"


def _eval_grid(L: LoopTable, t: Term, grids: dict[str, np.ndarray], bad: np.ndarray) -> np.ndarray:
    """Evaluate ``t`` on every assignment at once; marks undefined inverses in ``bad``."""
    if isinstance(t, Var):
        return grids[t.name]
    if isinstance(t, Const):
        return np.zeros_like(bad, dtype=np.int64)
    if isinstance(t, Inv):
        x = _eval_grid(L, t.child, grids, bad)
        left, right = L.right_div_array[:, 0], L.left_div_array[:, 0]
        bad |= left[x] != right[x]
        return right[x]
    a = _eval_grid(L, t.left, grids, bad)
    b = _eval_grid(L, t.right, grids, bad)
    if isinstance(t, Mul):
        return L.array[a, b]
    if isinstance(t, LDiv):
        return L.left_div_array[a, b]
    return L.right_div_array[b, a]


def check_identity(L: LoopTable, eq: Equation) -> tuple[str, dict[str, int] | None]:
    """Check ``eq`` on all assignments.

    Returns ``(status, assignment)``: ``holds`` with None, ``fails`` with an
    assignment separating the sides, or ``inapplicable`` with an assignment
    at which some inverse is undefined.  The reported assignment is the first
    offending one in lexicographic order of the variable tuple.
    """
    names = eq.variables
    k = len(names)
    shape = (L.n,) * k
    grids = {v: g for v, g in zip(names, np.indices(shape, dtype=np.int64))} if k else {}
    bad = np.zeros(shape, dtype=bool)
    lhs = _eval_grid(L, eq.lhs, grids, bad)
    rhs = _eval_grid(L, eq.rhs, grids, bad)
    wrong = bad | (lhs != rhs)
    if not wrong.any():
        return HOLDS, None
    flat = int(np.flatnonzero(wrong.ravel())[0])
    idx = np.unravel_index(flat, shape) if k else ()
    asg = {v: int(i) for v, i in zip(names, idx)}
    return (INAPPLICABLE if bad.ravel()[flat] else FAILS), asg


def check_identity_scalar(L: LoopTable, eq: Equation) -> tuple[str, dict[str, int] | None]:
    """:func:`check_identity` one assignment at a time through :func:`eval_term`."""
    names = eq.variables
    for values in itertools.product(range(L.n), repeat=len(names)):
        asg = dict(zip(names, values))
        try:
            if eval_term(L, eq.lhs, asg) != eval_term(L, eq.rhs, asg):
                return FAILS, asg
        except InverseUndefinedError:
            return INAPPLICABLE, asg
    return HOLDS, None


def holds(L: LoopTable, eq: Equation | str) -> bool:
    if isinstance(eq, str):
        eq = resolve_identity(eq)
    return check_identity(L, eq)[0] == HOLDS


def counterexample(L: LoopTable, eq: Equation | str) -> dict[str, int] | None:
    if isinstance(eq, str):
        eq = resolve_identity(eq)
    return check_identity(L, eq)[1]


# ---------------------------------------------------------------------------
# catalog

_C_CUBED = (
    "z^-1*((z*((z^-1*((z*((z^-1*((z*(y*x))*x^-1))*x))*x^-1))*x))*x^-1) = y"
)

_BUILTINS = {
    "moufang": "x*(y*(x*z)) = ((x*y)*x)*z",
    "moufang_right": "((x*y)*z)*y = x*(y*(z*y))",
    "moufang_middle": "(x*y)*(z*x) = (x*(y*z))*x",
    "moufang_middle2": "(x*y)*(z*x) = x*((y*z)*x)",
    "left_inverse_property": "x^-1*(x*y) = y",
    "right_inverse_property": "(x*y)*y^-1 = x",
    "left_alternative": "x*(x*y) = (x*x)*y",
    "right_alternative": "(x*y)*y = x*(y*y)",
    "flexible": "(x*y)*x = x*(y*x)",
    "m4": "(x*y)*(z*(((x*x)*x)*x)) = (x*(y*z))*(((x*x)*x)*x)",
    "c_cubed": _C_CUBED,
    "associative": "(x*y)*z = x*(y*z)",
    "commutative": "x*y = y*x",
    "cube_associative": "x*(x*x) = (x*x)*x",
    "two_sided_inverse": "x^-1*x = e",
}


def builtin_identities() -> dict[str, Equation]:
    return {name: parse_identity(text) for name, text in _BUILTINS.items()}


def builtin_identity_texts() -> dict[str, str]:
    return dict(_BUILTINS)


def resolve_identity(text: str) -> Equation:
    """A catalog name or an identity string."""
    if text in _BUILTINS:
        return parse_identity(_BUILTINS[text])
    return parse_identity(text)


# ---------------------------------------------------------------------------
# straight-line programs for the search kernels

OP_MUL, OP_LDIV, OP_RDIV, OP_INV = 0, 1, 2, 3


@dataclass(frozen=True)
class Program:
    """An equation flattened to register code.

    Registers ``0..nvars-1`` hold the variables, register ``nvars`` holds the
    identity, and instruction ``i`` writes register ``nvars + 1 + i``.
    ``OP_LDIV a b`` computes ``a\\b``; ``OP_RDIV a b`` computes ``a/b``.
    """

    nvars: int
    instrs: tuple[tuple[int, int, int], ...]
    lhs: int
    rhs: int

    def as_tuple(self):
        return (self.nvars, self.instrs, self.lhs, self.rhs)


def compile_equation(eq: Equation) -> Program:
    names = eq.variables
    reg = {("var", v): i for i, v in enumerate(names)}
    k = len(names)
    reg[("e",)] = k
    instrs: list[tuple[int, int, int]] = []

    def emit(t: Term) -> int:
        if isinstance(t, Var):
            return reg[("var", t.name)]
        if isinstance(t, Const):
            return k
        if isinstance(t, Inv):
            key = (OP_INV, emit(t.child), 0)
        else:
            op = {Mul: OP_MUL, LDiv: OP_LDIV, RDiv: OP_RDIV}[type(t)]
            key = (op, emit(t.left), emit(t.right))
        if key not in reg:
            instrs.append(key)
            reg[key] = k + len(instrs)
        return reg[key]

    lhs = emit(eq.lhs)
    rhs = emit(eq.rhs)
    return Program(k, tuple(instrs), lhs, rhs)
