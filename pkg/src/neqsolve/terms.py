"""Terms, constraint instances, the line-based input format, and flattening.

Instances are conjunctions of equalities and disequalities between terms over
one of two signatures: group (+, unary -, constant 0) or semilattice (meet).
Flattening rewrites nested terms into fresh variables constrained by graph
atoms, after which the group case becomes integer rows and the semilattice
case becomes Horn material.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

GROUP = "group"
SEMILATTICE = "semilattice"

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Signature:
    kind: str

    def __post_init__(self):
        if self.kind not in (GROUP, SEMILATTICE):
            raise ValueError(f"unknown signature kind: {self.kind!r}")


SIG_GROUP = Signature(GROUP)
SIG_SEMILATTICE = Signature(SEMILATTICE)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


Term = Union[Var, Zero, Sum, Neg, Meet]


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Neq:
    lhs: Term
    rhs: Term


Constraint = Union[Eq, Neq]


def term_variables(t: Term, out: list[str] | None = None) -> list[str]:
    """Variable names in first-occurrence order."""
    if out is None:
        out = []
    if isinstance(t, Var):
        if t.name not in out:
            out.append(t.name)
    elif isinstance(t, Sum):
        term_variables(t.left, out)
        term_variables(t.right, out)
    elif isinstance(t, Neg):
        term_variables(t.arg, out)
    elif isinstance(t, Meet):
        term_variables(t.left, out)
        term_variables(t.right, out)
    return out


def _check_term(t: Term, kind: str, declared: set[str]) -> None:
    if isinstance(t, Var):
        if t.name not in declared:
            raise ValueError(f"undeclared variable: {t.name!r}")
    elif isinstance(t, (Sum, Neg, Zero)):
        if kind != GROUP:
            raise ValueError("operation not in signature: group term over semilattice")
        if isinstance(t, Sum):
            _check_term(t.left, kind, declared)
            _check_term(t.right, kind, declared)
        elif isinstance(t, Neg):
            _check_term(t.arg, kind, declared)
    elif isinstance(t, Meet):
        if kind != SEMILATTICE:
            raise ValueError("operation not in signature: meet over group")
        _check_term(t.left, kind, declared)
        _check_term(t.right, kind, declared)
    else:
        raise TypeError(f"not a term: {t!r}")


@dataclass(frozen=True)
class Instance:
    """A conjunction of (dis)equalities over declared variables."""

    signature: Signature
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]

    @staticmethod
    def make(signature: Signature, variables, constraints) -> "Instance":
        variables = tuple(variables)
        seen = set()
        for v in variables:
            if not _NAME_RE.match(v) or v.startswith("_"):
                raise ValueError(f"bad variable name: {v!r}")
            if v in seen:
                raise ValueError(f"duplicate variable: {v!r}")
            seen.add(v)
        constraints = tuple(constraints)
        for c in constraints:
            if not isinstance(c, (Eq, Neq)):
                raise TypeError(f"not a constraint: {c!r}")
            _check_term(c.lhs, signature.kind, seen)
            _check_term(c.rhs, signature.kind, seen)
        return Instance(signature, variables, constraints)


# -- text format ----------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


def _tokenize(text: str, lineno: int) -> list[tuple[str, int]]:
    """(token, 1-based column) pairs; '#' starts a comment."""
    hash_at = text.find("#")
    if hash_at >= 0:
        text = text[:hash_at]
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            out.append((ch, i + 1))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            out.append((text[i:j], i + 1))
            i = j
    return out


_OPS = {GROUP: {"+": 2, "-": 1}, SEMILATTICE: {"meet": 2}}


class _TermParser:
    def __init__(self, tokens, lineno, kind, declared):
        self.tokens = tokens
        self.lineno = lineno
        self.kind = kind
        self.declared = declared  # set to validate against, or None to collect
        self.collected: list[str] = []
        self.i = 0

    def take(self):
        if self.i >= len(self.tokens):
            last_col = self.tokens[-1][1] if self.tokens else 1
            raise ParseError("unexpected end of line", self.lineno, last_col)
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def term(self) -> Term:
        tok, col = self.take()
        if tok == "(":
            op, opcol = self.take()
            arity = _OPS[self.kind].get(op)
            if arity is None:
                raise ParseError(f"operation not in signature: {op!r}", self.lineno, opcol)
            args = [self.term() for _ in range(arity)]
            close, ccol = self.take()
            if close != ")":
                raise ParseError(f"expected ')', got {close!r}", self.lineno, ccol)
            if op == "+":
                return Sum(args[0], args[1])
            if op == "-":
                return Neg(args[0])
            return Meet(args[0], args[1])
        if tok == ")":
            raise ParseError("unexpected ')'", self.lineno, col)
        if tok == "0":
            if self.kind != GROUP:
                raise ParseError("operation not in signature: '0'", self.lineno, col)
            return Zero()
        if not _NAME_RE.match(tok) or tok.startswith("_"):
            raise ParseError(f"bad name: {tok!r}", self.lineno, col)
        if self.declared is not None:
            if tok not in self.declared:
                raise ParseError(f"undeclared variable: {tok!r}", self.lineno, col)
        elif tok not in self.collected:
            self.collected.append(tok)
        return Var(tok)


def parse_term_text(text: str, kind: str, declared: set[str] | None = None):
    """Parse a standalone term.  With declared=None variables are collected
    instead of validated; returns (term, names in first occurrence order)."""
    tokens = _tokenize(text, 1)
    if not tokens:
        raise ParseError("empty term", 1, 1)
    p = _TermParser(tokens, 1, kind, declared)
    t = p.term()
    if p.i != len(tokens):
        raise ParseError(f"trailing tokens after term: {tokens[p.i][0]!r}", 1, tokens[p.i][1])
    return t, p.collected


def parse_instance(text: str) -> Instance:
    kind = None
    variables: list[str] = []
    declared: set[str] = set()
    constraints: list[Constraint] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if not tokens:
            continue
        head, col = tokens[0]
        if head == "structure":
            if kind is not None:
                raise ParseError("duplicate structure line", lineno, col)
            if variables or constraints:
                raise ParseError("structure line must come first", lineno, col)
            if len(tokens) != 2 or tokens[1][0] not in (GROUP, SEMILATTICE):
                raise ParseError("expected 'structure group' or 'structure semilattice'", lineno, col)
            kind = tokens[1][0]
        elif head == "var":
            if kind is None:
                raise ParseError("structure line required before 'var'", lineno, col)
            if constraints:
                raise ParseError("variable declarations must precede constraints", lineno, col)
            for name, ncol in tokens[1:]:
                if not _NAME_RE.match(name) or name.startswith("_"):
                    raise ParseError(f"bad variable name: {name!r}", lineno, ncol)
                if name in declared:
                    raise ParseError(f"duplicate variable: {name!r}", lineno, ncol)
                declared.add(name)
                variables.append(name)
        elif head in ("eq", "neq"):
            if kind is None:
                raise ParseError("structure line required before constraints", lineno, col)
            p = _TermParser(tokens, lineno, kind, declared)
            p.i = 1
            lhs = p.term()
            rhs = p.term()
            if p.i != len(tokens):
                raise ParseError(
                    f"trailing tokens after constraint: {tokens[p.i][0]!r}", lineno, tokens[p.i][1]
                )
            constraints.append(Eq(lhs, rhs) if head == "eq" else Neq(lhs, rhs))
        else:
            raise ParseError(f"unknown directive: {head!r}", lineno, col)
    if kind is None:
        raise ParseError("missing structure line", 1, 1)
    return Instance.make(Signature(kind), variables, constraints)


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Sum):
        return f"(+ {format_term(t.left)} {format_term(t.right)})"
    if isinstance(t, Neg):
        return f"(- {format_term(t.arg)})"
    if isinstance(t, Meet):
        return f"(meet {format_term(t.left)} {format_term(t.right)})"
    raise TypeError(f"not a term: {t!r}")


def format_instance(inst: Instance) -> str:
    """Canonical text form; parse_instance(format_instance(i)) == i."""
    lines = [f"structure {inst.signature.kind}"]
    if inst.variables:
        lines.append("var " + " ".join(inst.variables))
    for c in inst.constraints:
        word = "eq" if isinstance(c, Eq) else "neq"
        lines.append(f"{word} {format_term(c.lhs)} {format_term(c.rhs)}")
    return "\n".join(lines) + "\n"


# -- flattening -----------------------------------------------------------


@dataclass(frozen=True)
class GraphAtom:
    """result = op(args) with every position a variable name."""

    result: str
    op: str  # '+', '-', '0', 'meet'
    args: tuple[str, ...]


@dataclass(frozen=True)
class VarEq:
    a: str
    b: str


@dataclass(frozen=True)
class VarNeq:
    a: str
    b: str


@dataclass(frozen=True)
class FlatInstance:
    kind: str
    variables: tuple[str, ...]  # originals first, then fresh in creation order
    atoms: tuple[GraphAtom, ...]
    equalities: tuple[VarEq, ...]
    disequalities: tuple[VarNeq, ...]
    provenance: tuple[tuple[str, Term], ...]  # fresh name -> subterm it names


def flatten(inst: Instance) -> FlatInstance:
    """Rewrite nested terms into fresh variables (_tN) plus graph atoms.

    Every model of the original instance extends uniquely to the flat one,
    and the flat instance projects back, so satisfiability is preserved.
    """
    atoms: list[GraphAtom] = []
    eqs: list[VarEq] = []
    neqs: list[VarNeq] = []
    fresh: list[str] = []
    provenance: list[tuple[str, Term]] = []
    counter = 0

    def new_var(t: Term) -> str:
        nonlocal counter
        counter += 1
        name = f"_t{counter}"
        fresh.append(name)
        provenance.append((name, t))
        return name

    def name_of(t: Term) -> str:
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Zero):
            v = new_var(t)
            atoms.append(GraphAtom(v, "0", ()))
            return v
        if isinstance(t, Sum):
            a = name_of(t.left)
            b = name_of(t.right)
            v = new_var(t)
            atoms.append(GraphAtom(v, "+", (a, b)))
            return v
        if isinstance(t, Neg):
            a = name_of(t.arg)
            v = new_var(t)
            atoms.append(GraphAtom(v, "-", (a,)))
            return v
        if isinstance(t, Meet):
            a = name_of(t.left)
            b = name_of(t.right)
            v = new_var(t)
            atoms.append(GraphAtom(v, "meet", (a, b)))
            return v
        raise TypeError(f"not a term: {t!r}")

    for c in inst.constraints:
        na = name_of(c.lhs)
        nb = name_of(c.rhs)
        if isinstance(c, Eq):
            eqs.append(VarEq(na, nb))
        else:
            neqs.append(VarNeq(na, nb))

    return FlatInstance(
        inst.signature.kind,
        inst.variables + tuple(fresh),
        tuple(atoms),
        tuple(eqs),
        tuple(neqs),
        tuple(provenance),
    )


# -- group linearization ---------------------------------------------------


@dataclass(frozen=True)
class AbelianInstance:
    """Homogeneous integer rows (row . x = 0) plus disequality index pairs."""

    variables: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]
    disequalities: tuple[tuple[int, int], ...]

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable name: {name!r}") from None

    def rows_array(self) -> "np.ndarray":
        """The rows as a read-only int64 matrix, built once and shared; large
        instances pay the tuple conversion only on the first caller."""
        arr = getattr(self, "_arr", None)
        if arr is None:
            arr = np.array(self.rows, dtype=np.int64).reshape(
                len(self.rows), len(self.variables)
            )
            arr.setflags(write=False)
            object.__setattr__(self, "_arr", arr)
        return arr


def linearize_group(flat: FlatInstance) -> AbelianInstance:
    """Rows from graph atoms (and VarEq pairs), in input order; disequalities
    become index pairs.  Coefficient entries stay within {-2,...,2}."""
    if flat.kind != GROUP:
        raise ValueError("linearize_group needs a group-signature instance")
    idx = {v: i for i, v in enumerate(flat.variables)}
    n = len(flat.variables)
    rows: list[tuple[int, ...]] = []
    for atom in flat.atoms:
        row = [0] * n
        if atom.op == "+":
            for a in atom.args:
                row[idx[a]] += 1
            row[idx[atom.result]] -= 1
        elif atom.op == "-":
            row[idx[atom.args[0]]] -= 1
            row[idx[atom.result]] -= 1
        elif atom.op == "0":
            row[idx[atom.result]] += 1
        else:
            raise ValueError(f"non-group atom: {atom.op!r}")
        rows.append(tuple(row))
    for e in flat.equalities:
        row = [0] * n
        row[idx[e.a]] += 1
        row[idx[e.b]] -= 1
        rows.append(tuple(row))
    diseqs = tuple((idx[d.a], idx[d.b]) for d in flat.disequalities)
    return AbelianInstance(flat.variables, tuple(rows), diseqs)
