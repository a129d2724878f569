"""Deciding meet-semilattice instances over the universal homogeneous
semilattice, plus finite-semilattice ground truth.

Each disequality x != y is satisfiable together with the equation part iff
one of the two boolean Horn systems (equations + x=1,y=0, or + x=0,y=1) is;
satisfying branches become coordinates of a witness in the semilattice of
subsets of {1..m} under intersection.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .backend import kernels
from .terms import SEMILATTICE, FlatInstance, Instance, Neq, Eq, SIG_SEMILATTICE, Term, term_variables, flatten
from .verdict import BUDGET, R_ENTAILED, SAT, UNSAT, SemilatticeWitness, Verdict


@dataclass(frozen=True)
class HornProblem:
    """Boolean constraints: z = x & y for each meet, fixed literals, and
    variable links (forced equalities)."""

    variables: tuple[str, ...]
    meets: tuple[tuple[str, str, str], ...]  # (result, left, right)
    ones: tuple[str, ...] = ()
    zeros: tuple[str, ...] = ()
    links: tuple[tuple[str, str], ...] = ()


def horn_solve(p: HornProblem) -> Optional[dict[str, bool]]:
    """Pointwise-minimal satisfying assignment, or None on conflict.

    The meet constraints split into definite rules (z -> x, z -> y,
    x & y -> z); links propagate both ways.  The least fixpoint over the
    `ones` facts is minimal among all models, so a conflict with a zero
    literal there refutes the whole system.
    """
    declared = set(p.variables)
    for z, x, y in p.meets:
        if not {z, x, y} <= declared:
            raise ValueError("meet over undeclared variable")
    for a, b in p.links:
        if a not in declared or b not in declared:
            raise ValueError("link over undeclared variable")
    if not (set(p.ones) <= declared and set(p.zeros) <= declared):
        raise ValueError("literal over undeclared variable")

    true: set[str] = set(p.ones)
    changed = True
    while changed:
        changed = False
        for z, x, y in p.meets:
            if z in true and (x not in true or y not in true):
                true.add(x)
                true.add(y)
                changed = True
            if x in true and y in true and z not in true:
                true.add(z)
                changed = True
        for a, b in p.links:
            if (a in true) != (b in true):
                true.add(a)
                true.add(b)
                changed = True
    if true & set(p.zeros):
        return None
    model = {v: (v in true) for v in p.variables}
    for z, x, y in p.meets:
        assert model[z] == (model[x] and model[y])
    return model


def _horn_base(flat: FlatInstance) -> HornProblem:
    if flat.kind != SEMILATTICE:
        raise ValueError("semilattice solver needs a semilattice-signature instance")
    meets = []
    for atom in flat.atoms:
        if atom.op != "meet":
            raise ValueError(f"non-semilattice atom: {atom.op!r}")
        meets.append((atom.result, atom.args[0], atom.args[1]))
    links = tuple((e.a, e.b) for e in flat.equalities)
    return HornProblem(flat.variables, tuple(meets), links=links)


def solve_U(flat: FlatInstance) -> Verdict:
    """Satisfiability over the universal homogeneous semilattice.

    Tries the (x=1, y=0) branch first for each disequality and records the
    first satisfiable branch; if both fail the equations entail x = y and
    the instance is unsatisfiable.  Sat verdicts carry a subset witness with
    coordinate i separating disequality i."""
    base = _horn_base(flat)
    branches: list[dict[str, bool]] = []
    for d in flat.disequalities:
        picked = None
        for ones, zeros in (((d.a,), (d.b,)), ((d.b,), (d.a,))):
            model = horn_solve(
                HornProblem(base.variables, base.meets, ones=ones, zeros=zeros, links=base.links)
            )
            if model is not None:
                picked = model
                break
        if picked is None:
            return Verdict(UNSAT, reason=R_ENTAILED, pair=(d.a, d.b))
        branches.append(picked)
    m = len(branches)
    sets = tuple(
        frozenset(i + 1 for i, h in enumerate(branches) if h[v]) for v in flat.variables
    )
    w = SemilatticeWitness(m, flat.variables, sets)
    assert w.verify(flat)
    return Verdict(SAT, witness=w)


# -- finite semilattices ------------------------------------------------------


@dataclass(frozen=True)
class FiniteSemilattice:
    """A finite meet-semilattice: element labels plus a meet index table."""

    elements: tuple
    table: tuple[tuple[int, ...], ...]

    @staticmethod
    def make(elements, table) -> "FiniteSemilattice":
        elements = tuple(elements)
        n = len(elements)
        if len(set(elements)) != n:
            raise ValueError("duplicate elements")
        tbl = tuple(tuple(int(x) for x in row) for row in table)
        if len(tbl) != n or any(len(r) != n for r in tbl):
            raise ValueError("meet table must be n x n")
        if any(x < 0 or x >= n for r in tbl for x in r):
            raise ValueError("meet table entry out of range")
        t = np.array(tbl, dtype=np.int64)
        if n:
            if not np.array_equal(t, t.T):
                raise ValueError("meet is not commutative")
            if not np.array_equal(np.diagonal(t), np.arange(n)):
                raise ValueError("meet is not idempotent")
            if not np.array_equal(t[t, :], t[:, t]):
                raise ValueError("meet is not associative")
        return FiniteSemilattice(elements, tbl)

    @property
    def size(self) -> int:
        return len(self.elements)

    def np_table(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64).reshape(self.size, self.size)

    def meet(self, i: int, j: int) -> int:
        return self.table[i][j]

    def le(self, i: int, j: int) -> bool:
        return self.table[i][j] == i

    @staticmethod
    def subsets(n: int) -> "FiniteSemilattice":
        """All subsets of {1..n} under intersection; element g is the subset
        whose members are the set bits of g (plus one)."""
        size = 1 << n
        elements = tuple(
            frozenset(i + 1 for i in range(n) if g >> i & 1) for g in range(size)
        )
        masks = np.arange(size)
        table = masks[:, None] & masks[None, :]
        return FiniteSemilattice.make(elements, table.tolist())


def parse_semilattice(text: str) -> FiniteSemilattice:
    """Text format: one `elements` line, then `meet a b c` lines (c = a ^ b)
    covering every unordered pair."""
    elements: list[str] = []
    idx: dict[str, int] = {}
    pending: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        hash_at = raw.find("#")
        if hash_at >= 0:
            raw = raw[:hash_at]
        toks = raw.split()
        if not toks:
            continue
        if toks[0] == "elements":
            if elements:
                raise ValueError(f"line {lineno}: duplicate elements line")
            for name in toks[1:]:
                if name in idx:
                    raise ValueError(f"line {lineno}: duplicate element {name!r}")
                idx[name] = len(elements)
                elements.append(name)
        elif toks[0] == "meet":
            if len(toks) != 4:
                raise ValueError(f"line {lineno}: expected 'meet a b c'")
            try:
                a, b, c = (idx[t] for t in toks[1:])
            except KeyError as e:
                raise ValueError(f"line {lineno}: unknown element {e.args[0]!r}") from None
            key = (min(a, b), max(a, b))
            if key in pending and pending[key] != c:
                raise ValueError(f"line {lineno}: conflicting meet for {toks[1]}, {toks[2]}")
            pending[key] = c
        else:
            raise ValueError(f"line {lineno}: unknown directive {toks[0]!r}")
    n = len(elements)
    table = [[-1] * n for _ in range(n)]
    for (a, b), c in pending.items():
        table[a][b] = c
        table[b][a] = c
    for i in range(n):
        for j in range(n):
            if table[i][j] < 0:
                raise ValueError(f"meet of {elements[i]!r} and {elements[j]!r} not given")
    return FiniteSemilattice.make(elements, table)


def format_semilattice(s: FiniteSemilattice) -> str:
    names = [str(e) for e in s.elements]
    lines = ["elements " + " ".join(names)]
    for i in range(s.size):
        for j in range(i, s.size):
            lines.append(f"meet {names[i]} {names[j]} {names[s.table[i][j]]}")
    return "\n".join(lines) + "\n"


@functools.lru_cache(maxsize=16)
def _subset_images(s: FiniteSemilattice) -> dict:
    n = s.size
    images = {}
    for i, e in enumerate(s.elements):
        images[e] = frozenset(j + 1 for j in range(n) if s.le(j, i))
    assert len(set(images.values())) == n, "embedding not injective"
    for i in range(n):
        for j in range(n):
            lhs = images[s.elements[s.meet(i, j)]]
            rhs = images[s.elements[i]] & images[s.elements[j]]
            assert lhs == rhs, "embedding does not preserve meets"
    return images


def embed_into_subsets(s: FiniteSemilattice) -> dict:
    """Meet-preserving injection of s into the subsets of {1..n} under
    intersection: x maps to the images of the elements below it.  Both
    properties are re-checked exhaustively (once per lattice, cached)."""
    return dict(_subset_images(s))


def solve_finite(s: FiniteSemilattice, flat: FlatInstance, budget: int = 10_000_000) -> Verdict:
    """Exact backtracking over assignments into s (declared variable order,
    ascending element index, propagation of determined meets).  Sat witnesses
    are transported through embed_into_subsets."""
    if flat.kind != SEMILATTICE:
        raise ValueError("solve_finite needs a semilattice-signature instance")
    vid = {v: i for i, v in enumerate(flat.variables)}
    nvars = len(flat.variables)

    meets = []
    for atom in flat.atoms:
        if atom.op != "meet":
            raise ValueError(f"non-semilattice atom: {atom.op!r}")
        meets.append((vid[atom.result], vid[atom.args[0]], vid[atom.args[1]]))
    eqs = [(vid[e.a], vid[e.b]) for e in flat.equalities]
    nes = [(vid[d.a], vid[d.b]) for d in flat.disequalities]

    def per_var(items, positions):
        out: list[list[int]] = [[] for _ in range(nvars)]
        for i, item in enumerate(items):
            for v in sorted({item[p] for p in positions}):
                out[v].append(i)
        ptr = np.zeros(nvars + 1, dtype=np.int64)
        flatlist: list[int] = []
        for v in range(nvars):
            ptr[v + 1] = ptr[v] + len(out[v])
            flatlist.extend(out[v])
        return ptr, np.array(flatlist, dtype=np.int64)

    vm_ptr, vm_idx = per_var(meets, (0, 1, 2))
    ve_ptr, ve_idx = per_var(eqs, (0, 1))
    vn_ptr, vn_idx = per_var(nes, (0, 1))

    def col(items, p):
        return np.array([it[p] for it in items], dtype=np.int64)

    status, val, _nodes = kernels.semilattice_search(
        s.np_table(),
        col(meets, 0), col(meets, 1), col(meets, 2), vm_ptr, vm_idx,
        col(eqs, 0), col(eqs, 1), ve_ptr, ve_idx,
        col(nes, 0), col(nes, 1), vn_ptr, vn_idx,
        nvars, budget,
    )
    if status == 2:
        return Verdict(BUDGET)
    if status == 1:
        return Verdict(UNSAT)
    images = embed_into_subsets(s)
    sets = tuple(images[s.elements[int(val[i])]] for i in range(nvars))
    w = SemilatticeWitness(s.size, flat.variables, sets)
    assert w.verify(flat)
    return Verdict(SAT, witness=w)


# -- boolean front-ends --------------------------------------------------------


def check_identity_semilattice(s: Term, t: Term) -> bool:
    """Whether s = t holds under every assignment into the universal
    semilattice (equivalently, in every semilattice)."""
    names = term_variables(s)
    term_variables(t, names)
    inst = Instance.make(SIG_SEMILATTICE, names, [Neq(s, t)])
    return solve_U(flatten(inst)).status == UNSAT


def check_entailment_semilattice(equations, goal: tuple[Term, Term]) -> bool:
    names: list[str] = []
    constraints = []
    for lhs, rhs in equations:
        term_variables(lhs, names)
        term_variables(rhs, names)
        constraints.append(Eq(lhs, rhs))
    term_variables(goal[0], names)
    term_variables(goal[1], names)
    constraints.append(Neq(goal[0], goal[1]))
    inst = Instance.make(SIG_SEMILATTICE, names, constraints)
    return solve_U(flatten(inst)).status == UNSAT
