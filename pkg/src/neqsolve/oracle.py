"""Independent brute-force ground truth and random instance generation.

Everything here is deliberately separate from the solver path: the
backtracking search works directly on finite structures, embeddability is
decided from invariant factors with an exhaustive cross-check, and the
generator is seed-deterministic so differential campaigns are replayable.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .terms import (
    GROUP,
    SEMILATTICE,
    AbelianInstance,
    Eq,
    Instance,
    Meet,
    Neg,
    Neq,
    Signature,
    Sum,
    Term,
    Var,
    Zero,
)
from .verdict import BUDGET, SAT, UNSAT, GroupWitness, Verdict

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups Z_m1 (+) ... (+) Z_md, elements as tuples."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if any(m < 1 for m in self.moduli):
            raise ValueError("moduli must be >= 1")

    @property
    def size(self) -> int:
        return math.prod(self.moduli)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def scale(self, c: int, a):
        return tuple((c * x) % m for x, m in zip(a, self.moduli))

    def decode(self, g: int) -> tuple[int, ...]:
        out = []
        for m in self.moduli:
            out.append(g % m)
            g //= m
        return tuple(out)

    def elements(self):
        for g in range(self.size):
            yield self.decode(g)


def _group_tables(group: FiniteAbelianGroup):
    """Element component table, per-component inverse table, radix strides."""
    moduli = np.array(group.moduli, dtype=np.int64)
    d = len(group.moduli)
    G = group.size
    strides = np.ones(d, dtype=np.int64)
    for c in range(1, d):
        strides[c] = strides[c - 1] * moduli[c - 1]
    idx = np.arange(G, dtype=np.int64)
    elem_comp = np.zeros((G, d), dtype=np.int64)
    for c in range(d):
        elem_comp[:, c] = (idx // strides[c]) % moduli[c]
    maxm = int(moduli.max()) if d else 1
    inv_tbl = np.full((d, maxm), -1, dtype=np.int64)
    for c in range(d):
        m = int(moduli[c])
        if m == 1:
            inv_tbl[c, 0] = 0
            continue
        for a in range(m):
            if math.gcd(a, m) == 1:
                inv_tbl[c, a] = pow(a, -1, m)
    return moduli, elem_comp, inv_tbl, strides


def _csr(pairs_per_key: list[list], width: int):
    ptr = np.zeros(width + 1, dtype=np.int64)
    flat: list = []
    for v in range(width):
        ptr[v + 1] = ptr[v] + len(pairs_per_key[v])
        flat.extend(pairs_per_key[v])
    return ptr, flat


def brute_solve_group(
    group: FiniteAbelianGroup, inst: AbelianInstance, budget: int = DEFAULT_BUDGET
) -> Verdict:
    """Exact backtracking (declared variable order, ascending element index,
    unit-row propagation) over assignments into `group`.

    Budget exhaustion is its own status, never unsat.  A sat verdict carries
    the assignment as a verified witness.
    """
    n = len(inst.variables)
    moduli, elem_comp, inv_tbl, strides = _group_tables(group)

    rows = [r for r in inst.rows if any(r)]
    row_var: list[int] = []
    row_coef: list[int] = []
    row_start = np.zeros(len(rows) + 1, dtype=np.int64)
    per_var_rows: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for ri, r in enumerate(rows):
        for v, c in enumerate(r):
            if c:
                row_var.append(v)
                row_coef.append(c)
                per_var_rows[v].append((ri, c))
        row_start[ri + 1] = len(row_var)
    vr_ptr, vr_flat = _csr(per_var_rows, n)
    vr_row = np.array([x[0] for x in vr_flat], dtype=np.int64)
    vr_coef = np.array([x[1] for x in vr_flat], dtype=np.int64)

    dis_a = np.array([a for a, _ in inst.disequalities], dtype=np.int64)
    dis_b = np.array([b for _, b in inst.disequalities], dtype=np.int64)
    per_var_dis: list[list[int]] = [[] for _ in range(n)]
    for di, (a, b) in enumerate(inst.disequalities):
        per_var_dis[a].append(di)
        if b != a:
            per_var_dis[b].append(di)
    vd_ptr, vd_flat = _csr(per_var_dis, n)
    vd_idx = np.array(vd_flat, dtype=np.int64)

    status, val, _nodes = kernels.group_search(
        moduli,
        elem_comp,
        inv_tbl,
        strides,
        row_start,
        np.array(row_var, dtype=np.int64),
        np.array(row_coef, dtype=np.int64),
        vr_ptr,
        vr_row,
        vr_coef,
        dis_a,
        dis_b,
        vd_ptr,
        vd_idx,
        budget,
    )
    if status == 2:
        return Verdict(BUDGET)
    if status == 1:
        return Verdict(UNSAT)
    head = tuple(tuple(int(x) for x in elem_comp[int(val[v])]) for v in range(n))
    witness = GroupWitness(
        layer_modulus=1,
        head_moduli=group.moduli,
        variables=inst.variables,
        head=head,
        layers=((),) * n,
    )
    assert witness.verify(inst)
    return Verdict(SAT, witness=witness)


def naive_solve_group(group: FiniteAbelianGroup, inst: AbelianInstance):
    """Full enumeration without propagation; cross-check for the backtracker
    at tiny sizes.  Returns the first satisfying assignment (element indexes,
    lexicographic order) or None."""
    n = len(inst.variables)
    elems = list(group.elements())
    for combo in itertools.product(range(group.size), repeat=n):
        vals = [elems[g] for g in combo]
        ok = True
        for r in inst.rows:
            acc = group.zero
            for v, c in enumerate(r):
                if c:
                    acc = group.add(acc, group.scale(c, vals[v]))
            if acc != group.zero:
                ok = False
                break
        if ok:
            for a, b in inst.disequalities:
                if vals[a] == vals[b]:
                    ok = False
                    break
        if ok:
            return list(combo)
    return None


# -- term-level evaluation (independent of flattening) ----------------------


def eval_term_group(t: Term, assignment: dict, group: FiniteAbelianGroup):
    if isinstance(t, Var):
        return assignment[t.name]
    if isinstance(t, Zero):
        return group.zero
    if isinstance(t, Sum):
        return group.add(
            eval_term_group(t.left, assignment, group),
            eval_term_group(t.right, assignment, group),
        )
    if isinstance(t, Neg):
        return group.neg(eval_term_group(t.arg, assignment, group))
    raise TypeError(f"not a group term: {t!r}")


def instance_holds_group(inst: Instance, assignment: dict, group: FiniteAbelianGroup) -> bool:
    for c in inst.constraints:
        lv = eval_term_group(c.lhs, assignment, group)
        rv = eval_term_group(c.rhs, assignment, group)
        if isinstance(c, Eq):
            if lv != rv:
                return False
        elif lv == rv:
            return False
    return True


def solve_instance_by_enumeration(inst: Instance, group: FiniteAbelianGroup):
    """Term-level enumeration over the original variables only (no fresh
    variables); oracle for flattening soundness."""
    elems = list(group.elements())
    for combo in itertools.product(elems, repeat=len(inst.variables)):
        assignment = dict(zip(inst.variables, combo))
        if instance_holds_group(inst, assignment, group):
            return assignment
    return None


# -- embeddability ----------------------------------------------------------


def _prime_partitions(moduli) -> dict[int, list[int]]:
    """prime -> sorted-descending exponents of the p-primary cyclic factors."""
    parts: dict[int, list[int]] = {}
    for m in moduli:
        x = m
        f = 2
        while f * f <= x:
            if x % f == 0:
                e = 0
                while x % f == 0:
                    x //= f
                    e += 1
                parts.setdefault(f, []).append(e)
            f += 1
        if x > 1:
            parts.setdefault(x, []).append(1)
    for p in parts:
        parts[p].sort(reverse=True)
    return parts


def _embeds_by_invariants(g1: FiniteAbelianGroup, g2: FiniteAbelianGroup) -> bool:
    p1 = _prime_partitions(g1.moduli)
    p2 = _prime_partitions(g2.moduli)
    for p, lam in p1.items():
        mu = p2.get(p, [])
        if len(lam) > len(mu):
            return False
        if any(l > m for l, m in zip(lam, mu)):
            return False
    return True


def _embeds_by_search(g1: FiniteAbelianGroup, g2: FiniteAbelianGroup) -> bool:
    """Exhaustive injective-homomorphism search; feasible for |g| <= 16."""
    gens = [m for m in g1.moduli if m > 1]
    if not gens:
        return True
    elems2 = list(g2.elements())
    candidates = []
    for m in gens:
        candidates.append([h for h in elems2 if g2.scale(m, h) == g2.zero])
    for images in itertools.product(*candidates):
        seen = set()
        injective = True
        for coeffs in itertools.product(*(range(m) for m in gens)):
            acc = g2.zero
            for c, h in zip(coeffs, images):
                acc = g2.add(acc, g2.scale(c, h))
            if acc in seen:
                injective = False
                break
            seen.add(acc)
        if injective:
            return True
    return False


def brute_embeddable(g1: FiniteAbelianGroup, g2: FiniteAbelianGroup) -> bool:
    """Whether g1 embeds into g2.  Decided from per-prime invariant factors;
    cross-checked against exhaustive search when both groups are small."""
    ans = _embeds_by_invariants(g1, g2)
    if g1.size <= 16 and g2.size <= 16:
        assert ans == _embeds_by_search(g1, g2), (g1, g2)
    return ans


# -- random instances --------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    variables: int
    equations: int
    disequalities: int
    seed: int
    depth: int = 2


def random_instance(params: GenParams, kind: str) -> Instance:
    """Seed-deterministic random instance; identical params and kind
    reproduce the instance exactly."""
    if kind not in (GROUP, SEMILATTICE):
        raise ValueError(f"unknown kind: {kind!r}")
    rng = random.Random(params.seed)
    names = [f"x{i + 1}" for i in range(params.variables)]
    if not names and kind == SEMILATTICE and (params.equations or params.disequalities):
        raise ValueError("semilattice constraints need at least one variable")

    def term(depth: int) -> Term:
        if depth == 0 or rng.random() < 0.45:
            if kind == GROUP and (not names or rng.random() < 0.15):
                return Zero()
            return Var(rng.choice(names))
        if kind == GROUP:
            if rng.random() < 0.35:
                return Neg(term(depth - 1))
            return Sum(term(depth - 1), term(depth - 1))
        return Meet(term(depth - 1), term(depth - 1))

    constraints = []
    for _ in range(params.equations):
        constraints.append(Eq(term(params.depth), term(params.depth)))
    for _ in range(params.disequalities):
        if names and rng.random() < 0.5:
            constraints.append(Neq(Var(rng.choice(names)), Var(rng.choice(names))))
        else:
            constraints.append(Neq(term(params.depth), term(params.depth)))
    return Instance.make(Signature(kind), names, constraints)


def campaign_params(
    master_seed: int,
    count: int,
    max_variables: int,
    max_equations: int,
    max_disequalities: int,
) -> list[GenParams]:
    """Deterministic per-instance parameters for a differential campaign."""
    rng = random.Random(master_seed)
    out = []
    for _ in range(count):
        out.append(
            GenParams(
                variables=rng.randint(1, max_variables),
                equations=rng.randint(0, max_equations),
                disequalities=rng.randint(0, max_disequalities),
                seed=rng.getrandbits(32),
                depth=rng.choice([1, 1, 2]),
            )
        )
    return out


def witness_group(cls, n_disequalities: int) -> FiniteAbelianGroup:
    """Finite group whose satisfiability matches the tractable structure on
    instances with at most n_disequalities disequalities: a Z_{2m} head when
    the double layer is present, one Z_m layer per disequality."""
    m = cls.m
    moduli = ((2 * m,) if cls.with_double else ()) + (m,) * n_disequalities
    return FiniteAbelianGroup(moduli or (1,))
