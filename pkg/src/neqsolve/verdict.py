"""Solver results: verdict statuses and verifiable witnesses.

A sat verdict always carries a witness that re-checks against the instance;
solvers verify before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .terms import AbelianInstance, FlatInstance

SAT = "sat"
UNSAT = "unsat"
BUDGET = "budget-exhausted"

R_EQUATIONS = "equations-unsolvable"
R_ENTAILED = "disequality-entailed"
R_DOUBLE = "double-layer-unsolvable"
R_FINITE = "finite-part-exhausted"


def _row_dots(nrows, r_idx, c_idx, coeff, x):
    """rows @ x accumulated over the nonzero row entries; rows from flattened
    instances have at most a handful of nonzeros each, so this beats the
    dense product by orders of magnitude at scale."""
    acc = np.zeros((nrows, x.shape[1]), dtype=np.int64)
    np.add.at(acc, r_idx, coeff[:, None] * x[c_idx])
    return acc


@dataclass(frozen=True)
class GroupWitness:
    """Per-variable element of Z_h1 (+) ... (+) Z_hr (+) Z_m^K.

    head_moduli lists the finite cyclic part (h1..hr, empty when none);
    layers hold one Z_m coordinate per separated disequality.
    """

    layer_modulus: int
    head_moduli: tuple[int, ...]
    variables: tuple[str, ...]
    head: tuple[tuple[int, ...], ...]
    layers: tuple[tuple[int, ...], ...]

    def verify(self, inst: AbelianInstance) -> bool:
        n = len(self.variables)
        if inst.variables != self.variables:
            return False
        head = np.array(self.head, dtype=np.int64).reshape(n, len(self.head_moduli))
        k = len(self.layers[0]) if n else 0
        layers = np.array(self.layers, dtype=np.int64).reshape(n, k)
        if inst.rows:
            rows = inst.rows_array()
            r_idx, c_idx = np.nonzero(rows)
            coeff = rows[r_idx, c_idx]
            if self.head_moduli:
                hm = np.array(self.head_moduli, dtype=np.int64)
                if np.any(_row_dots(rows.shape[0], r_idx, c_idx, coeff, head) % hm != 0):
                    return False
            if k:
                sums = _row_dots(rows.shape[0], r_idx, c_idx, coeff, layers)
                if np.any(sums % self.layer_modulus != 0):
                    return False
        for a, b in inst.disequalities:
            if np.array_equal(head[a], head[b]) and np.array_equal(layers[a], layers[b]):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "layer_modulus": self.layer_modulus,
            "head_moduli": list(self.head_moduli),
            "assignment": {
                v: {"head": list(map(int, self.head[i])), "layers": list(map(int, self.layers[i]))}
                for i, v in enumerate(self.variables)
            },
        }


@dataclass(frozen=True)
class SemilatticeWitness:
    """Per-variable subset of {1..m}, meet = intersection; coordinate i
    separates disequality i."""

    m: int
    variables: tuple[str, ...]
    sets: tuple[frozenset[int], ...]

    def verify(self, flat: FlatInstance) -> bool:
        if flat.variables != self.variables:
            return False
        at = {v: self.sets[i] for i, v in enumerate(self.variables)}
        for atom in flat.atoms:
            if atom.op != "meet":
                return False
            if at[atom.result] != (at[atom.args[0]] & at[atom.args[1]]):
                return False
        for e in flat.equalities:
            if at[e.a] != at[e.b]:
                return False
        for d in flat.disequalities:
            if at[d.a] == at[d.b]:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "kind": "subsets",
            "m": self.m,
            "assignment": {v: sorted(self.sets[i]) for i, v in enumerate(self.variables)},
        }


Witness = Union[GroupWitness, SemilatticeWitness]


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Optional[Witness] = None
    reason: Optional[str] = None
    pair: Optional[tuple[str, str]] = None

    @property
    def is_sat(self) -> bool:
        return self.status == SAT
