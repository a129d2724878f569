"""Linear algebra over Z_k (k not necessarily prime).

Row bases are kept in Howell form: echelon, pivot values dividing k, and the
row span closed under multiplication by k/d for every pivot value d.  That
closure is what makes membership testing and back-substitution complete in
the presence of zero divisors; plain Gaussian elimination is not enough
(e.g. over Z_4 the system 2x + y = 1 also forces 2y = 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .backend import kernels


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with g = gcd(a, b) = a*x + b*y."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _unit_for(a: int, k: int) -> int:
    """A unit u of Z_k with u*a == gcd(a, k) mod k."""
    d = math.gcd(a, k)
    ap = a // d
    kd = k // d
    u = pow(ap, -1, kd) if kd > 1 else 1
    while math.gcd(u, k) != 1:
        u += kd
    return u % k


@dataclass(frozen=True)
class ModMatrix:
    """Integer matrix with entries reduced into [0, k)."""

    k: int
    rows: tuple[tuple[int, ...], ...]
    cols: int

    @staticmethod
    def make(k: int, rows, cols: int | None = None) -> "ModMatrix":
        if k < 1:
            raise ValueError("modulus must be >= 1")
        reduced = tuple(tuple(int(x) % k for x in r) for r in rows)
        if cols is None:
            if not reduced:
                raise ValueError("column count required for an empty matrix")
            cols = len(reduced[0])
        for r in reduced:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return ModMatrix(k, reduced, cols)

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.cols)


@dataclass(frozen=True)
class HowellForm:
    """Canonical Howell form: two row sets generate the same span over Z_k
    iff their HowellForms are equal."""

    k: int
    rows: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]


class RowBasis:
    """Incrementally maintained Howell-form basis over Z_k.

    Rows are inserted one at a time; the basis stays echelon with
    annihilator closure throughout, so membership queries and solving are
    valid at any point.  Column order is fixed at construction.
    """

    def __init__(self, k: int, width: int, capacity: int | None = None):
        if k < 1:
            raise ValueError("modulus must be >= 1")
        self.k = k
        self.width = width
        cap = min(width, capacity if capacity is not None else 16) + 1
        self._rows = np.zeros((cap, width), dtype=np.int64)
        self._pivot_row_of_col = np.full(width, -1, dtype=np.int64)
        self._pivot_cols: list[int] = []
        self.nrows = 0

    def _grow(self):
        cap = min(self.width, self._rows.shape[0] * 2)
        grown = np.zeros((cap, self.width), dtype=np.int64)
        grown[: self.nrows] = self._rows[: self.nrows]
        self._rows = grown

    def copy(self) -> "RowBasis":
        other = RowBasis.__new__(RowBasis)
        other.k = self.k
        other.width = self.width
        other._rows = self._rows.copy()
        other._pivot_row_of_col = self._pivot_row_of_col.copy()
        other._pivot_cols = list(self._pivot_cols)
        other.nrows = self.nrows
        return other

    def insert(self, row) -> None:
        if self.k == 1:
            return
        work = [np.asarray(row, dtype=np.int64) % self.k]
        while work:
            r = work.pop()
            while True:
                res = kernels.reduce_row(self._rows, self._pivot_row_of_col, r, self.k)
                if res == -1:
                    break
                if res >= 0:
                    self._install(res, r, work)
                    break
                c = -res - 2
                r = self._gcd_transform(c, r, work)

    def _install(self, c: int, r: np.ndarray, work: list) -> None:
        u = _unit_for(int(r[c]), self.k)
        if u != 1:
            r = (u * r) % self.k
        if self.nrows == self._rows.shape[0]:
            self._grow()
        self._rows[self.nrows] = r
        self._pivot_row_of_col[c] = self.nrows
        self._pivot_cols.append(c)
        self.nrows += 1
        self._push_annihilator(r, c, work)

    def _gcd_transform(self, c: int, r: np.ndarray, work: list) -> np.ndarray:
        """Replace the pivot row at column c so its pivot divides r[c]; returns
        the remainder of r with column c cleared."""
        pr = int(self._pivot_row_of_col[c])
        base = self._rows[pr]
        a = int(base[c])
        b = int(r[c])
        g, x, y = _xgcd(a, b)
        new_pivot = (x * base + y * r) % self.k
        remainder = ((a // g) * r - (b // g) * base) % self.k
        self._rows[pr] = new_pivot
        self._push_annihilator(new_pivot, c, work)
        return remainder

    def _push_annihilator(self, row: np.ndarray, c: int, work: list) -> None:
        d = int(row[c])
        ann = ((self.k // d) * row) % self.k
        if ann.any():
            work.append(ann)

    # -- queries ---------------------------------------------------------

    def contains(self, vec) -> bool:
        """Whether vec lies in the row span."""
        if self.k == 1:
            return True
        r = np.asarray(vec, dtype=np.int64) % self.k
        return kernels.reduce_row(self._rows, self._pivot_row_of_col, r.copy(), self.k) == -1

    def pivot_value(self, c: int) -> Optional[int]:
        pr = int(self._pivot_row_of_col[c])
        return int(self._rows[pr, c]) if pr >= 0 else None

    def generating_rows(self) -> np.ndarray:
        """The stored rows (echelon but not reduced above the pivots); they
        generate the same span as the canonical form."""
        return self._rows[: self.nrows]

    def canonical_rows(self) -> tuple[np.ndarray, list[int]]:
        """Rows sorted by pivot column with entries above each pivot reduced
        mod the pivot value (the canonical Howell form)."""
        cols = sorted(self._pivot_cols)
        out = np.zeros((len(cols), self.width), dtype=np.int64)
        for i, c in enumerate(cols):
            out[i] = self._rows[self._pivot_row_of_col[c]]
        for j, c in enumerate(cols):
            q = out[:j, c] // int(out[j, c])
            nz = np.nonzero(q)[0]
            if nz.size:
                out[nz] = (out[nz] - np.outer(q[nz], out[j])) % self.k
        return out, cols

    def free_columns(self, upto: int) -> list[int]:
        """Columns in [0, upto) holding no pivot."""
        return [c for c in range(upto) if self._pivot_row_of_col[c] < 0]

    def back_substitute(self, rhs_col: int, frees=None) -> Optional[np.ndarray]:
        """Solve the system whose rows are (coefficients | rhs at rhs_col).

        Non-pivot columns default to 0 (frees, a {column: value} mapping,
        overrides that); pivots are processed bottom-up.  Returns the
        solution over the first rhs_col columns, or None when a pivot sits
        in the rhs column.  Completeness of the fixed-free-variables
        strategy relies on the annihilator closure of the basis.
        """
        if self.k == 1:
            return np.zeros(rhs_col, dtype=np.int64)
        if self._pivot_row_of_col[rhs_col] >= 0:
            return None
        x = np.zeros(rhs_col, dtype=np.int64)
        if frees:
            for c, v in frees.items():
                if c >= rhs_col or self._pivot_row_of_col[c] >= 0:
                    raise ValueError(f"column {c} is not free")
                x[c] = v % self.k
        for c in sorted(self._pivot_cols, reverse=True):
            if c >= rhs_col:
                continue
            row = self._rows[self._pivot_row_of_col[c]]
            t = (int(row[rhs_col]) - int(np.dot(row[c + 1 : rhs_col], x[c + 1 :]))) % self.k
            d = int(row[c])
            assert t % d == 0, "incomplete basis"
            x[c] = (t // d) % (self.k // d)
        return x


def howell(m: ModMatrix) -> HowellForm:
    """Canonical Howell form of the row span of m."""
    if m.k == 1:
        return HowellForm(1, (), ())
    basis = RowBasis(m.k, m.cols)
    for r in m.to_array():
        basis.insert(r)
    rows, cols = basis.canonical_rows()
    return HowellForm(m.k, tuple(tuple(int(x) for x in r) for r in rows), tuple(cols))


def kernel_generators(rows: np.ndarray, n: int, k: int) -> list[np.ndarray]:
    """Generating set of {v in Z_k^n : A v = 0} for the matrix with the given
    rows (any generating set of the row span works).

    Computed as the rows of Howell([H^T | I_n]) whose H^T block vanishes,
    H a Howell basis of A; those suffixes generate the kernel.
    """
    if k == 1 or n == 0:
        return []
    hb = RowBasis(k, n)
    for r in rows:
        hb.insert(r)
    h, _ = hb.canonical_rows()
    r0 = h.shape[0]
    aug = RowBasis(k, r0 + n)
    block = np.zeros(r0 + n, dtype=np.int64)
    for i in range(n):
        block[:r0] = h[:, i]
        block[r0:] = 0
        block[r0 + i] = 1
        aug.insert(block)
    out, _ = aug.canonical_rows()
    gens = []
    for r in out:
        if not r[:r0].any():
            gens.append(r[r0:].copy())
    return gens


@dataclass(frozen=True)
class AffineSystem:
    """A x = b over Z_k with named columns."""

    a: ModMatrix
    b: tuple[int, ...]
    variables: tuple[str, ...]

    @staticmethod
    def make(k: int, rows, b, variables) -> "AffineSystem":
        variables = tuple(variables)
        m = ModMatrix.make(k, rows, cols=len(variables))
        b = tuple(int(x) % k for x in b)
        if len(b) != len(m.rows):
            raise ValueError("right-hand side length mismatch")
        return AffineSystem(m, b, variables)

    @property
    def k(self) -> int:
        return self.a.k

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable name: {name!r}") from None


@dataclass(frozen=True)
class SolutionDescription:
    """particular + integer combinations of generators = all solutions."""

    particular: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]


def _augmented_basis(system: AffineSystem) -> RowBasis:
    n = len(system.variables)
    basis = RowBasis(system.k, n + 1)
    arr = system.a.to_array()
    for i in range(arr.shape[0]):
        row = np.empty(n + 1, dtype=np.int64)
        row[:n] = arr[i]
        row[n] = system.b[i]
        basis.insert(row)
    return basis


def solve(system: AffineSystem):
    """A particular solution plus a kernel description, or None if unsolvable."""
    n = len(system.variables)
    basis = _augmented_basis(system)
    x = basis.back_substitute(n)
    if x is None:
        return None
    rows, _ = basis.canonical_rows()
    gens = kernel_generators(rows[:, :n], n, system.k)
    particular = tuple(int(v) for v in x)
    description = SolutionDescription(
        particular, tuple(tuple(int(v) for v in g) for g in gens)
    )
    return particular, description


def entails_equal(system: AffineSystem, x: str, y: str) -> bool:
    """Whether every solution of the system has x == y (vacuously true when
    the system is unsolvable)."""
    ix, iy = system.index(x), system.index(y)
    if ix == iy or system.k == 1:
        return True
    n = len(system.variables)
    basis = _augmented_basis(system)
    if basis.back_substitute(n) is None:
        return True
    return _entails_indices(basis, n, ix, iy)


def _entails_indices(basis: RowBasis, n: int, ix: int, iy: int) -> bool:
    """x_ix == x_iy on all solutions, given the augmented [A|b] basis.

    Uses the duality between solution-set functionals and the row span over
    Z_k: the difference functional is constant zero iff (e_ix - e_iy | 0)
    lies in the span of [A | b]."""
    if ix == iy or basis.k == 1:
        return True
    v = np.zeros(n + 1, dtype=np.int64)
    v[ix] = 1
    v[iy] = basis.k - 1
    return basis.contains(v)
