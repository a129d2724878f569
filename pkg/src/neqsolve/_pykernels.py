"""Pure-python fallback for the hot loops in neqsolve._ckernels.

Same call signatures and semantics as the compiled module; used when the
extension is unavailable.  numpy is allowed here (it is a hard dependency);
"pure" only means no compiled extension of our own.
"""

from __future__ import annotations

import math

import numpy as np

COMPILED = False

OK = 0
CONFLICT = 1


def reduce_row(basis, pivot_row_of_col, row, k):
    """Reduce `row` (mutated in place) against an echelon row basis over Z_k.

    basis: int64 2D array; pivot_row_of_col[c] = index of the basis row whose
    leading entry sits at column c, or -1.

    Returns -1 if the row reduced to zero, c >= 0 if column c has no pivot
    (caller installs the row there), or -(c+2) if the pivot at column c does
    not divide row[c] (caller performs the gcd transform).
    """
    c = 0
    while True:
        nz = np.nonzero(row[c:])[0]
        if nz.size == 0:
            return -1
        c += int(nz[0])
        pr = int(pivot_row_of_col[c])
        if pr < 0:
            return c
        a = int(basis[pr, c])
        b = int(row[c])
        if b % a != 0:
            return -(c + 2)
        q = b // a
        row[c:] = (row[c:] - q * basis[pr, c:]) % k
        c += 1


class _GroupState:
    """Assignment state for the finite-abelian-group backtracker: per-row
    partial sums and unassigned counts, with a trail for undo."""

    def __init__(self, moduli, elem_comp, inv_tbl, strides, row_start, row_var, row_coef,
                 vr_ptr, vr_row, vr_coef, dis_a, dis_b, vd_ptr, vd_idx):
        self.moduli = moduli
        self.elem_comp = elem_comp
        self.inv_tbl = inv_tbl
        self.strides = strides
        self.row_start = row_start
        self.row_var = row_var
        self.row_coef = row_coef
        self.vr_ptr = vr_ptr
        self.vr_row = vr_row
        self.vr_coef = vr_coef
        self.dis_a = dis_a
        self.dis_b = dis_b
        self.vd_ptr = vd_ptr
        self.vd_idx = vd_idx
        self.d = len(moduli)
        self.G = elem_comp.shape[0]
        self.V = len(vr_ptr) - 1
        R = len(row_start) - 1
        self.val = np.full(self.V, -1, dtype=np.int64)
        self.row_t = np.zeros((R, self.d), dtype=np.int64)
        self.row_un = np.array(
            [row_start[r + 1] - row_start[r] for r in range(R)], dtype=np.int64
        )
        self.trail: list[int] = []
        self.pending: list[int] = []
        self.nodes = 0

    def assign(self, v, g):
        """Place v := g, update rows, queue newly-unit rows; returns CONFLICT
        on a violated row or disequality."""
        self.nodes += 1
        self.val[v] = g
        self.trail.append(v)
        comp = self.elem_comp[g]
        status = OK
        for p in range(self.vr_ptr[v], self.vr_ptr[v + 1]):
            r = self.vr_row[p]
            self.row_t[r] = (self.row_t[r] + self.vr_coef[p] * comp) % self.moduli
            self.row_un[r] -= 1
            if self.row_un[r] == 0:
                if self.row_t[r].any():
                    status = CONFLICT
            elif self.row_un[r] == 1:
                self.pending.append(r)
        if status == OK:
            for p in range(self.vd_ptr[v], self.vd_ptr[v + 1]):
                di = self.vd_idx[p]
                a, b = self.dis_a[di], self.dis_b[di]
                if a == b:
                    return CONFLICT
                other = a if b == v else b
                if self.val[other] == g:
                    return CONFLICT
        return status

    def propagate(self):
        """Fire unit rows: a row with one unassigned variable either forces a
        unique value (assigned immediately, cascading) or, when unsolvable,
        conflicts.  Rows that stay ambiguous are re-checked when they close."""
        while self.pending:
            r = self.pending.pop()
            if self.row_un[r] != 1:
                continue
            u = -1
            cu = 0
            for p in range(self.row_start[r], self.row_start[r + 1]):
                if self.val[self.row_var[p]] < 0:
                    u = self.row_var[p]
                    cu = self.row_coef[p]
                    break
            g = 0
            unique = True
            for c in range(self.d):
                m = int(self.moduli[c])
                ce = cu % m
                t = int(self.row_t[r, c])
                inv = int(self.inv_tbl[c, ce])
                if inv < 0:
                    if t % math.gcd(ce, m) != 0:
                        return CONFLICT
                    unique = False
                    break
                g += ((-t * inv) % m) * int(self.strides[c])
            if unique:
                if self.assign(u, g) == CONFLICT:
                    return CONFLICT
        return OK

    def undo_to(self, mark):
        while len(self.trail) > mark:
            v = self.trail.pop()
            g = int(self.val[v])
            comp = self.elem_comp[g]
            for p in range(self.vr_ptr[v], self.vr_ptr[v + 1]):
                r = self.vr_row[p]
                self.row_t[r] = (self.row_t[r] - self.vr_coef[p] * comp) % self.moduli
                self.row_un[r] += 1
            self.val[v] = -1
        self.pending.clear()


def group_search(moduli, elem_comp, inv_tbl, strides, row_start, row_var, row_coef,
                 vr_ptr, vr_row, vr_coef, dis_a, dis_b, vd_ptr, vd_idx, budget):
    """Backtracking with unit propagation over assignments into the finite
    abelian group with the given cyclic moduli.

    Branching follows variable index order (propagated variables are skipped),
    values ascend through element indexes 0..G-1; element g has components
    (g // strides[c]) % moduli[c].  Returns (status, val, nodes) with status
    0 sat / 1 unsat / 2 budget; nodes counts assignments (including undone
    and propagated ones).
    """
    st = _GroupState(moduli, elem_comp, inv_tbl, strides, row_start, row_var, row_coef,
                     vr_ptr, vr_row, vr_coef, dis_a, dis_b, vd_ptr, vd_idx)
    G = st.G

    # ground rows (no variables) were filtered by the caller; seed the queue
    # with rows that start out unit
    for r in range(len(row_start) - 1):
        if st.row_un[r] == 1:
            st.pending.append(r)
        elif st.row_un[r] == 0 and st.row_t[r].any():
            return 1, st.val, st.nodes
    if st.propagate() == CONFLICT:
        return 1, st.val, st.nodes

    stack: list[tuple[int, int, int]] = []  # (variable, next value, trail mark)

    def first_unassigned():
        for v in range(st.V):
            if st.val[v] < 0:
                return v
        return -1

    v = first_unassigned()
    if v < 0:
        return 0, st.val, st.nodes
    stack.append((v, 0, len(st.trail)))

    while stack:
        v, g, mark = stack[-1]
        st.undo_to(mark)
        found = False
        while g < G:
            if st.assign(v, g) == OK and st.propagate() == OK:
                found = True
                break
            st.undo_to(mark)
            g += 1
            if st.nodes > budget:
                return 2, st.val, st.nodes
        if found:
            stack[-1] = (v, g + 1, mark)
            if st.nodes > budget:
                return 2, st.val, st.nodes
            nxt = first_unassigned()
            if nxt < 0:
                return 0, st.val, st.nodes
            stack.append((nxt, 0, len(st.trail)))
        else:
            stack.pop()
    return 1, st.val, st.nodes


class _LatticeState:
    def __init__(self, meet_tbl, m_r, m_x, m_y, vm_ptr, vm_idx,
                 eq_a, eq_b, ve_ptr, ve_idx, ne_a, ne_b, vn_ptr, vn_idx, nvars):
        self.T = meet_tbl
        self.m_r, self.m_x, self.m_y = m_r, m_x, m_y
        self.vm_ptr, self.vm_idx = vm_ptr, vm_idx
        self.eq_a, self.eq_b = eq_a, eq_b
        self.ve_ptr, self.ve_idx = ve_ptr, ve_idx
        self.ne_a, self.ne_b = ne_a, ne_b
        self.vn_ptr, self.vn_idx = vn_ptr, vn_idx
        self.V = nvars
        self.G = meet_tbl.shape[0]
        self.val = np.full(nvars, -1, dtype=np.int64)
        self.meet_un = np.zeros(len(m_r), dtype=np.int64)
        for i in range(len(m_r)):
            self.meet_un[i] = len({int(m_r[i]), int(m_x[i]), int(m_y[i])})
        self.trail: list[int] = []
        self.pending: list[int] = []
        self.nodes = 0

    def assign(self, v, g):
        self.nodes += 1
        self.val[v] = g
        self.trail.append(v)
        status = OK
        # the decrement loop must run to completion even on conflict so that
        # undo_to (which reverses every atom of v) stays consistent
        for p in range(self.vm_ptr[v], self.vm_ptr[v + 1]):
            mi = self.vm_idx[p]
            self.meet_un[mi] -= 1
            if self.meet_un[mi] == 0:
                if self.T[self.val[self.m_x[mi]], self.val[self.m_y[mi]]] != self.val[self.m_r[mi]]:
                    status = CONFLICT
            elif self.meet_un[mi] == 1:
                self.pending.append(mi)
        if status != OK:
            return status
        for p in range(self.ve_ptr[v], self.ve_ptr[v + 1]):
            ei = self.ve_idx[p]
            other = self.eq_b[ei] if self.eq_a[ei] == v else self.eq_a[ei]
            o = self.val[other]
            if o >= 0:
                if o != g:
                    return CONFLICT
            else:
                if self.assign(other, g) == CONFLICT:
                    return CONFLICT
        for p in range(self.vn_ptr[v], self.vn_ptr[v + 1]):
            ni = self.vn_idx[p]
            a, b = self.ne_a[ni], self.ne_b[ni]
            if a == b:
                return CONFLICT
            other = a if b == v else b
            if self.val[other] == g:
                return CONFLICT
        return OK

    def propagate(self):
        """A meet atom with only its result unassigned forces it; an atom with
        an unassigned argument stays pending until it closes."""
        while self.pending:
            mi = self.pending.pop()
            if self.meet_un[mi] != 1:
                continue
            r, x, y = self.m_r[mi], self.m_x[mi], self.m_y[mi]
            if self.val[r] < 0 and self.val[x] >= 0 and self.val[y] >= 0:
                g = int(self.T[self.val[x], self.val[y]])
                if self.assign(r, g) == CONFLICT:
                    return CONFLICT
        return OK

    def undo_to(self, mark):
        while len(self.trail) > mark:
            v = self.trail.pop()
            for p in range(self.vm_ptr[v], self.vm_ptr[v + 1]):
                self.meet_un[self.vm_idx[p]] += 1
            self.val[v] = -1
        self.pending.clear()


def semilattice_search(meet_tbl, m_r, m_x, m_y, vm_ptr, vm_idx,
                       eq_a, eq_b, ve_ptr, ve_idx, ne_a, ne_b, vn_ptr, vn_idx,
                       nvars, budget):
    """Backtracking with propagation over assignments into a finite
    semilattice given by its meet table.  Same conventions and return shape
    as group_search."""
    st = _LatticeState(meet_tbl, m_r, m_x, m_y, vm_ptr, vm_idx,
                       eq_a, eq_b, ve_ptr, ve_idx, ne_a, ne_b, vn_ptr, vn_idx, nvars)
    G = st.G

    stack: list[tuple[int, int, int]] = []

    def first_unassigned():
        for v in range(st.V):
            if st.val[v] < 0:
                return v
        return -1

    v = first_unassigned()
    if v < 0:
        return 0, st.val, st.nodes
    stack.append((v, 0, len(st.trail)))

    while stack:
        v, g, mark = stack[-1]
        st.undo_to(mark)
        found = False
        while g < G:
            if st.assign(v, g) == OK and st.propagate() == OK:
                found = True
                break
            st.undo_to(mark)
            g += 1
            if st.nodes > budget:
                return 2, st.val, st.nodes
        if found:
            stack[-1] = (v, g + 1, mark)
            if st.nodes > budget:
                return 2, st.val, st.nodes
            nxt = first_unassigned()
            if nxt < 0:
                return 0, st.val, st.nodes
            stack.append((nxt, 0, len(st.trail)))
        else:
            stack.pop()
    return 1, st.val, st.nodes
