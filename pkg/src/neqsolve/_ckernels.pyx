# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot loops: row reduction over Z_k and the two finite-structure
backtrackers.  Signatures and semantics match neqsolve._pykernels exactly;
the import-time selection lives in neqsolve.backend.
"""

from libc.stdint cimport int64_t

import numpy as np

COMPILED = True

OK = 0
CONFLICT = 1

cdef int C_OK = 0
cdef int C_CONFLICT = 1


cdef inline int64_t pymod(int64_t x, int64_t m) nogil:
    # cdivision is on, so fix up C's truncated remainder for negatives
    cdef int64_t r = x % m
    return r + m if r < 0 else r


cdef inline int64_t c_gcd(int64_t a, int64_t b) nogil:
    cdef int64_t t
    while b:
        t = a % b
        a = b
        b = t
    return a


def reduce_row(int64_t[:, :] basis, int64_t[:] pivot_row_of_col, int64_t[:] row, int64_t k):
    """Reduce `row` (mutated in place) against an echelon row basis over Z_k.

    Returns -1 if the row reduced to zero, c >= 0 if column c has no pivot,
    or -(c+2) if the pivot at column c does not divide row[c].
    """
    cdef Py_ssize_t n = row.shape[0]
    cdef Py_ssize_t c = 0, j
    cdef int64_t a, b, q, pr
    while True:
        while c < n and row[c] == 0:
            c += 1
        if c == n:
            return -1
        pr = pivot_row_of_col[c]
        if pr < 0:
            return c
        a = basis[pr, c]
        b = row[c]
        if b % a != 0:
            return -(c + 2)
        q = b // a
        for j in range(c, n):
            row[j] = pymod(row[j] - q * basis[pr, j], k)
        c += 1


cdef class _GroupState:
    cdef int64_t[:] moduli, strides, row_start, row_var, row_coef
    cdef int64_t[:, :] elem_comp, inv_tbl, row_t
    cdef int64_t[:] vr_ptr, vr_row, vr_coef, dis_a, dis_b, vd_ptr, vd_idx
    cdef int64_t[:] val, row_un, trail, pending
    cdef Py_ssize_t n_trail, n_pending, d, G, V, R
    cdef int64_t nodes
    cdef object val_arr

    def __cinit__(self, moduli, elem_comp, inv_tbl, strides, row_start, row_var,
                  row_coef, vr_ptr, vr_row, vr_coef, dis_a, dis_b, vd_ptr, vd_idx):
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
        self.d = self.moduli.shape[0]
        self.G = self.elem_comp.shape[0]
        self.V = self.vr_ptr.shape[0] - 1
        self.R = self.row_start.shape[0] - 1
        self.val_arr = np.full(self.V, -1, dtype=np.int64)
        self.val = self.val_arr
        row_t = np.zeros((self.R if self.R else 1, self.d if self.d else 1), dtype=np.int64)
        self.row_t = row_t
        row_un = np.zeros(self.R if self.R else 1, dtype=np.int64)
        cdef Py_ssize_t r
        for r in range(self.R):
            row_un[r] = row_start[r + 1] - row_start[r]
        self.row_un = row_un
        self.trail = np.zeros(self.V if self.V else 1, dtype=np.int64)
        self.pending = np.zeros(self.R if self.R else 1, dtype=np.int64)
        self.n_trail = 0
        self.n_pending = 0
        self.nodes = 0

    cdef int assign(self, Py_ssize_t v, int64_t g):
        cdef Py_ssize_t p, c
        cdef int64_t r, coef, a, b, other
        cdef int status = C_OK
        cdef bint nonzero
        self.nodes += 1
        self.val[v] = g
        self.trail[self.n_trail] = v
        self.n_trail += 1
        for p in range(self.vr_ptr[v], self.vr_ptr[v + 1]):
            r = self.vr_row[p]
            coef = self.vr_coef[p]
            for c in range(self.d):
                self.row_t[r, c] = pymod(self.row_t[r, c] + coef * self.elem_comp[g, c], self.moduli[c])
            self.row_un[r] -= 1
            if self.row_un[r] == 0:
                nonzero = False
                for c in range(self.d):
                    if self.row_t[r, c] != 0:
                        nonzero = True
                        break
                if nonzero:
                    status = C_CONFLICT
            elif self.row_un[r] == 1:
                self.pending[self.n_pending] = r
                self.n_pending += 1
        if status == C_OK:
            for p in range(self.vd_ptr[v], self.vd_ptr[v + 1]):
                r = self.vd_idx[p]
                a = self.dis_a[r]
                b = self.dis_b[r]
                if a == b:
                    return C_CONFLICT
                other = a if b == v else b
                if self.val[other] == g:
                    return C_CONFLICT
        return status

    cdef int propagate(self):
        cdef Py_ssize_t r, p, c
        cdef int64_t u, cu, m, ce, t, inv, g
        cdef bint unique
        while self.n_pending > 0:
            self.n_pending -= 1
            r = self.pending[self.n_pending]
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
                m = self.moduli[c]
                ce = pymod(cu, m)
                t = self.row_t[r, c]
                inv = self.inv_tbl[c, ce]
                if inv < 0:
                    if t % c_gcd(ce, m) != 0:
                        return C_CONFLICT
                    unique = False
                    break
                g += pymod(-t * inv, m) * self.strides[c]
            if unique:
                if self.assign(u, g) == C_CONFLICT:
                    return C_CONFLICT
        return C_OK

    cdef void undo_to(self, Py_ssize_t mark):
        cdef Py_ssize_t v, p, c
        cdef int64_t g, r, coef
        while self.n_trail > mark:
            self.n_trail -= 1
            v = self.trail[self.n_trail]
            g = self.val[v]
            for p in range(self.vr_ptr[v], self.vr_ptr[v + 1]):
                r = self.vr_row[p]
                coef = self.vr_coef[p]
                for c in range(self.d):
                    self.row_t[r, c] = pymod(self.row_t[r, c] - coef * self.elem_comp[g, c], self.moduli[c])
                self.row_un[r] += 1
            self.val[v] = -1
        self.n_pending = 0

    cdef Py_ssize_t first_unassigned(self):
        cdef Py_ssize_t v
        for v in range(self.V):
            if self.val[v] < 0:
                return v
        return -1


def group_search(moduli, elem_comp, inv_tbl, strides, row_start, row_var, row_coef,
                 vr_ptr, vr_row, vr_coef, dis_a, dis_b, vd_ptr, vd_idx, int64_t budget):
    """Backtracking with unit propagation over assignments into the finite
    abelian group with the given cyclic moduli.  Returns (status, val, nodes)
    with status 0 sat / 1 unsat / 2 budget."""
    cdef _GroupState st = _GroupState(moduli, elem_comp, inv_tbl, strides, row_start,
                                      row_var, row_coef, vr_ptr, vr_row, vr_coef,
                                      dis_a, dis_b, vd_ptr, vd_idx)
    cdef int64_t G = st.G
    cdef Py_ssize_t r, c, depth, mark
    cdef int64_t v, g, nxt
    cdef bint found, nonzero

    for r in range(st.R):
        if st.row_un[r] == 1:
            st.pending[st.n_pending] = r
            st.n_pending += 1
        elif st.row_un[r] == 0:
            nonzero = False
            for c in range(st.d):
                if st.row_t[r, c] != 0:
                    nonzero = True
                    break
            if nonzero:
                return 1, st.val_arr, st.nodes
    if st.propagate() == C_CONFLICT:
        return 1, st.val_arr, st.nodes

    s_var = np.zeros(st.V + 1, dtype=np.int64)
    s_g = np.zeros(st.V + 1, dtype=np.int64)
    s_mark = np.zeros(st.V + 1, dtype=np.int64)
    cdef int64_t[:] sv = s_var
    cdef int64_t[:] sg = s_g
    cdef int64_t[:] sm = s_mark

    v = st.first_unassigned()
    if v < 0:
        return 0, st.val_arr, st.nodes
    sv[0] = v
    sg[0] = 0
    sm[0] = st.n_trail
    depth = 1

    while depth > 0:
        v = sv[depth - 1]
        g = sg[depth - 1]
        mark = sm[depth - 1]
        st.undo_to(mark)
        found = False
        while g < G:
            if st.assign(v, g) == C_OK and st.propagate() == C_OK:
                found = True
                break
            st.undo_to(mark)
            g += 1
            if st.nodes > budget:
                return 2, st.val_arr, st.nodes
        if found:
            sg[depth - 1] = g + 1
            if st.nodes > budget:
                return 2, st.val_arr, st.nodes
            nxt = st.first_unassigned()
            if nxt < 0:
                return 0, st.val_arr, st.nodes
            sv[depth] = nxt
            sg[depth] = 0
            sm[depth] = st.n_trail
            depth += 1
        else:
            depth -= 1
    return 1, st.val_arr, st.nodes


cdef class _LatticeState:
    cdef int64_t[:, :] T
    cdef int64_t[:] m_r, m_x, m_y, vm_ptr, vm_idx
    cdef int64_t[:] eq_a, eq_b, ve_ptr, ve_idx
    cdef int64_t[:] ne_a, ne_b, vn_ptr, vn_idx
    cdef int64_t[:] val, meet_un, trail, pending
    cdef Py_ssize_t n_trail, n_pending, V, G, M
    cdef int64_t nodes
    cdef object val_arr

    def __cinit__(self, meet_tbl, m_r, m_x, m_y, vm_ptr, vm_idx,
                  eq_a, eq_b, ve_ptr, ve_idx, ne_a, ne_b, vn_ptr, vn_idx, Py_ssize_t nvars):
        self.T = meet_tbl
        self.m_r = m_r
        self.m_x = m_x
        self.m_y = m_y
        self.vm_ptr = vm_ptr
        self.vm_idx = vm_idx
        self.eq_a = eq_a
        self.eq_b = eq_b
        self.ve_ptr = ve_ptr
        self.ve_idx = ve_idx
        self.ne_a = ne_a
        self.ne_b = ne_b
        self.vn_ptr = vn_ptr
        self.vn_idx = vn_idx
        self.V = nvars
        self.G = self.T.shape[0]
        self.M = self.m_r.shape[0]
        self.val_arr = np.full(nvars, -1, dtype=np.int64)
        self.val = self.val_arr
        meet_un = np.zeros(self.M if self.M else 1, dtype=np.int64)
        cdef Py_ssize_t i
        for i in range(self.M):
            meet_un[i] = len({int(m_r[i]), int(m_x[i]), int(m_y[i])})
        self.meet_un = meet_un
        self.trail = np.zeros(nvars if nvars else 1, dtype=np.int64)
        self.pending = np.zeros(self.M if self.M else 1, dtype=np.int64)
        self.n_trail = 0
        self.n_pending = 0
        self.nodes = 0

    cdef int assign(self, Py_ssize_t v, int64_t g):
        cdef Py_ssize_t p
        cdef int64_t mi, other, o, a, b
        cdef int status = C_OK
        self.nodes += 1
        self.val[v] = g
        self.trail[self.n_trail] = v
        self.n_trail += 1
        # run the decrement loop to completion even on conflict so undo_to
        # (which reverses every atom of v) stays consistent
        for p in range(self.vm_ptr[v], self.vm_ptr[v + 1]):
            mi = self.vm_idx[p]
            self.meet_un[mi] -= 1
            if self.meet_un[mi] == 0:
                if self.T[self.val[self.m_x[mi]], self.val[self.m_y[mi]]] != self.val[self.m_r[mi]]:
                    status = C_CONFLICT
            elif self.meet_un[mi] == 1:
                self.pending[self.n_pending] = mi
                self.n_pending += 1
        if status != C_OK:
            return status
        for p in range(self.ve_ptr[v], self.ve_ptr[v + 1]):
            mi = self.ve_idx[p]
            other = self.eq_b[mi] if self.eq_a[mi] == v else self.eq_a[mi]
            o = self.val[other]
            if o >= 0:
                if o != g:
                    return C_CONFLICT
            else:
                if self.assign(other, g) == C_CONFLICT:
                    return C_CONFLICT
        for p in range(self.vn_ptr[v], self.vn_ptr[v + 1]):
            mi = self.vn_idx[p]
            a = self.ne_a[mi]
            b = self.ne_b[mi]
            if a == b:
                return C_CONFLICT
            other = a if b == v else b
            if self.val[other] == g:
                return C_CONFLICT
        return C_OK

    cdef int propagate(self):
        cdef int64_t mi, g
        cdef Py_ssize_t r, x, y
        while self.n_pending > 0:
            self.n_pending -= 1
            mi = self.pending[self.n_pending]
            if self.meet_un[mi] != 1:
                continue
            r = self.m_r[mi]
            x = self.m_x[mi]
            y = self.m_y[mi]
            if self.val[r] < 0 and self.val[x] >= 0 and self.val[y] >= 0:
                g = self.T[self.val[x], self.val[y]]
                if self.assign(r, g) == C_CONFLICT:
                    return C_CONFLICT
        return C_OK

    cdef void undo_to(self, Py_ssize_t mark):
        cdef Py_ssize_t v, p
        while self.n_trail > mark:
            self.n_trail -= 1
            v = self.trail[self.n_trail]
            for p in range(self.vm_ptr[v], self.vm_ptr[v + 1]):
                self.meet_un[self.vm_idx[p]] += 1
            self.val[v] = -1
        self.n_pending = 0

    cdef Py_ssize_t first_unassigned(self):
        cdef Py_ssize_t v
        for v in range(self.V):
            if self.val[v] < 0:
                return v
        return -1


def semilattice_search(meet_tbl, m_r, m_x, m_y, vm_ptr, vm_idx,
                       eq_a, eq_b, ve_ptr, ve_idx, ne_a, ne_b, vn_ptr, vn_idx,
                       nvars, int64_t budget):
    """Backtracking with propagation over assignments into a finite
    semilattice given by its meet table.  Same conventions and return shape
    as group_search."""
    cdef _LatticeState st = _LatticeState(meet_tbl, m_r, m_x, m_y, vm_ptr, vm_idx,
                                          eq_a, eq_b, ve_ptr, ve_idx,
                                          ne_a, ne_b, vn_ptr, vn_idx, nvars)
    cdef int64_t G = st.G
    cdef Py_ssize_t depth, mark
    cdef int64_t v, g, nxt
    cdef bint found

    s_var = np.zeros(st.V + 1, dtype=np.int64)
    s_g = np.zeros(st.V + 1, dtype=np.int64)
    s_mark = np.zeros(st.V + 1, dtype=np.int64)
    cdef int64_t[:] sv = s_var
    cdef int64_t[:] sg = s_g
    cdef int64_t[:] sm = s_mark

    v = st.first_unassigned()
    if v < 0:
        return 0, st.val_arr, st.nodes
    sv[0] = v
    sg[0] = 0
    sm[0] = st.n_trail
    depth = 1

    while depth > 0:
        v = sv[depth - 1]
        g = sg[depth - 1]
        mark = sm[depth - 1]
        st.undo_to(mark)
        found = False
        while g < G:
            if st.assign(v, g) == C_OK and st.propagate() == C_OK:
                found = True
                break
            st.undo_to(mark)
            g += 1
            if st.nodes > budget:
                return 2, st.val_arr, st.nodes
        if found:
            sg[depth - 1] = g + 1
            if st.nodes > budget:
                return 2, st.val_arr, st.nodes
            nxt = st.first_unassigned()
            if nxt < 0:
                return 0, st.val_arr, st.nodes
            sv[depth] = nxt
            sg[depth] = 0
            sm[depth] = st.n_trail
            depth += 1
        else:
            depth -= 1
    return 1, st.val_arr, st.nodes
