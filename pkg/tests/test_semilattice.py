"""Semilattice solving: Horn propagation with minimal models, the universal
target vs finite targets, subset embeddings, and the table parser."""

import itertools
import random

import pytest

from neqsolve.oracle import GenParams, random_instance
from neqsolve.semilattice import (
    FiniteSemilattice,
    HornProblem,
    check_entailment_semilattice,
    check_identity_semilattice,
    embed_into_subsets,
    format_semilattice,
    horn_solve,
    parse_semilattice,
    solve_U,
    solve_finite,
)
from neqsolve.terms import (
    SEMILATTICE,
    Meet,
    Var,
    flatten,
    format_instance,
    parse_instance,
    parse_term_text,
)
from neqsolve.verdict import BUDGET, R_ENTAILED, SAT, UNSAT


def enumerate_horn_models(p: HornProblem):
    """All boolean assignments satisfying the constraints, brute force."""
    models = []
    for bits in itertools.product((False, True), repeat=len(p.variables)):
        a = dict(zip(p.variables, bits))
        if all(a[z] == (a[x] and a[y]) for z, x, y in p.meets) and all(
            a[v] for v in p.ones
        ) and not any(a[v] for v in p.zeros) and all(
            a[u] == a[v] for u, v in p.links
        ):
            models.append(a)
    return models


def random_horn(rng, n_vars, n_meets, n_ones, n_zeros, n_links):
    names = tuple(f"v{i}" for i in range(n_vars))
    pick = lambda: rng.choice(names)
    return HornProblem(
        names,
        tuple((pick(), pick(), pick()) for _ in range(n_meets)),
        ones=tuple(pick() for _ in range(n_ones)),
        zeros=tuple(pick() for _ in range(n_zeros)),
        links=tuple((pick(), pick()) for _ in range(n_links)),
    )


class TestHornSolve:
    def test_minimal_model_against_enumeration(self):
        """The constraint set is closed under pointwise conjunction, so the
        minimal model is the intersection of all models; the propagator must
        return exactly that, or None when no model exists."""
        rng = random.Random(424242)
        sat = unsat = 0
        for _ in range(250):
            p = random_horn(
                rng,
                n_vars=rng.randint(1, 10),
                n_meets=rng.randint(0, 6),
                n_ones=rng.randint(0, 2),
                n_zeros=rng.randint(0, 2),
                n_links=rng.randint(0, 3),
            )
            models = enumerate_horn_models(p)
            got = horn_solve(p)
            if not models:
                assert got is None
                unsat += 1
                continue
            sat += 1
            minimal = {
                v: all(m[v] for m in models) for v in p.variables
            }
            assert got == minimal, p
        assert sat > 0 and unsat > 0

    def test_meet_forces_both_arguments(self):
        p = HornProblem(("x", "y", "z"), (("z", "x", "y"),), ones=("z",))
        assert horn_solve(p) == {"x": True, "y": True, "z": True}

    def test_conflict(self):
        p = HornProblem(("x", "y"), (), ones=("x",), zeros=("y",), links=(("x", "y"),))
        assert horn_solve(p) is None

    def test_rejects_undeclared(self):
        with pytest.raises(ValueError):
            horn_solve(HornProblem(("x",), (("x", "x", "q"),)))
        with pytest.raises(ValueError):
            horn_solve(HornProblem(("x",), (), ones=("q",)))


class TestSolveU:
    def test_branch_order_prefers_first_side(self):
        # x <= y and x != y: the x=1,y=0 branch conflicts, the other works
        inst = parse_instance(
            "structure semilattice\nvar x y\neq x (meet x y)\nneq x y\n"
        )
        v = solve_U(flatten(inst))
        assert v.status == SAT
        w = v.witness
        byname = dict(zip(w.variables, w.sets))
        assert byname["x"] < byname["y"]  # proper subset

    def test_entailed_disequality(self):
        inst = parse_instance(
            "structure semilattice\nvar x y\neq x (meet x y)\neq y (meet y x)\nneq x y\n"
        )
        v = solve_U(flatten(inst))
        assert v.status == UNSAT
        assert v.reason == R_ENTAILED
        assert v.pair == ("x", "y")

    def test_no_disequalities_gives_empty_sets(self):
        inst = parse_instance("structure semilattice\nvar x y\neq x (meet x y)\n")
        v = solve_U(flatten(inst))
        assert v.status == SAT
        assert v.witness.m == 0
        assert all(s == frozenset() for s in v.witness.sets)

    def test_agrees_with_subset_lattice_on_small_instances(self):
        """For instances with at most 7 disequalities the 128-element subset
        lattice decides exactly like the universal one."""
        rng = random.Random(777)
        s7 = FiniteSemilattice.subsets(7)
        sat = unsat = 0
        for _ in range(120):
            params = GenParams(
                variables=rng.randint(1, 3),
                equations=rng.randint(0, 3),
                disequalities=rng.randint(0, 3),
                seed=rng.getrandbits(24),
                depth=rng.choice([1, 2]),
            )
            flat = flatten(random_instance(params, SEMILATTICE))
            a = solve_U(flat)
            # deep refutations over 128 elements can hit the default budget
            b = solve_finite(s7, flat, budget=10**9)
            assert a.status == b.status, params
            if a.status == SAT:
                sat += 1
            else:
                unsat += 1
        assert sat > 0 and unsat > 0

    def test_rejects_group_instances(self):
        flat = flatten(parse_instance("structure group\nvar x\neq x 0\n"))
        with pytest.raises(ValueError):
            solve_U(flat)
        with pytest.raises(ValueError):
            solve_finite(FiniteSemilattice.subsets(2), flat)


class TestFiniteSemilattice:
    def test_subsets_lattice(self):
        s = FiniteSemilattice.subsets(3)
        assert s.size == 8
        i = s.elements.index(frozenset({1, 2}))
        j = s.elements.index(frozenset({2, 3}))
        assert s.elements[s.meet(i, j)] == frozenset({2})
        assert s.le(s.elements.index(frozenset()), i)

    def test_make_rejects_bad_tables(self):
        with pytest.raises(ValueError):  # not commutative
            FiniteSemilattice.make("ab", [[0, 0], [1, 1]])
        with pytest.raises(ValueError):  # not idempotent
            FiniteSemilattice.make("ab", [[1, 0], [0, 1]])
        with pytest.raises(ValueError):  # out of range
            FiniteSemilattice.make("ab", [[0, 2], [2, 1]])
        with pytest.raises(ValueError):  # not associative: (a^b)^c != a^(b^c)
            FiniteSemilattice.make(
                "abcd",
                [
                    [0, 3, 1, 3],
                    [3, 1, 1, 3],
                    [1, 1, 2, 3],
                    [3, 3, 3, 3],
                ],
            )
        with pytest.raises(ValueError):  # duplicate labels
            FiniteSemilattice.make("aa", [[0, 0], [0, 1]])

    def test_chain(self):
        chain = FiniteSemilattice.make(
            (0, 1, 2), [[min(i, j) for j in range(3)] for i in range(3)]
        )
        assert chain.le(0, 2) and not chain.le(2, 0)

    def test_embedding_into_subsets(self):
        chain = FiniteSemilattice.make(
            (0, 1, 2), [[min(i, j) for j in range(3)] for i in range(3)]
        )
        images = embed_into_subsets(chain)
        assert images[0] < images[1] < images[2]
        diamond = FiniteSemilattice.make(
            "0ab",
            [[0, 0, 0], [0, 1, 0], [0, 0, 2]],
        )
        im = embed_into_subsets(diamond)
        assert im["a"] & im["b"] == im["0"]

    def test_parse_format_roundtrip(self):
        s = FiniteSemilattice.subsets(2)
        named = FiniteSemilattice.make(
            tuple("".join(sorted(str(x) for x in e)) or "empty" for e in s.elements),
            s.table,
        )
        again = parse_semilattice(format_semilattice(named))
        assert again.elements == named.elements
        assert again.table == named.table

    def test_parse_rejects_incomplete_and_inconsistent(self):
        with pytest.raises(ValueError):
            parse_semilattice("elements a b\nmeet a a a\n")  # missing pairs
        with pytest.raises(ValueError):
            parse_semilattice(
                "elements a b\nmeet a a a\nmeet b b b\nmeet a b a\nmeet b a b\n"
            )


class TestSolveFinite:
    def test_disequality_needs_two_elements(self):
        one = FiniteSemilattice.make(("e",), [[0]])
        flat = flatten(parse_instance("structure semilattice\nvar x y\nneq x y\n"))
        assert solve_finite(one, flat).status == UNSAT
        assert solve_finite(FiniteSemilattice.subsets(1), flat).status == SAT

    def test_budget_exhaustion(self):
        s = FiniteSemilattice.subsets(3)
        flat = flatten(
            parse_instance("structure semilattice\nvar x y z\nneq x y\nneq y z\n")
        )
        assert solve_finite(s, flat, budget=1).status == BUDGET

    def test_witness_transported_through_embedding(self):
        chain = FiniteSemilattice.make(
            (0, 1, 2), [[min(i, j) for j in range(3)] for i in range(3)]
        )
        flat = flatten(
            parse_instance(
                "structure semilattice\nvar x y\neq x (meet x y)\nneq x y\n"
            )
        )
        v = solve_finite(chain, flat)
        assert v.status == SAT
        assert v.witness.verify(flat)

    def test_small_lattice_is_one_sided(self):
        """Anything satisfiable in a finite semilattice stays satisfiable in
        the universal one (the converse can fail for small targets)."""
        rng = random.Random(31)
        s4 = FiniteSemilattice.subsets(4)
        for _ in range(80):
            params = GenParams(
                variables=rng.randint(1, 6),
                equations=rng.randint(0, 4),
                disequalities=rng.randint(0, 4),
                seed=rng.getrandbits(24),
                depth=rng.choice([1, 2]),
            )
            flat = flatten(random_instance(params, SEMILATTICE))
            fin = solve_finite(s4, flat)
            if fin.status == SAT:
                assert solve_U(flat).status == SAT, params


class TestFrontEnds:
    def test_meet_laws_are_identities(self):
        x, y, z = Var("x"), Var("y"), Var("z")
        assert check_identity_semilattice(Meet(x, y), Meet(y, x))
        assert check_identity_semilattice(Meet(Meet(x, y), z), Meet(x, Meet(y, z)))
        assert check_identity_semilattice(Meet(x, x), x)

    def test_absorption_is_not_an_identity(self):
        x, y = Var("x"), Var("y")
        assert not check_identity_semilattice(Meet(x, y), x)

    def test_entailment(self):
        x, y = Var("x"), Var("y")
        t1, _ = parse_term_text("(meet x y)", SEMILATTICE)
        assert check_entailment_semilattice([(x, t1)], (Meet(x, y), x))
        assert not check_entailment_semilattice([], (x, y))
        # x <= y and y <= x forces x = y
        assert check_entailment_semilattice([(x, Meet(x, y)), (y, Meet(y, x))], (x, y))
