"""Group descriptors: parsing, the mutual-embeddability normal form, involution
quotients, and the tractability classification."""

import itertools

import pytest

from neqsolve.groups import (
    OMEGA,
    TRIVIAL,
    GroupDescriptor,
    NPHard,
    Tractable,
    biembed_normal_form,
    biembeddable,
    classify,
    finite_moduli,
    format_descriptor,
    general_decomposition,
    has_square_embedding,
    parse_descriptor,
    quotient_by_involution,
)
from neqsolve.oracle import FiniteAbelianGroup, brute_embeddable

# descriptor text -> expected classification
GOLDEN = {
    "2^1:w": Tractable(2, False),
    "2^2:1 + 2^1:w": Tractable(2, True),
    "2^1:1": Tractable(1, True),
    "3^1:w + 2^1:1": Tractable(3, True),
    "3^2:1 + 3^1:w": NPHard(),
    "2^3:1 + 2^1:w": NPHard(),
    "2^2:2 + 2^1:w": NPHard(),
    "1": Tractable(1, False),
    "2^1:w + 2^1:5": Tractable(2, False),
}


class TestParsing:
    def test_roundtrip(self):
        for text in GOLDEN:
            d = parse_descriptor(text)
            assert parse_descriptor(format_descriptor(d)) == d

    def test_format_sorts_prime_then_level(self):
        assert format_descriptor(parse_descriptor("3^1:w + 2^1:1")) == "2^1:1 + 3^1:w"
        assert (
            format_descriptor(parse_descriptor("2^1:2 + 2^3:1 + 2^2:w"))
            == "2^3:1 + 2^2:w + 2^1:2"
        )

    def test_trivial(self):
        assert parse_descriptor("1") is TRIVIAL
        assert format_descriptor(TRIVIAL) == "1"
        assert TRIVIAL.is_trivial

    def test_repeated_atoms_merge(self):
        assert parse_descriptor("2^1:3 + 2^1:2") == parse_descriptor("2^1:5")
        assert parse_descriptor("2^1:w + 2^1:5") == parse_descriptor("2^1:w")
        assert parse_descriptor("2^1:5 + 2^1:w") == parse_descriptor("2^1:w")

    def test_merge_order_invariance(self):
        atoms = ["2^2:1", "3^1:w", "2^1:4", "5^1:2"]
        base = parse_descriptor(" + ".join(atoms))
        for perm in itertools.permutations(atoms):
            assert parse_descriptor(" + ".join(perm)) == base

    def test_rejects_garbage(self):
        for bad in ["2^0:1", "4^1:1", "2^1", "2^1:0", "x", "", "2^1:-1"]:
            with pytest.raises(ValueError):
                parse_descriptor(bad)

    def test_make_validates(self):
        with pytest.raises(ValueError):
            GroupDescriptor.make([(6, 1, 1)])
        with pytest.raises(ValueError):
            GroupDescriptor.make([(2, 0, 1)])
        with pytest.raises(ValueError):
            GroupDescriptor.make([(2, 1, 0)])

    def test_exponent(self):
        assert TRIVIAL.exponent() == 1
        assert parse_descriptor("2^2:1 + 3^1:w").exponent() == 12


class TestNormalForm:
    def test_finite_part_below_omega_level_is_absorbed(self):
        assert biembeddable(
            parse_descriptor("2^2:w + 2^1:5"), parse_descriptor("2^2:w")
        )
        assert biembeddable(
            parse_descriptor("3^1:w + 3^1:5"), parse_descriptor("3^1:w")
        )

    def test_finite_part_above_omega_level_matters(self):
        assert not biembeddable(
            parse_descriptor("2^2:1 + 2^1:w"), parse_descriptor("2^1:w")
        )
        assert not biembeddable(
            parse_descriptor("2^2:1 + 2^1:w"), parse_descriptor("2^2:2 + 2^1:w")
        )

    def test_normal_form_fields(self):
        nf = biembed_normal_form(parse_descriptor("2^3:2 + 2^2:w + 2^1:7 + 3^1:1"))
        assert nf.parts == ((2, 2, ((3, 2),)), (3, 0, ((1, 1),)))
        assert biembed_normal_form(TRIVIAL).parts == ()

    def test_equivalence_relation_on_samples(self):
        ds = [parse_descriptor(t) for t in GOLDEN]
        for d in ds:
            assert biembeddable(d, d)
        for d1, d2 in itertools.combinations(ds, 2):
            assert biembeddable(d1, d2) == biembeddable(d2, d1)

    def test_matches_mutual_embedding_on_finite_groups(self):
        """For fully finite descriptors mutual embeddability is isomorphism;
        cross-check the normal form against search-based embedding both ways."""
        atoms = [(2, 1), (2, 2), (3, 1)]
        descriptors = []
        for mults in itertools.product(range(3), repeat=len(atoms)):
            comps = [(p, n, s) for (p, n), s in zip(atoms, mults) if s]
            descriptors.append(GroupDescriptor.make(comps))
        for d1, d2 in itertools.combinations_with_replacement(descriptors, 2):
            g1 = FiniteAbelianGroup(finite_moduli(d1) or (1,))
            g2 = FiniteAbelianGroup(finite_moduli(d2) or (1,))
            mutual = brute_embeddable(g1, g2) and brute_embeddable(g2, g1)
            assert biembeddable(d1, d2) == mutual, (d1, d2)

    def test_finite_moduli_rejects_omega(self):
        with pytest.raises(ValueError):
            finite_moduli(parse_descriptor("2^1:w"))


class TestQuotient:
    def test_involution_in_doubled_summand(self):
        d = quotient_by_involution(parse_descriptor("2^2:1 + 2^1:w"), 2)
        assert d == parse_descriptor("2^1:w")

    def test_involution_in_order_two_summand(self):
        assert quotient_by_involution(parse_descriptor("2^1:1"), 1) == TRIVIAL

    def test_omega_multiplicity_absorbs_quotient(self):
        d = parse_descriptor("2^1:w")
        assert quotient_by_involution(d, 1) == d

    def test_level_drop(self):
        d = quotient_by_involution(parse_descriptor("2^3:2"), 3)
        assert d == parse_descriptor("2^3:1 + 2^2:1")

    def test_rejects_odd_primes_and_missing_levels(self):
        with pytest.raises(ValueError):
            quotient_by_involution(parse_descriptor("3^1:1"), 1)
        with pytest.raises(ValueError):
            quotient_by_involution(parse_descriptor("2^1:1"), 2)


class TestClassify:
    def test_golden_table(self):
        for text, expected in GOLDEN.items():
            assert classify(parse_descriptor(text)) == expected, text

    def test_classification_is_biembed_invariant(self):
        pairs = [
            ("2^1:w + 2^1:5", "2^1:w"),
            ("2^2:1 + 2^1:w + 2^1:3", "2^2:1 + 2^1:w"),
            ("3^2:1 + 3^1:w + 3^1:2", "3^2:1 + 3^1:w"),
        ]
        for t1, t2 in pairs:
            d1, d2 = parse_descriptor(t1), parse_descriptor(t2)
            assert biembeddable(d1, d2)
            assert classify(d1) == classify(d2)

    def test_square_embedding_iff_no_finite_residue(self):
        assert has_square_embedding(parse_descriptor("2^1:w"))
        assert has_square_embedding(TRIVIAL)
        assert has_square_embedding(parse_descriptor("2^2:w + 2^1:3"))
        assert not has_square_embedding(parse_descriptor("2^2:1 + 2^1:w"))
        assert not has_square_embedding(parse_descriptor("2^1:1"))

    def test_tractable_with_double_iff_two_part_residue(self):
        cls = classify(parse_descriptor("3^1:w + 2^1:1"))
        assert cls == Tractable(3, True)
        cls = classify(parse_descriptor("5^1:w"))
        assert cls == Tractable(5, False)

    def test_mixed_primes(self):
        assert classify(parse_descriptor("3^1:w + 5^2:w")) == Tractable(75, False)
        assert classify(parse_descriptor("3^1:w + 5^1:1")) == NPHard()
        assert classify(parse_descriptor("2^2:1 + 2^1:w + 3^1:w")) == Tractable(6, True)


class TestGeneralDecomposition:
    def test_splits_into_omega_part_and_finite_part(self):
        assert general_decomposition(parse_descriptor("2^1:w")) == (2, ())
        assert general_decomposition(parse_descriptor("2^2:1 + 2^1:w")) == (2, (4,))
        assert general_decomposition(parse_descriptor("3^2:1 + 3^1:w")) == (3, (9,))
        assert general_decomposition(parse_descriptor("2^2:2 + 2^1:w")) == (2, (4, 4))
        assert general_decomposition(TRIVIAL) == (1, ())

    def test_finite_part_sorted_by_prime(self):
        n, moduli = general_decomposition(parse_descriptor("3^1:1 + 2^2:1"))
        assert n == 1
        assert sorted(moduli) == [3, 4]
