"""Entropy and mutual-information primitives against direct summation."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcregions import (
    DistributionError,
    JointPmf,
    Pmf,
    conditional_mutual_information,
    entropy,
    mutual_information,
)
from oracles import cmi_direct, entropy_direct, h2, mi_direct

TOL = 1e-9


def joint_tables(max_axis: int = 4, axes: int = 2):
    """Strategy for small dense joint tables (normalized positive floats)."""
    sizes = st.lists(st.integers(2, max_axis), min_size=axes, max_size=axes)

    def build(shape_and_seed):
        shape, seed = shape_and_seed
        rng = np.random.default_rng(seed)
        t = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
        return JointPmf(t)

    return st.tuples(sizes, st.integers(0, 2**32 - 1)).map(build)


class TestEntropy:
    def test_uniform_four_symbols(self):
        assert entropy(Pmf.uniform(4)) == pytest.approx(2.0, abs=1e-12)

    def test_point_mass(self):
        assert entropy(Pmf.point_mass(5, 3)) == 0.0

    def test_skewed_binary(self):
        p = Pmf(np.array([0.9, 0.1]))
        assert entropy(p) == pytest.approx(0.4690, abs=5e-5)
        assert entropy(p) == pytest.approx(entropy_direct([0.9, 0.1]), abs=1e-12)

    @given(joint_tables(axes=2))
    def test_matches_direct_summation(self, j):
        assert entropy(j) == pytest.approx(entropy_direct(j.probs), abs=TOL)


class TestMutualInformation:
    def test_independent_product_is_zero(self):
        j = JointPmf(np.outer([0.3, 0.7], [0.2, 0.5, 0.3]))
        assert mutual_information(j) == pytest.approx(0.0, abs=1e-12)

    def test_identity_binary(self):
        j = JointPmf(np.array([[0.5, 0.0], [0.0, 0.5]]))
        assert mutual_information(j) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_binary_leg(self):
        # uniform input through a symmetric binary leg with crossover 0.1
        j = JointPmf(np.array([[0.45, 0.05], [0.05, 0.45]]))
        assert mutual_information(j) == pytest.approx(1.0 - h2(0.1), abs=1e-12)
        assert mutual_information(j) == pytest.approx(0.5310, abs=5e-5)

    def test_wrong_arity_rejected(self):
        with pytest.raises(DistributionError):
            mutual_information(JointPmf(np.full((2, 2, 2), 0.125)))

    @given(joint_tables(axes=2))
    def test_matches_direct_and_symmetric(self, j):
        direct = mi_direct(j.probs)
        assert mutual_information(j) == pytest.approx(direct, abs=TOL)
        assert mutual_information(j.transpose((1, 0))) == pytest.approx(direct, abs=TOL)

    @given(joint_tables(axes=2))
    def test_range_bound(self, j):
        cap = np.log2(min(j.probs.shape))
        assert -TOL <= mutual_information(j) <= cap + TOL


class TestConditionalMutualInformation:
    def test_irrelevant_conditioner(self):
        ab = np.array([[0.4, 0.1], [0.2, 0.3]])
        j = JointPmf(np.einsum("ab,c->abc", ab, [0.6, 0.4]))
        want = mutual_information(JointPmf(ab))
        assert conditional_mutual_information(j) == pytest.approx(want, abs=TOL)

    def test_conditioner_determines_first_axis(self):
        # A = C uniform binary, B independent
        t = np.zeros((2, 2, 2))
        for a in range(2):
            for b in range(2):
                t[a, b, a] = 0.25
        assert conditional_mutual_information(JointPmf(t)) == pytest.approx(0.0, abs=1e-12)

    def test_two_bit_input_with_one_bit_revealed(self):
        # X = two fair bits, Y = second bit, conditioner U = first bit
        t = np.zeros((4, 2, 2))
        for x in range(4):
            t[x, x & 1, x >> 1] = 0.25
        assert conditional_mutual_information(JointPmf(t)) == pytest.approx(1.0, abs=1e-12)

    def test_wrong_arity_rejected(self):
        with pytest.raises(DistributionError):
            conditional_mutual_information(JointPmf(np.full((2, 2), 0.25)))

    @given(joint_tables(axes=3, max_axis=3))
    def test_matches_direct_summation(self, j):
        assert conditional_mutual_information(j) == pytest.approx(cmi_direct(j.probs), abs=TOL)


class TestMarginalize:
    def test_keep_all_axes_is_identity(self):
        j = JointPmf(np.array([[0.1, 0.2], [0.3, 0.4]]))
        assert np.array_equal(j.marginalize((0, 1)).probs, j.probs)

    def test_product_keeps_factor(self):
        j = JointPmf(np.outer([0.3, 0.7], [0.25, 0.75]))
        np.testing.assert_allclose(j.marginalize((1,)).probs, [0.25, 0.75], atol=1e-15)

    def test_empty_keep_set_rejected(self):
        j = JointPmf(np.full((2, 2), 0.25))
        with pytest.raises(DistributionError):
            j.marginalize(())

    @given(joint_tables(axes=3, max_axis=3))
    def test_sums_eliminated_axes(self, j):
        np.testing.assert_allclose(
            j.marginalize((0, 2)).probs, j.probs.sum(axis=1), atol=1e-15
        )


class TestChainAndProcessing:
    @given(joint_tables(axes=3, max_axis=3))
    def test_chain_rule(self, j):
        # I(AB;C) = I(A;C) + I(B;C|A)
        a, b, c = j.probs.shape
        flat_ab = JointPmf(j.probs.reshape(a * b, c))
        i_ab_c = mutual_information(flat_ab)
        i_a_c = mutual_information(j.marginalize((0, 2)))
        i_b_c_given_a = conditional_mutual_information(j.transpose((1, 2, 0)))
        assert i_ab_c == pytest.approx(i_a_c + i_b_c_given_a, abs=TOL)

    @settings(max_examples=30)
    @given(st.integers(0, 2**32 - 1))
    def test_data_processing(self, seed):
        # Markov p(a) p(b|a) p(c|b): I(A;C) <= I(A;B)
        rng = np.random.default_rng(seed)
        pa = rng.dirichlet(np.ones(3))
        pb_a = rng.dirichlet(np.ones(3), size=3)
        pc_b = rng.dirichlet(np.ones(3), size=3)
        joint = np.einsum("a,ab,bc->abc", pa, pb_a, pc_b)
        j = JointPmf(joint)
        i_a_c = mutual_information(j.marginalize((0, 2)))
        i_a_b = mutual_information(j.marginalize((0, 1)))
        assert i_a_c <= i_a_b + TOL


class TestValidation:
    def test_negative_entries_rejected(self):
        with pytest.raises(DistributionError):
            Pmf(np.array([1.2, -0.2]))

    def test_unnormalized_rejected(self):
        with pytest.raises(DistributionError):
            JointPmf(np.array([[0.5, 0.4], [0.05, 0.02]]))

    def test_explicit_renormalization(self):
        j = JointPmf.normalized(np.array([[2.0, 1.0], [1.0, 1.0]]))
        assert j.probs.sum() == pytest.approx(1.0, abs=1e-15)
        assert j.probs[0, 0] == pytest.approx(0.4, abs=1e-15)

    def test_tiny_normalization_slack_accepted(self):
        probs = np.array([0.5, 0.5 - 2e-13])
        assert entropy(Pmf(probs)) == pytest.approx(1.0, abs=1e-9)
