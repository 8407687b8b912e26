import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from qkinema.core.errors import DimensionMismatchError, UnknownLabelError, ValidationError
from qkinema.core.kinematics import (
    DensityOperator,
    Ensemble,
    basis_state,
    maximally_mixed,
    minus_state,
    mix_ensembles,
    plus_state,
    random_density,
    random_ensemble,
    singlet_state,
)
from qkinema.core.measurement import (
    Povm,
    basis_overlap_functional,
    computational_basis_povm,
    event_probability,
    functional_gap,
    is_projective,
    outcome_probabilities,
    random_projective_povm,
    trace_rule_functional,
    trivial_povm,
    x_basis_povm,
)
from qkinema.core.operator_core import projector
from qkinema.core.projection_signaling import local_measurement_on_B

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestPovm(unittest.TestCase):

    def test_effects_must_sum_to_identity(self):
        with self.assertRaises(ValidationError):
            Povm.from_projectors([projector([1, 0])])

    def test_effects_must_be_positive(self):
        with self.assertRaises(ValidationError):
            Povm.from_projectors([np.diag([1.2, 0.5]), np.diag([-0.2, 0.5])])

    def test_labels_must_be_distinct(self):
        with self.assertRaises(ValidationError):
            Povm.from_projectors([projector([1, 0]), projector([0, 1])], labels=[1, 1])

    def test_effects_share_a_shape(self):
        with self.assertRaises(DimensionMismatchError):
            Povm(((0, np.eye(2)), (1, np.zeros((3, 3)))))

    def test_unknown_label(self):
        with self.assertRaises(UnknownLabelError):
            computational_basis_povm(2).index_of(5)

    def test_trivial_povm(self):
        m = trivial_povm(3)
        self.assertEqual(len(m), 1)
        np.testing.assert_allclose(outcome_probabilities(m, random_density(3, 0)), [1.0], atol=1e-12)


class TestProjectivity(unittest.TestCase):

    def test_basis_measurements_are_projective(self):
        self.assertTrue(is_projective(computational_basis_povm(3)))
        self.assertTrue(is_projective(x_basis_povm()))

    def test_halves_of_identity_are_not(self):
        self.assertFalse(is_projective(Povm.from_projectors([np.eye(2) / 2, np.eye(2) / 2])))

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(1, 5))
    def test_random_bases_are_projective(self, seed, dim):
        self.assertTrue(is_projective(random_projective_povm(dim, seed)))


class TestTraceRule(unittest.TestCase):

    def test_singlet_with_z_on_b(self):
        m = local_measurement_on_B(computational_basis_povm(2), 2)
        np.testing.assert_allclose(outcome_probabilities(m, singlet_state().density()), [0.5, 0.5], atol=1e-12)

    def test_plus_state_in_z(self):
        probs = outcome_probabilities(computational_basis_povm(2), plus_state().density())
        np.testing.assert_allclose(probs, [0.5, 0.5], atol=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            outcome_probabilities(computational_basis_povm(3), maximally_mixed(2))

    def test_event_probability_edges(self):
        m = computational_basis_povm(3)
        rho = random_density(3, 5)
        self.assertAlmostEqual(event_probability(m, rho, m.labels), 1.0, delta=1e-10)
        self.assertEqual(event_probability(m, rho, []), 0.0)
        with self.assertRaises(UnknownLabelError):
            event_probability(m, rho, [7])

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(2, 4))
    def test_events_are_additive(self, seed, dim):
        rng = np.random.default_rng(seed)
        m = random_projective_povm(dim, rng)
        rho = random_density(dim, rng)
        labels = list(m.labels)
        split = int(rng.integers(0, len(labels) + 1))
        a, b = labels[:split], labels[split:]
        total = event_probability(m, rho, a) + event_probability(m, rho, b)
        self.assertAlmostEqual(total, 1.0, delta=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(2, 4), st.floats(0.0, 1.0))
    def test_probabilities_are_affine(self, seed, dim, alpha):
        rng = np.random.default_rng(seed)
        m = random_projective_povm(dim, rng)
        r1, r2 = random_density(dim, rng), random_density(dim, rng)
        mixed = DensityOperator(alpha * r1.matrix + (1 - alpha) * r2.matrix)
        expected = alpha * np.array(outcome_probabilities(m, r1)) + (1 - alpha) * np.array(
            outcome_probabilities(m, r2)
        )
        np.testing.assert_allclose(outcome_probabilities(m, mixed), expected, atol=1e-12)


class TestEnsembleFunctionals(unittest.TestCase):

    def setUp(self):
        zero, one = basis_state(2, 0).density(), basis_state(2, 1).density()
        self.z_mix = Ensemble(((0.5, one), (0.5, zero)))
        self.x_mix = Ensemble.from_pure_states([0.5, 0.5], [minus_state(), plus_state()])
        self.overlap = basis_overlap_functional(basis_state(2, 0))

    def test_basis_overlap_values(self):
        self.assertAlmostEqual(self.overlap(self.z_mix), 0.5, delta=1e-12)
        self.assertAlmostEqual(self.overlap(self.x_mix), 0.25, delta=1e-12)
        self.assertAlmostEqual(functional_gap(self.overlap, self.z_mix, self.x_mix), 0.25, delta=1e-12)
        self.assertTrue(self.overlap.nonlinear)

    def test_trace_rule_functional_cannot_tell_them_apart(self):
        f = trace_rule_functional(computational_basis_povm(2), 0)
        self.assertFalse(f.nonlinear)
        self.assertAlmostEqual(functional_gap(f, self.z_mix, self.x_mix), 0.0, delta=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            self.overlap(Ensemble.dirac(maximally_mixed(3)))

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.floats(0.0, 1.0))
    def test_overlap_is_affine_under_mixing(self, seed, alpha):
        rng = np.random.default_rng(seed)
        e1, e2 = random_ensemble(2, 3, rng), random_ensemble(2, 2, rng)
        mixed = mix_ensembles([(alpha, e1), (1 - alpha, e2)])
        expected = alpha * self.overlap(e1) + (1 - alpha) * self.overlap(e2)
        self.assertAlmostEqual(self.overlap(mixed), expected, delta=1e-12)


if __name__ == "__main__":
    unittest.main()
