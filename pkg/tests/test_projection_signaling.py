import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from qkinema.core.errors import (
    ConsistencyError,
    DimensionMismatchError,
    IndistinguishableEnsemblesError,
    NonProjectiveMeasurementError,
    ValidationError,
    ZeroProbabilityBranchError,
)
from qkinema.core.kinematics import (
    DensityOperator,
    PureState,
    barycenter,
    basis_state,
    maximally_mixed,
    minus_state,
    plus_state,
    random_bipartite_pure,
    random_density,
    singlet_state,
)
from qkinema.core.measurement import (
    EnsembleFunctional,
    Povm,
    basis_overlap_functional,
    computational_basis_povm,
    outcome_probabilities,
    random_projective_povm,
    trace_rule_functional,
    x_basis_povm,
)
from qkinema.core.operator_core import partial_trace, projector, tensor, trace_distance
from qkinema.core.projection_signaling import (
    SignalingVerdict,
    Theory,
    local_measurement_on_B,
    post_measurement_ensemble,
    project,
    repeat_measurement,
    simulate_eqm_signaling,
    steer,
    verify_no_signaling,
)

KET0 = projector([1, 0])
KET1 = projector([0, 1])


def rotated_basis(dim, seed):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    return q


class TestProjection(unittest.TestCase):

    def setUp(self):
        self.singlet = singlet_state().density()
        self.z_on_b = local_measurement_on_B(computational_basis_povm(2), 2)

    def test_singlet_post_states(self):
        first = project(self.z_on_b, self.singlet, 0)
        second = project(self.z_on_b, self.singlet, 1)
        self.assertAlmostEqual(first.probability, 0.5, delta=1e-12)
        np.testing.assert_allclose(first.post_state.matrix, tensor(KET1, KET0), atol=1e-12)
        np.testing.assert_allclose(second.post_state.matrix, tensor(KET0, KET1), atol=1e-12)
        np.testing.assert_allclose(
            partial_trace(first.post_state.matrix, (2, 2), keep="A"), KET1, atol=1e-12
        )

    def test_repeat_gives_same_outcome(self):
        record = project(computational_basis_povm(3), random_density(3, 1), 2)
        np.testing.assert_allclose(repeat_measurement(computational_basis_povm(3), record), [0, 0, 1], atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(2, 4))
    def test_repeat_on_random_measurements(self, seed, dim):
        rng = np.random.default_rng(seed)
        m = random_projective_povm(dim, rng)
        rho = random_density(dim, rng)
        for k, p in enumerate(outcome_probabilities(m, rho)):
            if p > 1e-6:
                expected = np.zeros(dim)
                expected[k] = 1.0
                np.testing.assert_allclose(repeat_measurement(m, project(m, rho, k)), expected, atol=1e-9)

    def test_zero_probability_branch(self):
        with self.assertRaises(ZeroProbabilityBranchError):
            project(computational_basis_povm(2), basis_state(2, 0).density(), 1)

    def test_non_projective_measurement(self):
        halves = Povm.from_projectors([np.eye(2) / 2, np.eye(2) / 2])
        with self.assertRaises(NonProjectiveMeasurementError):
            project(halves, maximally_mixed(2), 0)
        with self.assertRaises(NonProjectiveMeasurementError):
            post_measurement_ensemble(halves, maximally_mixed(2))

    def test_outcome_index_range(self):
        with self.assertRaises(ValidationError):
            project(computational_basis_povm(2), maximally_mixed(2), 2)

    def test_post_measurement_ensemble(self):
        e = post_measurement_ensemble(computational_basis_povm(2), plus_state().density())
        np.testing.assert_allclose(e.weights, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(barycenter(e).matrix, np.eye(2) / 2, atol=1e-12)

    def test_post_measurement_drops_impossible_outcomes(self):
        e = post_measurement_ensemble(computational_basis_povm(2), basis_state(2, 0).density())
        self.assertEqual(len(e), 1)
        self.assertEqual(e.weights, (1.0,))


class TestLowProbabilityBranches(unittest.TestCase):

    def test_project_just_above_the_floor(self):
        for eps in (1e-8, 1e-11):
            for seed in range(20):
                with self.subTest(eps=eps, seed=seed):
                    u = rotated_basis(2, seed)
                    m = Povm.from_projectors([projector(u[:, 0]), projector(u[:, 1])])
                    psi = PureState.normalized(np.sqrt(1 - eps) * u[:, 0] + np.sqrt(eps) * u[:, 1])
                    record = project(m, psi.density(), 1)
                    self.assertAlmostEqual(record.probability / eps, 1.0, delta=1e-3)
                    self.assertLessEqual(trace_distance(record.post_state, projector(u[:, 1])), 1e-3)

    def test_steer_with_a_rare_branch(self):
        a0, a1 = np.eye(2)
        for eps in (1e-8, 1e-11):
            for seed in range(20):
                with self.subTest(eps=eps, seed=seed):
                    u = rotated_basis(3, seed)
                    m = Povm.from_projectors([projector(u[:, k]) for k in range(3)])
                    psi = PureState.normalized(
                        np.sqrt(1 - eps) * np.kron(a0, u[:, 0]) + np.sqrt(eps) * np.kron(a1, u[:, 1])
                    )
                    rho = psi.density()
                    e = steer(rho, m, (2, 3)).ensemble
                    self.assertEqual(len(e), 2)
                    self.assertAlmostEqual(e.weights[1] / eps, 1.0, delta=1e-3)
                    self.assertLessEqual(trace_distance(e.states[1], KET1), 1e-3)
                    verdict = verify_no_signaling(rho, [m, random_projective_povm(3, seed)], (2, 3))
                    self.assertLessEqual(verdict.channel_gap, 1e-9)


class TestSteering(unittest.TestCase):

    def setUp(self):
        self.singlet = singlet_state().density()

    def test_z_steering(self):
        steered = steer(self.singlet, computational_basis_povm(2))
        e = steered.ensemble
        self.assertEqual(steered.measurement_name, "Z")
        np.testing.assert_allclose(e.weights, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(e.states[0].matrix, KET1, atol=1e-12)
        np.testing.assert_allclose(e.states[1].matrix, KET0, atol=1e-12)

    def test_x_steering(self):
        e = steer(self.singlet, x_basis_povm()).ensemble
        np.testing.assert_allclose(e.weights, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(e.states[0].matrix, minus_state().projector(), atol=1e-12)
        np.testing.assert_allclose(e.states[1].matrix, plus_state().projector(), atol=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            steer(self.singlet, computational_basis_povm(3))
        with self.assertRaises(DimensionMismatchError):
            steer(self.singlet, computational_basis_povm(2), (3, 2))

    def test_product_state_is_not_steered(self):
        rho_a = random_density(3, 8)
        product = DensityOperator(tensor(rho_a.matrix, random_density(2, 9).matrix))
        e = steer(product, x_basis_povm(), (3, 2)).ensemble
        for state in e.states:
            np.testing.assert_allclose(state.matrix, rho_a.matrix, atol=1e-10)


class TestNoSignaling(unittest.TestCase):

    def test_singlet(self):
        verdict = verify_no_signaling(
            singlet_state().density(), [computational_basis_povm(2), x_basis_povm()], (2, 2)
        )
        self.assertIs(verdict.theory, Theory.QM)
        self.assertFalse(verdict.signaling)
        self.assertLessEqual(verdict.channel_gap, 1e-12)

    def test_random_qutrit_pairs(self):
        rng = np.random.default_rng(3)
        rho = random_density(9, rng)
        bases = [random_projective_povm(3, rng) for _ in range(20)]
        self.assertLessEqual(verify_no_signaling(rho, bases, (3, 3)).channel_gap, 1e-10)

    def test_random_states_over_dimensions(self):
        pairs = [(d_a, d_b) for d_a in (2, 3, 4) for d_b in (2, 3, 4)]
        seeds = np.random.SeedSequence(2026).spawn(500)
        for index, child in enumerate(seeds):
            d_a, d_b = pairs[index % len(pairs)]
            rng = np.random.default_rng(child)
            if index % 2 == 0:
                rho = random_bipartite_pure(d_a, d_b, rng).density()
            else:
                rho = random_density(d_a * d_b, rng)
            bases = [random_projective_povm(d_b, rng) for _ in range(10)]
            verdict = verify_no_signaling(rho, bases, (d_a, d_b), tol=1e-9)
            self.assertLessEqual(verdict.channel_gap, 1e-9, f"state {index} on {d_a}x{d_b}")

    def test_needs_a_measurement(self):
        with self.assertRaises(ValidationError):
            verify_no_signaling(singlet_state().density(), [])

    def test_qm_verdict_cannot_signal(self):
        with self.assertRaises(ConsistencyError):
            SignalingVerdict(Theory.QM, True, 0.1, "impossible")


class TestEqmSignaling(unittest.TestCase):

    def setUp(self):
        self.functional = basis_overlap_functional(basis_state(2, 0))

    def test_protocol_signals(self):
        verdict = simulate_eqm_signaling(self.functional, n_shots=32, seed=11)
        self.assertIs(verdict.theory, Theory.EQM)
        self.assertTrue(verdict.signaling)
        self.assertAlmostEqual(verdict.channel_gap, 0.25, delta=1e-10)
        self.assertAlmostEqual(verdict.evidence["values"]["Z"], 0.5, delta=1e-12)
        self.assertAlmostEqual(verdict.evidence["values"]["X"], 0.25, delta=1e-12)
        self.assertTrue(verdict.evidence["qm_equivalent"])
        self.assertEqual(verdict.evidence["success_rate"], 1.0)
        self.assertEqual(len(verdict.evidence["transcript"]), 32)

    def test_transcript_is_reproducible(self):
        a = simulate_eqm_signaling(self.functional, n_shots=16, seed=5)
        b = simulate_eqm_signaling(self.functional, n_shots=16, seed=5)
        self.assertEqual(a.evidence["transcript"], b.evidence["transcript"])

    def test_both_bits_are_sent(self):
        verdict = simulate_eqm_signaling(self.functional, n_shots=64, seed=0)
        self.assertEqual({t["sent"] for t in verdict.evidence["transcript"]}, {0, 1})

    def test_linear_functional_is_rejected(self):
        with self.assertRaises(ValidationError):
            simulate_eqm_signaling(trace_rule_functional(computational_basis_povm(2), 0), n_shots=4, seed=0)

    def test_flat_functional_cannot_signal(self):
        flat = EnsembleFunctional("flat", lambda e: 1.0, nonlinear=True)
        with self.assertRaises(IndistinguishableEnsemblesError):
            simulate_eqm_signaling(flat, n_shots=4, seed=0)

    def test_needs_a_shot(self):
        with self.assertRaises(ValidationError):
            simulate_eqm_signaling(self.functional, n_shots=0, seed=0)


if __name__ == "__main__":
    unittest.main()
