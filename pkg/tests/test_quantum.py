import numpy as np
import pytest

from reductionlab.errors import (
    DimensionMismatchError,
    ValidationError,
)
from reductionlab.linalg import TOL_OP, identity, max_abs, tensor
from reductionlab.quantum import (
    DensityOperator,
    Observable,
    OutcomeDistribution,
    born_distribution,
    evolve,
    operator_deviation,
    pure,
    random_density,
    reduced_state,
    rule1_distribution,
    spanning_states,
)
from reductionlab.zoo import KET_0, KET_PLUS, PAULI_X, PAULI_Z

RNG = np.random.default_rng(99)


def random_hermitian(d, rng=RNG):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


class TestTypes:
    def test_observable_spectrum_increasing(self):
        obs = Observable(random_hermitian(5))
        vals = obs.eigenvalues
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_observable_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            Observable(np.array([[0, 1], [0, 0]]))

    def test_density_rejects_negative(self):
        with pytest.raises(ValidationError):
            DensityOperator(np.diag([1.5, -0.5]))

    def test_density_rejects_bad_trace(self):
        with pytest.raises(ValidationError):
            DensityOperator(identity(2))

    def test_density_dims_must_be_consistent(self):
        with pytest.raises(DimensionMismatchError):
            DensityOperator(identity(4) / 4, dims=(2, 3))

    def test_distribution_rejects_unnormalized(self):
        with pytest.raises(ValidationError):
            OutcomeDistribution({0.0: 0.3, 1.0: 0.3})


class TestBornDistribution:
    def test_eigenstate(self):
        d = born_distribution(Observable(PAULI_Z), pure(KET_0))
        assert d.probability(1.0) == pytest.approx(1.0)
        assert d.probability(-1.0) == pytest.approx(0.0)

    def test_maximally_mixed(self):
        d = born_distribution(Observable(PAULI_Z), DensityOperator(identity(2) / 2))
        assert d.probability(1.0) == pytest.approx(0.5)

    def test_pauli_x_on_ket0(self):
        d = born_distribution(Observable(PAULI_X), pure(KET_0))
        assert d.probability(1.0) == pytest.approx(0.5)
        assert d.probability(-1.0) == pytest.approx(0.5)

    def test_normalization_random(self):
        for _ in range(10):
            obs = Observable(random_hermitian(4))
            d = born_distribution(obs, random_density(RNG, 4))
            assert sum(d.entries.values()) == pytest.approx(1.0, abs=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            born_distribution(Observable(PAULI_Z), DensityOperator(identity(3) / 3))


class TestEvolve:
    def test_zero_hamiltonian(self):
        rho = random_density(RNG, 3)
        assert operator_deviation(evolve(rho, np.zeros((3, 3)), 2.0), rho) < 1e-12

    def test_eigenstate_stationary(self):
        rho = pure(KET_0)
        assert operator_deviation(evolve(rho, PAULI_Z, 1.3), rho) < 1e-12

    def test_qubit_precession(self):
        # |+> under H=Z for pi/2: <X> flips sign
        rho_t = evolve(pure(KET_PLUS), PAULI_Z, np.pi / 2)
        x_exp = float(np.trace(PAULI_X @ rho_t.matrix).real)
        assert x_exp == pytest.approx(-1.0, abs=1e-12)

    def test_preserves_spectrum_and_trace(self):
        rho = random_density(RNG, 4)
        h = random_hermitian(4)
        out = evolve(rho, h, 0.7)
        assert np.trace(out.matrix).real == pytest.approx(1.0, abs=1e-12)
        before = np.sort(np.linalg.eigvalsh(rho.matrix))
        after = np.sort(np.linalg.eigvalsh(out.matrix))
        assert max_abs(before - after) < 1e-9


class TestRule1Distribution:
    def test_tau_zero_is_born(self):
        rho = random_density(RNG, 3)
        obs = Observable(random_hermitian(3))
        h = random_hermitian(3)
        d0 = rule1_distribution(rho, h, obs, 0.0)
        assert d0.max_deviation(born_distribution(obs, rho)) < 1e-12

    def test_free_hamiltonian_time_independent(self):
        rho = random_density(RNG, 2)
        obs = Observable(PAULI_X)
        d1 = rule1_distribution(rho, np.zeros((2, 2)), obs, 0.5)
        d2 = rule1_distribution(rho, np.zeros((2, 2)), obs, 5.0)
        assert d1.max_deviation(d2) < 1e-12

    def test_two_path_equality(self):
        rho = random_density(RNG, 3)
        obs = Observable(random_hermitian(3))
        h = random_hermitian(3)
        got = rule1_distribution(rho, h, obs, 0.9)
        # independent path: evolve projections backwards instead of the state
        from reductionlab.linalg import dagger, herm_expm
        ut = herm_expm(h, 0.9)
        expected = {
            a: float(np.trace(dagger(ut) @ p @ ut @ rho.matrix).real)
            for a, p in obs.spectrum
        }
        for a, p in expected.items():
            assert got.probability(a) == pytest.approx(p, abs=1e-12)


class TestReducedState:
    def test_product_state(self):
        rho1, rho2 = random_density(RNG, 2), random_density(RNG, 3)
        joint = DensityOperator(tensor(rho1.matrix, rho2.matrix), dims=(2, 3))
        assert operator_deviation(reduced_state(joint, [0]), rho1) < 1e-12

    def test_bell_state(self):
        phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
        bell = DensityOperator(np.outer(phi, phi), dims=(2, 2))
        assert max_abs(reduced_state(bell, [0]).matrix - identity(2) / 2) < 1e-12

    def test_adjointness(self):
        rho = DensityOperator(random_density(RNG, 4).matrix, dims=(2, 2))
        red = reduced_state(rho, [0])
        for _ in range(20):
            x = random_hermitian(2)
            lhs = np.trace(tensor(x, identity(2)) @ rho.matrix)
            rhs = np.trace(x @ red.matrix)
            assert abs(lhs - rhs) < 1e-10

    def test_requires_dims(self):
        with pytest.raises(DimensionMismatchError):
            reduced_state(random_density(RNG, 4), [0])

    def test_local_evolution_commutes_with_reduction(self):
        # no-interaction case: evolve then reduce == reduce then evolve
        rho = DensityOperator(random_density(RNG, 6).matrix, dims=(2, 3))
        h1, h2 = random_hermitian(2), random_hermitian(3)
        h12 = tensor(h1, identity(3)) + tensor(identity(2), h2)
        lhs = reduced_state(evolve(rho, h12, 0.6), [0])
        rhs = evolve(reduced_state(rho, [0]), h1, 0.6)
        assert operator_deviation(lhs, rhs) < TOL_OP


class TestSpanningStates:
    def test_count_and_validity(self):
        states = spanning_states(3)
        assert len(states) == 9

    def test_spans_hermitian_space(self):
        d = 3
        mats = [s.matrix.ravel() for s in spanning_states(d)]
        rank = np.linalg.matrix_rank(np.array(mats))
        assert rank == d * d
