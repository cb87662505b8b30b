import numpy as np
import pytest

from cmrmatrix.algebra import swap_factors
from cmrmatrix.lax import (
    PhasePoint,
    build_lax,
    eigenvalue_drift,
    energy_drift,
    finite_difference_poisson_tensor,
    hamiltonian,
    integrate_flow,
    lax_poisson_tensor,
    momentum_drift,
    random_phase_point,
    spectral_drift,
)
from cmrmatrix.potentials import PotentialKind, SingularityError

RAT = PotentialKind("rational")


class TestLax:
    def test_n2_rational(self):
        L = build_lax(PhasePoint([1.0, 0.0], [0.0, 0.0]), RAT)
        np.testing.assert_array_equal(L, [[0, 1j], [-1j, 0]])
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(L)), [-1.0, 1.0])

    def test_momenta_on_diagonal(self, kind):
        L = build_lax(PhasePoint([0.3, 1.1], [5.0, 7.0]), kind)
        np.testing.assert_array_equal(np.diag(L).real, [5.0, 7.0])
        L0 = build_lax(PhasePoint([0.3, 1.1], [0.0, 0.0]), kind)
        assert L[0, 1] == L0[0, 1]

    def test_n3_rational_entries(self):
        L = build_lax(PhasePoint([0.0, 1.0, 3.0], [0.0, 0.0, 0.0]), RAT)
        assert L[0, 1] == pytest.approx(-1j)
        assert L[0, 2] == pytest.approx(-1j / 3)
        assert L[1, 2] == pytest.approx(-1j / 2)
        np.testing.assert_allclose(L, L.conj().T)

    def test_hermitian_and_trace(self, kind, rng):
        for n in (2, 4, 5):
            x = random_phase_point(n, kind, rng)
            L = build_lax(x, kind)
            np.testing.assert_allclose(L, L.conj().T, atol=0)
            assert np.trace(L) == pytest.approx(x.p.sum(), abs=1e-14)

    def test_tr_L2_minus_h_independent_of_p(self, kind, rng):
        x = random_phase_point(4, kind, rng)

        def f(p):
            y = PhasePoint(x.q, p)
            return 0.5 * np.trace(build_lax(y, kind) @ build_lax(y, kind)).real - hamiltonian(y, kind)

        for k in range(4):
            e = np.zeros(4)
            e[k] = 1e-5
            assert abs(f(x.p + e) - f(x.p - e)) / 2e-5 < 1e-8


class TestHamiltonian:
    def test_static(self):
        assert hamiltonian(PhasePoint([1.0, 0.0], [0.0, 0.0]), RAT) == 1.0

    def test_kinetic(self):
        assert hamiltonian(PhasePoint([1.0, 0.0], [3.0, 4.0]), RAT) == pytest.approx(13.5)

    def test_free_limit(self):
        x = PhasePoint([0.0, 1e6, 2e6], [1.0, 2.0, 3.0])
        assert hamiltonian(x, RAT) == pytest.approx(7.0, rel=1e-11)


class TestPoissonTensor:
    def test_single_entry(self):
        T = lax_poisson_tensor(PhasePoint([1.0, 0.0], [0.0, 0.0]), RAT)
        assert T[0, 0, 0, 1] == pytest.approx(-1j)

    def test_diagonal_block_vanishes(self, kind, rng):
        T = lax_poisson_tensor(random_phase_point(3, kind, rng), kind)
        for k in range(3):
            for l in range(3):
                assert T[k, k, l, l] == 0

    def test_antisymmetric(self, kind, rng):
        T = lax_poisson_tensor(random_phase_point(4, kind, rng), kind)
        np.testing.assert_allclose(T, -swap_factors(T), atol=0)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_matches_finite_difference(self, n, kind, rng):
        x = random_phase_point(n, kind, rng)
        diff = lax_poisson_tensor(x, kind) - finite_difference_poisson_tensor(x, kind)
        assert np.abs(diff).max() < 1e-6


class TestFlow:
    def test_free_particle(self):
        traj = integrate_flow(PhasePoint([0.5], [2.0]), RAT, 0.01, 100)
        np.testing.assert_allclose(traj.q[-1], [0.5 + 2.0 * 1.0], rtol=1e-14)
        assert spectral_drift(traj) == 0.0

    def test_momentum_conserved(self, rng):
        x = random_phase_point(3, RAT, rng)
        traj = integrate_flow(x, RAT, 1e-3, 2000)
        assert momentum_drift(traj) < 1e-12

    def test_energy_convergence(self):
        x = PhasePoint([1.0, 0.0], [-2.0, 2.0])
        d1 = energy_drift(integrate_flow(x, RAT, 1e-3, 10000))
        d2 = energy_drift(integrate_flow(x, RAT, 5e-4, 20000))
        assert d1 < 1e-8
        assert d1 / d2 > 8

    def test_isospectral(self):
        traj = integrate_flow(PhasePoint([1.0, 0.0], [0.3, -0.3]), RAT, 1e-3, 10000)
        assert spectral_drift(traj) < 1e-7

    def test_eigenvalues_n3(self, kind, rng):
        x = random_phase_point(3, kind, rng)
        traj = integrate_flow(x, kind, 1e-3, 3000)
        assert eigenvalue_drift(traj) < 1e-6

    def test_collision_aborts(self):
        with pytest.raises(SingularityError) as info:
            integrate_flow(PhasePoint([0.0, 1.0], [2000.0, -2000.0]), RAT, 1e-3, 100)
        assert info.value.pair == (0, 1)
        assert info.value.step == 0

    def test_bad_step(self):
        with pytest.raises(ValueError):
            integrate_flow(PhasePoint([0.0], [1.0]), RAT, 0.0, 10)

    def test_trajectory_shape(self, rng):
        x = random_phase_point(3, RAT, rng)
        traj = integrate_flow(x, RAT, 1e-2, 50)
        assert len(traj) == 51
        assert np.all(np.diff(traj.times) > 0)
        assert traj.states[0].q.tolist() == x.q.tolist()


def test_random_points_are_regular(kind, rng):
    for n in (2, 6):
        x = random_phase_point(n, kind, rng)
        d = np.abs(x.q[:, None] - x.q[None, :])[np.triu_indices(n, 1)]
        if kind.variant == "trigonometric":
            d = np.mod(kind.a * d, np.pi)
            assert np.all((d > 0.1) & (d < np.pi - 0.1))
        else:
            assert d.min() > 0.1
        assert np.all(np.abs(x.p) <= 1.0)
