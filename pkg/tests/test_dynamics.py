import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberarray.dynamics import (
    BathSpec,
    EvolutionConfig,
    IntegrationError,
    SteadyStateNotReached,
    compile_generator,
    evolve,
    liouvillian_apply,
    rk4_step,
    steady_state,
)
from fiberarray.hilbert import basis_state, density_from_pure
from fiberarray.oracle import apply_dense, dense_liouvillian

from conftest import SINGLET, projector, random_density, random_matrix

ZERO_T2 = BathSpec.uniform([0.0])


def baths(n):
    rates = st.floats(0.0, 3.0, allow_nan=False)
    return st.builds(BathSpec, st.lists(rates, min_size=n - 1, max_size=n - 1).map(tuple),
                     st.lists(rates, min_size=n - 1, max_size=n - 1).map(tuple))


def hermitian(rng, d):
    m = random_matrix(rng, d)
    return m + m.conj().T


# -- BathSpec / EvolutionConfig

def test_bath_validation():
    with pytest.raises(ValueError, match="entries"):
        BathSpec((1.0,), (0.0, 0.0))
    with pytest.raises(ValueError, match="nonnegative"):
        BathSpec((1.0,), (-0.1,))
    with pytest.raises(ValueError, match="finite"):
        BathSpec((np.inf,), (0.0,))
    assert BathSpec.uniform([0.2, 0.0]).gammas == (1.0, 1.0)
    assert BathSpec.uniform([0.2, 0.0]).n_sites == 3


@pytest.mark.parametrize("kwargs", [{"dt": 0.0}, {"dt": 0.2}, {"t_max": 0.0}, {"record_stride": 0},
                                    {"steady_tol": 1e-13}])
def test_evolution_config_guards(kwargs):
    with pytest.raises(ValueError):
        EvolutionConfig(**kwargs)


# -- Liouvillian examples

@pytest.mark.parametrize("n", [2, 3, 4])
def test_ground_state_is_annihilated(n):
    rho = projector("G" * n)
    np.testing.assert_array_equal(liouvillian_apply(rho, BathSpec.uniform([0.0] * (n - 1))), 0)


def test_doubly_excited_pair():
    out = liouvillian_apply(projector("EE"), ZERO_T2)
    expected = np.zeros((4, 4))
    expected[3, 3] = -4
    expected[1:3, 1:3] = 2
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_singlet_is_dark():
    rho = density_from_pure(SINGLET)
    np.testing.assert_allclose(liouvillian_apply(rho, ZERO_T2), 0, atol=1e-15)
    # J and J^+ both annihilate the antisymmetric state, so it stays dark at any occupation
    np.testing.assert_allclose(liouvillian_apply(rho, BathSpec.uniform([0.3])), 0, atol=1e-15)
    # a symmetric excitation is not dark
    assert np.abs(liouvillian_apply(projector("EG"), ZERO_T2)).max() > 0.1


def test_liouvillian_size_mismatch():
    with pytest.raises(ValueError, match="bath describes"):
        liouvillian_apply(projector("GGG"), ZERO_T2)


# -- Liouvillian properties

@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), bath=baths(3))
def test_trace_and_hermiticity_preserved(seed, bath):
    rng = np.random.default_rng(seed)
    rho = hermitian(rng, 8)
    out = liouvillian_apply(rho, bath)
    assert abs(np.trace(out)) < 1e-12 * max(1.0, np.abs(rho).max())
    np.testing.assert_allclose(out, out.conj().T, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), bath=baths(3))
def test_linearity(seed, bath):
    rng = np.random.default_rng(seed)
    a, b = random_matrix(rng, 8), random_matrix(rng, 8)
    x, y = rng.normal(size=2) + 1j * rng.normal(size=2)
    lhs = liouvillian_apply(x * a + y * b, bath)
    rhs = x * liouvillian_apply(a, bath) + y * liouvillian_apply(b, bath)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.sampled_from([2, 3]), data=st.data())
def test_fast_paths_match_dense_superoperator(seed, n, data):
    bath = data.draw(baths(n))
    rho = random_density(np.random.default_rng(seed), 2**n)
    ref = apply_dense(dense_liouvillian(bath), rho)
    np.testing.assert_allclose(liouvillian_apply(rho, bath), ref, atol=1e-12)
    sparse = compile_generator(bath)(rho.ravel()).reshape(rho.shape)
    np.testing.assert_allclose(sparse, ref, atol=1e-12)


def test_sparse_generator_matches_matrix_free_at_n5(rng):
    bath = BathSpec((1.0, 0.5, 2.0, 1.0), (0.0, 0.2, 1.0, 0.3))
    rho = random_density(rng, 32)
    got = compile_generator(bath)(rho.ravel()).reshape(32, 32)
    np.testing.assert_allclose(got, liouvillian_apply(rho, bath), atol=1e-12)


# -- RK4

def test_rk4_zero_step_returns_copy():
    rho = projector("EG")
    out = rk4_step(rho, 0.0, ZERO_T2)
    np.testing.assert_array_equal(out, rho)
    assert out is not rho


@pytest.mark.parametrize("dt", [1e-3, 0.01, 0.05, 0.1])
def test_rk4_keeps_dark_state(dt):
    rho = density_from_pure(SINGLET)
    np.testing.assert_allclose(rk4_step(rho, dt, ZERO_T2), rho, atol=1e-14)


def test_rk4_rejects_negative_step():
    with pytest.raises(ValueError):
        rk4_step(projector("GG"), -0.1, ZERO_T2)


def test_rk4_output_is_hermitian(rng):
    bath = BathSpec((1.0, 0.7), (0.4, 1.2))
    out = rk4_step(random_density(rng, 8), 0.05, bath)
    np.testing.assert_array_equal(out, out.conj().T)


def test_step_doubling_order():
    bath = BathSpec.uniform([0.2, 0.0])
    rho0 = projector("GGG")

    def at_one(dt):
        return evolve(rho0, bath, EvolutionConfig(dt=dt, t_max=1.0, record_stride=10**6)).states[-1]

    finals = [at_one(dt) for dt in (0.1, 0.05, 0.025)]
    e1 = np.abs(finals[0] - finals[1]).max()
    e2 = np.abs(finals[1] - finals[2]).max()
    assert np.log2(e1 / e2) >= 3.7


# -- evolve

def test_evolve_ground_state_is_constant():
    rho0 = projector("GGG")
    traj = evolve(rho0, BathSpec.uniform([0.0, 0.0]), EvolutionConfig(t_max=10, record_stride=500))
    assert max(np.abs(r - rho0).max() for r in traj.states) < 1e-10


def test_evolve_sampling_grid():
    cfg = EvolutionConfig(dt=0.01, t_max=1.005, record_stride=30)
    traj = evolve(projector("EG"), ZERO_T2, cfg)
    assert traj.times[0] == 0
    assert np.all(np.diff(traj.times) > 0)
    assert len(traj.times) == len(traj.states)
    # the last step is always recorded
    assert traj.times[-1] == pytest.approx(cfg.n_steps * cfg.dt)
    assert traj.times[-1] >= 1.0


def test_evolve_observers_and_keep_states():
    seen = []
    traj = evolve(projector("EE"), ZERO_T2, EvolutionConfig(dt=0.01, t_max=1, record_stride=10),
                  observers=[lambda t, rho: seen.append((t, np.trace(rho).real))], keep_states=False)
    assert traj.states == []
    assert [t for t, _ in seen] == list(traj.times)
    assert all(abs(tr - 1) < 1e-12 for _, tr in seen)


def test_evolve_reports_trace_drift():
    traj = evolve(projector("EEE"), BathSpec.uniform([0.5, 1.0]), EvolutionConfig(dt=0.01, t_max=5, record_stride=50))
    assert traj.max_trace_drift < 1e-12


def test_evolve_aborts_on_positivity_loss():
    # a large step at strong coupling drives RK4 far outside its stability region
    bath = BathSpec((1.0,), (60.0,))
    with pytest.raises(IntegrationError, match="positivity lost"):
        evolve(projector("EE"), bath, EvolutionConfig(dt=0.1, t_max=5, record_stride=1))


def test_evolve_size_mismatch():
    with pytest.raises(ValueError):
        evolve(projector("GG"), BathSpec.uniform([0.0, 0.0]))


# -- steady_state

def test_steady_ground_state_immediate():
    res = steady_state(projector("GGG"), BathSpec.uniform([0.0, 0.0]))
    assert res.time == 0
    np.testing.assert_array_equal(res.rho, projector("GGG"))


def test_steady_from_doubly_excited_pair():
    res = steady_state(projector("EE"), ZERO_T2)
    np.testing.assert_allclose(res.rho, projector("GG"), atol=1e-8)
    assert res.residual < 1e-9


def test_steady_singlet_unchanged():
    rho = density_from_pure(SINGLET)
    res = steady_state(rho, ZERO_T2)
    assert res.time == 0
    np.testing.assert_allclose(res.rho, rho, atol=1e-15)


def test_steady_depends_on_initial_state():
    # the singlet overlap is conserved at zero temperature
    psi = basis_state("GE")
    res = steady_state(density_from_pure(psi), ZERO_T2)
    singlet = density_from_pure(SINGLET)
    assert np.trace(res.rho @ singlet).real == pytest.approx(0.5, abs=1e-8)


def test_steady_guard():
    with pytest.raises(SteadyStateNotReached) as info:
        steady_state(projector("EE"), ZERO_T2, t_guard=0.5)
    assert info.value.last_norm > 1e-9
    assert "no steady state within guard" in str(info.value)
