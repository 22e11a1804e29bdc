import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from demguard.attacks import faked_states_qber
from demguard.errors import DomainError
from demguard.oracle import (
    CounterRNG,
    FockOpSpec,
    FockSpace,
    build_operation,
    discriminate_brute_force,
    helstrom_bound,
    helstrom_states,
    simulate_faked_states,
    simulate_time_shift,
    verify_vacuum_commutation,
)
from demguard.oracle.fock import beamsplitter
from demguard.oracle.montecarlo import resolve_clicks

SEED = 20240501
TRIALS = 10**6


def within(value, target, stderr, k=4.0):
    return abs(value - target) <= k * stderr


@pytest.mark.parametrize("eta", [0.5, 1.0])
def test_faked_states_qber(eta):
    s = simulate_faked_states(eta, TRIALS, SEED)
    assert within(s.qber_estimate, faked_states_qber(eta), s.stderr)


def test_faked_states_detection_fraction():
    s = simulate_faked_states(0.25, TRIALS, SEED)
    assert within(s.detection_fraction, (1 + 3 * 0.25) / 4, s.detection_stderr)


@pytest.mark.parametrize("eta", [0.2, 0.6])
def test_faked_states_eve_information_is_one_minus_qber(eta):
    s = simulate_faked_states(eta, TRIALS, SEED + 1)
    assert within(s.mutual_info_estimate, 1 - faked_states_qber(eta), s.informed_stderr)
    assert within(s.mutual_info_estimate, 1 - s.qber_estimate, math.hypot(s.informed_stderr, s.stderr))


def test_counts_are_nested():
    for s in (simulate_faked_states(0.3, 10**5, 1), simulate_time_shift(0.3, 10**5, 1)):
        assert s.errors <= s.detected <= s.sifted <= s.trials
        assert s.qber_estimate == s.errors / s.detected


def test_time_shift_endpoints():
    s = simulate_time_shift(1.0, TRIALS, SEED)
    assert within(s.posterior_estimate, 0.5, s.posterior_stderr)
    assert s.mutual_info_estimate < 1e-4
    s = simulate_time_shift(0.25, TRIALS, SEED)
    assert within(s.posterior_estimate, 0.8, s.posterior_stderr)


@given(st.floats(0.01, 1.0), st.integers(0, 2**64 - 1))
def test_time_shift_never_errs(eta, seed):
    assert simulate_time_shift(eta, 2000, seed).errors == 0


def test_runs_are_deterministic():
    a = simulate_faked_states(0.4, 300_000, 99)
    assert a == simulate_faked_states(0.4, 300_000, 99)
    assert a != simulate_faked_states(0.4, 300_000, 100)


def test_partitioning_does_not_matter():
    ref = simulate_faked_states(0.4, 100_003, 5)
    assert simulate_faked_states(0.4, 100_003, 5, chunk=7_777) == ref
    assert simulate_faked_states(0.4, 100_003, 5, workers=4, chunk=10_000) == ref
    ref = simulate_time_shift(0.4, 100_003, 5)
    assert simulate_time_shift(0.4, 100_003, 5, workers=3, chunk=999) == ref


@pytest.mark.parametrize("eta, trials", [(0.0, 10), (1.5, 10), (0.5, 0)])
def test_simulation_input_checks(eta, trials):
    with pytest.raises(DomainError):
        simulate_faked_states(eta, trials, 0)


def test_counter_rng_is_position_addressed():
    rng = CounterRNG(3)
    full = rng.uniforms(np.arange(10, dtype=np.uint64), 4)
    part = rng.uniforms(np.arange(5, 10, dtype=np.uint64), 4)
    assert np.array_equal(full[5:], part)
    assert np.all((full >= 0) & (full < 1))
    with pytest.raises(DomainError):
        CounterRNG(-1)


def test_counter_rng_is_roughly_uniform():
    u = CounterRNG(1).uniforms(np.arange(200_000, dtype=np.uint64), 2).ravel()
    assert abs(u.mean() - 0.5) < 4 * math.sqrt(1 / 12 / u.size)
    counts = np.histogram(u, bins=10, range=(0, 1))[0]
    expected = u.size / 10
    assert np.sum((counts - expected) ** 2 / expected) < 30  # chi2, 9 dof


def test_double_clicks_resolved_by_coin():
    c0 = np.array([True, True, False, True])
    c1 = np.array([True, True, True, False])
    coin = np.array([0.1, 0.9, 0.5, 0.5])
    det, bit = resolve_clicks(c0, c1, coin)
    assert det.tolist() == [True] * 4
    assert bit.tolist() == [1, 0, 1, 0]


def test_discrimination_examples():
    assert discriminate_brute_force(0.5, math.pi / 2)[0] == pytest.approx(1.0, abs=1e-12)
    assert discriminate_brute_force(0.5, math.acos(0.78))[0] == pytest.approx(
        0.5 * (1 + math.sin(math.acos(0.78))), abs=1e-9)
    assert discriminate_brute_force(0.7, 0.0)[0] == pytest.approx(0.7, abs=1e-12)
    assert helstrom_bound(0.5, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert helstrom_bound(0.3, 0.0) == pytest.approx(0.7, abs=1e-15)


@given(st.floats(0.0, 1.0), st.floats(0.0, math.pi / 2))
def test_brute_force_never_beats_helstrom(prior0, phi):
    p, _ = discriminate_brute_force(prior0, phi)
    bound = helstrom_bound(prior0, phi)
    assert p <= bound + 1e-12
    assert p >= bound - 1e-6


def test_helstrom_matches_density_matrix_form():
    rng = np.random.default_rng(0)
    for _ in range(20):
        prior0, phi = rng.uniform(), rng.uniform(0, math.pi / 2)
        a = np.array([1.0, 0.0])
        b = np.array([math.cos(phi), math.sin(phi)])
        ref = helstrom_states(prior0, np.outer(a, a), np.outer(b, b))
        assert helstrom_bound(prior0, phi) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("prior0, phi", [(-0.1, 0.3), (0.5, 2.0)])
def test_discrimination_domain(prior0, phi):
    with pytest.raises(DomainError):
        helstrom_bound(prior0, phi)


def test_fock_space_layout():
    space = FockSpace(2, 3)
    assert space.dim == 10 and space.basis[0] == (0, 0)
    a = space.annihilation(0)
    assert a[space.index[(0, 1)], space.index[(1, 1)]] == pytest.approx(1.0)
    assert a[space.index[(1, 0)], space.index[(2, 0)]] == pytest.approx(math.sqrt(2))


def test_fock_space_too_large():
    with pytest.raises(DomainError):
        FockSpace(6, 12)


def test_unitary_fixes_vacuum_exactly():
    space, apply = build_operation(FockOpSpec(3, 3, "number_preserving_unitary"))
    vac = np.zeros((space.dim, space.dim))
    vac[0, 0] = 1
    assert np.array_equal(apply(vac), vac)
    u = beamsplitter(space, 0, 1, 0.7, 0.2)
    assert np.max(np.abs(u.conj().T @ u - np.eye(space.dim))) < 1e-12


def test_fifty_fifty_beamsplitter_bunches():
    # Hong-Ou-Mandel: |1,1> has no |1,1> component after a balanced splitter
    space = FockSpace(2, 2)
    u = beamsplitter(space, 0, 1, math.pi / 4)
    assert abs(u[space.index[(1, 1)], space.index[(1, 1)]]) < 1e-12


def test_loss_channel_is_trace_preserving():
    space, apply = build_operation(FockOpSpec(2, 3, "loss_to_ancilla", (0.3,)))
    rng = np.random.default_rng(1)
    g = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    out = apply(rho)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    assert np.min(np.linalg.eigvalsh(out)) > -1e-12


def test_loss_channel_single_photon_transmission():
    space, apply = build_operation(FockOpSpec(1, 2, "loss_to_ancilla", (0.3,)))
    one = np.zeros((space.dim, space.dim))
    one[space.index[(1,)], space.index[(1,)]] = 1
    out = apply(one)
    assert out[space.index[(1,)], space.index[(1,)]].real == pytest.approx(0.3, abs=1e-12)
    assert out[0, 0].real == pytest.approx(0.7, abs=1e-12)


@pytest.mark.parametrize("spec", [
    FockOpSpec(2, 3, "number_preserving_unitary"),
    FockOpSpec(2, 3, "loss_to_ancilla", (0.3,)),
    FockOpSpec(3, 2, "loss_to_ancilla", (0.8,)),
])
def test_vacuum_measurement_redundant(spec):
    assert verify_vacuum_commutation(spec, 50, seed=3) <= 1e-10


def test_vacuum_violating_operation_is_caught():
    assert verify_vacuum_commutation(FockOpSpec(2, 3, "vacuum_violating_test"), 50, seed=3) > 1e-3


@pytest.mark.parametrize("kwargs", [
    dict(n_modes=2, cutoff=3, kind="loss_to_ancilla", parameters=(1.5,)),
    dict(n_modes=2, cutoff=0, kind="number_preserving_unitary"),
    dict(n_modes=2, cutoff=3, kind="teleport"),
])
def test_fock_spec_validation(kwargs):
    with pytest.raises(DomainError):
        FockOpSpec(**kwargs)
