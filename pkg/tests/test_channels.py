import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from demguard.channels import (
    BlockModel,
    EfficiencyCurve,
    MisalignmentModel,
    eta_brute_force,
    eta_from_blocks,
    eta_from_curves,
    eta_from_misalignment,
    eta_lower_bound_measured,
    factor_common_loss,
)
from demguard.errors import DomainError


def random_complex(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


WORKED = EfficiencyCurve.from_columns([0, 1, 2], [1, 0.9, 0.5], [0.5, 0.9, 1])

effs = st.lists(st.tuples(st.floats(0.01, 1.0), st.floats(0.01, 1.0)), min_size=1, max_size=8)


def test_flat_curve():
    curve = EfficiencyCurve.from_columns([0, 1], [0.8, 0.8], [0.8, 0.8])
    assert eta_from_curves(curve) == (1.0, 1.0)


def test_worked_curve():
    assert eta_from_curves(WORKED) == (0.5, 0.5)


def test_general_mode():
    curve = EfficiencyCurve.from_columns([0, 1], [0.4, 0.5], [0.45, 0.5], [0.45, 0.55], [0.5, 0.5])
    ez, ex = eta_from_curves(curve, "general")
    assert ez == pytest.approx(0.4 / 0.55, abs=1e-15)
    assert ex == pytest.approx(0.45 / 0.55, abs=1e-15)


def test_basis_independent_needs_equal_bases():
    curve = EfficiencyCurve.from_columns([0], [0.4], [0.5], [0.5], [0.5])
    with pytest.raises(DomainError):
        eta_from_curves(curve)


def test_blind_detector():
    curve = EfficiencyCurve.from_columns([0, 1], [1, 0.0], [1, 0.7])
    assert eta_from_curves(curve) == (0.0, 0.0)


def test_curve_validation():
    with pytest.raises(DomainError):
        EfficiencyCurve.from_columns([0], [-0.1], [0.5])
    with pytest.raises(DomainError):
        EfficiencyCurve(())


def test_factor_common_loss_examples():
    common, res = factor_common_loss(EfficiencyCurve.from_columns([0], [0.8], [0.4]))
    assert list(common) == [0.8] and res.z.tolist() == [[1.0, 0.5]]
    _, res = factor_common_loss(EfficiencyCurve.from_columns([0, 1], [0.3, 0.6], [0.3, 0.6]))
    assert np.all(res.z == 1.0)
    common, res = factor_common_loss(EfficiencyCurve.from_columns([0, 1], [1, 0.5], [0.25, 0.5]))
    assert list(common) == [1, 0.5]
    assert res.column("eta_z0").tolist() == [1, 1] and res.column("eta_z1").tolist() == [0.25, 1]
    assert eta_from_curves(res) == (0.25, 0.25)


@given(effs, st.floats(0.1, 10.0))
def test_curve_eta_invariances(pairs, scale):
    e0, e1 = zip(*pairs)
    curve = EfficiencyCurve.from_columns(range(len(pairs)), e0, e1)
    eta = eta_from_curves(curve)[0]
    assert abs(eta_from_curves(factor_common_loss(curve)[1])[0] - eta) <= 1e-12
    scaled = EfficiencyCurve.from_columns(range(len(pairs)), np.multiply(e0, scale), np.multiply(e1, scale))
    assert abs(eta_from_curves(scaled, "general")[0] - eta_from_curves(curve, "general")[0]) <= 1e-12


@given(effs)
def test_diagonal_blocks_reproduce_curve_eta(pairs):
    # uncoupled labels: the block model is diagonal
    e0, e1 = (np.array(c) for c in zip(*pairs))
    curve = EfficiencyCurve.from_columns(range(len(pairs)), e0, e1)
    model = BlockModel(np.diag(np.sqrt(e0)), np.diag(np.sqrt(e1)))
    assert abs(eta_from_blocks(model).eta - eta_from_curves(curve)[0]) <= 1e-12


def test_misalignment_drops_unitaries():
    rng = np.random.default_rng(21)
    for curve in (WORKED, EfficiencyCurve.from_columns([0, 1, 2], [0.7] * 3, [0.7] * 3)):
        n = len(curve.samples)
        ident = MisalignmentModel(curve, (np.eye(2),) * n, (np.eye(2),) * n)
        rand = MisalignmentModel(curve, tuple(random_unitary(rng, 2) for _ in range(n)),
                                 tuple(random_unitary(rng, 2) for _ in range(n)))
        assert eta_from_misalignment(ident) == eta_from_curves(curve)
        assert np.allclose(eta_from_misalignment(rand), eta_from_misalignment(ident), atol=1e-12)
    assert eta_from_misalignment(rand) == (1.0, 1.0)


def test_misalignment_rejects_non_unitary():
    with pytest.raises(DomainError):
        MisalignmentModel(WORKED, (np.eye(2) * 1.1,) * 3, (np.eye(2),) * 3)


@pytest.mark.parametrize("values, delta, expected", [
    ([0.4, 0.45, 0.5], 0.0, 0.8),
    ([0.4, 0.45, 0.5], 0.05, 0.35 / 0.55),
    ([0.4, 0.5], 0.4, 0.0),
    ([0.4, 0.5], 0.7, 0.0),
])
def test_measured_lower_bound(values, delta, expected):
    assert eta_lower_bound_measured(values, delta) == pytest.approx(expected, abs=1e-15)


def test_block_examples():
    rng = np.random.default_rng(8)
    c = random_complex(rng, 3)
    assert eta_from_blocks(BlockModel(c, c)).eta == pytest.approx(1.0, abs=1e-12)
    assert eta_from_blocks(BlockModel(random_unitary(rng, 3) @ c, c)).eta == pytest.approx(1.0, abs=1e-12)
    res = eta_from_blocks(BlockModel(np.eye(2), np.diag([1.0, 0.5])))
    assert res.eta == pytest.approx(0.25, abs=1e-15) and not res.no_key


def test_singular_block_means_no_key():
    res = eta_from_blocks(BlockModel(np.eye(2), np.array([[1.0, 1.0], [1.0, 1.0]])))
    assert res == (0.0, True)
    assert eta_brute_force(BlockModel(np.zeros((2, 2)), np.eye(2)), seed=0) == 0.0


def test_block_shape_mismatch():
    with pytest.raises(DomainError):
        BlockModel(np.eye(2), np.eye(3))


def test_block_invariances():
    rng = np.random.default_rng(13)
    for n in (1, 2, 3, 4):
        for _ in range(10):
            c0, c1 = random_complex(rng, n), random_complex(rng, n)
            eta = eta_from_blocks(BlockModel(c0, c1)).eta
            assert abs(eta_from_blocks(BlockModel(c1, c0)).eta - eta) <= 1e-12
            w, x = random_unitary(rng, n), random_unitary(rng, n)
            assert abs(eta_from_blocks(BlockModel(w @ c0 @ x, w @ c1 @ x)).eta - eta) <= 1e-10
            z = complex(*rng.normal(size=2))
            assert abs(eta_from_blocks(BlockModel(z * c0, z * c1)).eta - eta) <= 1e-10


def test_eta_one_iff_flat_spectrum():
    rng = np.random.default_rng(17)
    u = random_unitary(rng, 3)
    c1 = random_complex(rng, 3)
    assert eta_from_blocks(BlockModel(u @ c1, c1)).eta == pytest.approx(1.0, abs=1e-10)
    bent = u @ np.diag([1.0, 1.0, 1.0 + 1e-6]) @ c1
    assert eta_from_blocks(BlockModel(bent, c1)).eta < 1.0 - 1e-7


def test_brute_force_scalar():
    assert eta_brute_force(BlockModel([[0.9]], [[0.6]]), seed=0) == pytest.approx(0.36 / 0.81, abs=1e-12)


def test_brute_force_equal_blocks():
    c = random_complex(np.random.default_rng(4), 3)
    assert eta_brute_force(BlockModel(c, c), seed=1) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_brute_force_matches_spectral(n, seed):
    rng = np.random.default_rng(seed)
    model = BlockModel(random_complex(rng, n), random_complex(rng, n))
    exact = eta_from_blocks(model).eta
    found = eta_brute_force(model, n_samples=500, seed=seed)
    assert found >= exact - 1e-3
    assert abs(found - exact) <= 1e-3


def test_brute_force_is_seeded():
    model = BlockModel(random_complex(np.random.default_rng(1), 3), random_complex(np.random.default_rng(2), 3))
    assert eta_brute_force(model, n_samples=50, seed=5, iterations=2) == \
        eta_brute_force(model, n_samples=50, seed=5, iterations=2)
