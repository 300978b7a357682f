import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from leaderhinf.errors import SingularError, SingularUpdateError, StructureViolatedError
from leaderhinf.generators import directed_cycle_plus_leader, directed_random_tree, random_directed
from leaderhinf.graph import grounded_laplacian
from leaderhinf.spectral import (
    RankOneUpdate,
    frequency_gain,
    inverse,
    perron_component_min,
    rank_one_matrix,
    sherman_morrison_update,
    smallest_eigenvalue,
    smallest_singular_value,
)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (5, 5), elements=st.floats(-3, 3)))
def test_singular_value_matches_svd(A):
    M = A + 8 * np.eye(5)  # keep well away from singular
    r = smallest_singular_value(M)
    assert r.value == pytest.approx(np.linalg.svd(M, compute_uv=False).min(), rel=1e-9)
    assert np.linalg.norm(M @ r.vector) == pytest.approx(r.value, rel=1e-9)


def test_singular_raises():
    with pytest.raises(SingularError):
        smallest_singular_value(np.ones((3, 3)))
    with pytest.raises(SingularError):
        inverse(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        smallest_singular_value(np.ones((2, 3)))


def test_symmetric_eigenvalue():
    M = np.array([[2.0, -1.0], [-1.0, 2.0]])
    assert smallest_eigenvalue(M).value == pytest.approx(1.0)
    with pytest.raises(StructureViolatedError):
        smallest_eigenvalue(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        smallest_eigenvalue(M, "banded")


def test_grounded_eigenvalue_on_cycles():
    for k in range(3, 30):
        L = grounded_laplacian(directed_cycle_plus_leader(k)).matrix
        ref = np.linalg.eigvals(L).real.min()
        r = smallest_eigenvalue(L, "grounded")
        assert r.value == pytest.approx(ref, rel=1e-9)
        assert r.vector is not None and r.vector.min() >= -1e-12


def test_grounded_eigenvalue_random_and_reducible():
    for seed in range(100):
        g = random_directed(10, seed=seed, p=0.25, n_leaders=2)
        L = grounded_laplacian(g).matrix
        lam = smallest_eigenvalue(L, "grounded").value
        # real part of the spectrum is bounded by the Perron eigenvalue
        assert lam == pytest.approx(np.linalg.eigvals(L).real.min(), rel=1e-8)
        assert smallest_singular_value(L).value <= lam + 1e-12
    # a tree is reducible with a Jordan block; all eigenvalues equal 1
    L = grounded_laplacian(directed_random_tree(12, seed=1)).matrix
    r = smallest_eigenvalue(L, "grounded")
    assert r.value == pytest.approx(1.0, abs=1e-12) and r.vector is None


def test_grounded_rejects_non_m_matrix():
    with pytest.raises(StructureViolatedError):
        smallest_eigenvalue(np.array([[1.0, 2.0], [2.0, 1.0]]), "grounded")


def test_perron_component_min():
    # undirected path with end leader: Perron vector is sin((2k-1) pi / (2(2m+1)))-shaped
    L = np.array([[2.0, -1, 0], [-1, 2, -1], [0, -1, 1]])
    x = np.linalg.eigh(L)[1][:, 0]
    x = np.abs(x) / np.abs(x).max()
    assert perron_component_min(L) == pytest.approx(x.min())
    # reducible: the block not attaining lambda_1 contributes zeros
    D = np.diag([1.0, 2.0])
    assert perron_component_min(D) == 0.0
    assert perron_component_min(np.eye(3)) == 1.0


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), data=st.data())
def test_sherman_morrison_matches_direct(seed, data):
    g = random_directed(8, seed=seed, p=0.3)
    L = grounded_laplacian(g).matrix
    m = L.shape[0]
    if m < 2:
        return
    i = data.draw(st.integers(0, m - 1))
    j = data.draw(st.integers(0, m - 1).filter(lambda x: x != i))
    u = RankOneUpdate(i, j, data.draw(st.sampled_from(["add", "remove"])))
    L2 = L + rank_one_matrix(m, u)
    try:
        direct = np.linalg.inv(L2)
    except np.linalg.LinAlgError:
        return
    if np.linalg.cond(L2) > 1e8:
        return
    np.testing.assert_allclose(sherman_morrison_update(inverse(L), u), direct, atol=1e-10)


def test_sherman_morrison_add_then_remove():
    L = grounded_laplacian(directed_random_tree(6, seed=4)).matrix
    inv = inverse(L)
    back = sherman_morrison_update(sherman_morrison_update(inv, RankOneUpdate(4, 1)),
                                   RankOneUpdate(4, 1, "remove"))
    np.testing.assert_allclose(back, inv, atol=1e-12)


def test_sherman_morrison_singular_update():
    # removing the only in-edge of a node makes its row zero
    L = np.array([[1.0, 0.0], [-1.0, 1.0]])
    with pytest.raises(SingularUpdateError):
        sherman_morrison_update(inverse(L), RankOneUpdate(1, 0, "remove"))
    with pytest.raises(ValueError):
        RankOneUpdate(1, 1)
    with pytest.raises(ValueError):
        RankOneUpdate(0, 1, "flip")


@pytest.mark.parametrize("omega", [0.0, 0.1, 1.0, 10.0])
def test_frequency_gain_matches_complex(omega):
    L = grounded_laplacian(directed_cycle_plus_leader(5)).matrix
    ref = np.linalg.svd(np.linalg.inv(1j * omega * np.eye(5) + L), compute_uv=False).max()
    assert frequency_gain(L, omega) == pytest.approx(ref, rel=1e-9)


def test_sigma1_below_every_eigenvalue_modulus():
    for seed in range(200):
        g = random_directed(2 + seed % 12, seed=seed, p=0.3, n_leaders=1 + seed % 3)
        L = grounded_laplacian(g).matrix
        s = smallest_singular_value(L).value
        assert s <= np.abs(np.linalg.eigvals(L)).min() + 1e-12


def test_symmetric_pd_singular_equals_eigen():
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = rng.normal(size=(6, 6))
        M = A @ A.T + 0.5 * np.eye(6)
        assert smallest_singular_value(M).value == pytest.approx(abs(smallest_eigenvalue(M).value), rel=1e-9)


def test_frequency_gain_peaks_at_dc():
    omegas = [0.0, 1e-3, 0.05, 0.3, 1.0, 7.0, 100.0]
    for seed in range(30):
        L = grounded_laplacian(random_directed(7, seed=seed, p=0.4)).matrix
        dc = frequency_gain(L, 0.0)
        assert all(frequency_gain(L, w) <= dc * (1 + 1e-12) for w in omegas)
