import math

import numpy as np
import pytest

import tsw


def test_tree_wasserstein_hand_example():
    # Star with edges 1 and 2: moving all mass from leaf 1 to leaf 2 costs 3.
    d = tsw.tree_wasserstein([-1, 0, 0], [0.0, 1.0, 2.0], 0, [0, 1, 0], [0, 0, 1])
    assert d == pytest.approx(3.0)
    with pytest.raises(tsw.ValidationError):
        tsw.tree_wasserstein([-1, 0, 0], [0.0, -1.0, 2.0], 0, [0, 1, 0], [0, 0, 1])


def test_seven_point_tree():
    pts = np.array([[6, 6], [5, 3], [6.5, 3.5], [6.5, 2.5], [7.5, 2.5], [2, 2], [7, 1]])
    t = tsw.build_partition_tree(pts, depth=3, root_cube=[0, 0, 8])
    assert len(t["parent"]) == 10
    assert max(t["depth"]) == 3


def test_exact_ot_and_assignment():
    cost = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert tsw.exact_ot(cost, [0.5, 0.5], [0.5, 0.5]) == 0.0
    assert tsw.exact_ot(cost, [1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
    value, perm = tsw.optimal_assignment(np.array([[0.0], [1.0]]), np.array([[1.0], [0.0]]))
    assert value == 0.0
    assert list(perm) == [1, 0]


def test_ensemble_tsw_and_kernel():
    rng = np.random.default_rng(0)
    clouds = [rng.random((15, 2)) for _ in range(4)]
    ens = tsw.sample_ensemble(clouds, n_slices=5, seed=3)
    assert ens.n_slices == 5
    m = ens.matrix(clouds)
    assert m.shape == (4, 4)
    assert np.allclose(np.diag(m), 0.0)
    assert np.allclose(m, m.T)
    assert ens.tsw(clouds[0], b=clouds[1]) == pytest.approx(m[0, 1])
    assert tsw.check_negative_definite(m, trials=50, seed=1)["pass"]

    t = 1.0 / tsw.bandwidth_from_quantile(m[np.triu_indices(4, 1)].tolist(), 50)
    k = tsw.gram(m, t)
    assert np.allclose(k, np.exp(-t * m))
    assert np.linalg.eigvalsh(k).min() >= -1e-8
    assert tsw.tsw_kernel(math.log(2.0), 1.0) == pytest.approx(0.5)

    again = tsw.load_ensemble(ens.to_json())
    assert np.array_equal(again.matrix(clouds), m)


def test_sliced_and_bound():
    a = np.array([[0.0, 0.0], [1.0, 1.0]])
    assert tsw.sliced_wasserstein(a, a) == 0.0
    r = tsw.check_w2_bound(a, np.array([[0.5, 0.0], [1.0, 0.25]]), seed=2)
    assert r["holds"] and r["identity_holds"]


def test_orbits():
    o = tsw.generate_orbit(2.5, 0.5, 0.5, 2)
    assert o[1].tolist() == [0.125, 0.7734375]
    clouds, labels = tsw.generate_orbit_dataset(per_class=2, points=10, seed=1)
    assert len(clouds) == 10
    assert labels == [0, 0, 1, 1, 2, 2, 3, 3, 4, 4]
    assert all(((c >= 0) & (c < 1)).all() for c in clouds)


def test_suites():
    (r,) = tsw.run_suite("golden")
    assert r["pass"], r["summary"]
    with pytest.raises(tsw.ValidationError):
        tsw.run_suite("nope")


def test_diagrams():
    assert tsw.project_diagonal(1.0, 3.0) == (2.0, 2.0)
    a, b = tsw.augment_pair(np.array([[0.0, 2.0]]), np.array([[0.0, 4.0]]))
    assert a.tolist() == [[0.0, 2.0], [2.0, 2.0]]
    assert b.tolist() == [[0.0, 4.0], [1.0, 1.0]]
    with pytest.raises(tsw.ValidationError):
        tsw.augment_pair(np.array([[0.0, float("inf")]]), np.array([[0.0, 1.0]]))
