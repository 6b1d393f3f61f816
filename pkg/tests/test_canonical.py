import cmath

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gzcut import (
    CutoffNotRegularSemisimple,
    OrbitIndex,
    SeededRng,
    Tolerances,
    ULPattern,
    XiElement,
    XiInvariantError,
    ad,
    canonical_form,
    coincidence_count,
    contains,
    eigenvalues,
    gz_function,
    gz_gradients,
    is_n_strongly_regular,
    is_regular,
    nilradical_n,
    parabolic_p,
    random_xi,
    reduce_to_xi,
    sample_K,
    sample_in,
    sn_membership,
    sort_complex,
    stabilized_flag,
    xi_build,
    xi_pattern,
)
from oracles import cgauss

BORDERED = np.array([[1, 0, 0], [0, 2, 1], [0, 1, 3]], dtype=complex)


def xi(n, l, h, y, z, w):
    return XiElement(n=n, l=l, h=tuple(h), y=tuple(y), z=tuple(z), w=w)


def test_xi_build_examples():
    m = xi_build(xi(3, 1, (1, 2), (0, 1), (0, 1), 3))
    assert_allclose(m, BORDERED, atol=0)

    # no coincidence: char poly of the assembly is l^2 - 5l - 1, whose roots
    # (5 +- sqrt(29))/2 stay away from the cutoff eigenvalue 5
    m = xi_build(xi(2, 0, (5,), (1,), (1,), 0))
    assert_allclose(m, [[5, 1], [1, 0]], atol=0)
    disc = cmath.sqrt(29)
    assert min(abs((5 + s * disc) / 2 - 5) for s in (-1, 1)) > 0.1

    m = xi_build(xi(2, 1, (0,), (0,), (1,), 0))
    assert_allclose(m, [[0, 0], [1, 0]], atol=0)
    assert coincidence_count(m).l == 1


def test_xi_build_invariant_violations():
    with pytest.raises(XiInvariantError, match="distinct"):
        xi_build(xi(3, 1, (1, 1), (0, 1), (0, 1), 0))
    with pytest.raises(XiInvariantError, match="shared range"):
        xi_build(xi(3, 1, (1, 2), (1, 1), (1, 1), 0))  # product nonzero in slot 1
    with pytest.raises(XiInvariantError, match="vanishes"):
        xi_build(xi(3, 0, (1, 2), (0, 1), (0, 1), 0))  # slot 1 should be unshared


def test_xi_pattern_examples():
    assert xi_pattern(xi(3, 1, (1, 2), (0, 1), (1, 1), 0)).marks == ("L",)
    assert xi_pattern(xi(3, 1, (1, 2), (1, 1), (0, 1), 0)).marks == ("U",)
    # both entries zero resolves to U
    assert xi_pattern(xi(3, 1, (1, 2), (0, 1), (0, 1), 0)).marks == ("U",)
    with pytest.raises(XiInvariantError):
        xi_pattern(xi(3, 1, (1, 2), (1, 1), (1, 1), 0))


def test_stabilized_flag_shapes():
    f = stabilized_flag(ULPattern(("U",)), 3)
    assert f.steps == (1, 3)
    assert_allclose(f.basis.real, np.eye(3), atol=0)

    f = stabilized_flag(ULPattern(("L",)), 3)
    assert f.steps == (2, 3)
    assert_allclose(f.basis.real[:, 0], [0, 1, 0], atol=0)
    assert_allclose(f.basis.real[:, 2], [1, 0, 0], atol=0)

    f = stabilized_flag(ULPattern(()), 4)
    assert f.steps == (4,)


def test_xi_elements_stabilize_their_flag():
    rng = SeededRng(14)
    for n, l in ((3, 1), (4, 2), (5, 3)):
        e = random_xi(rng.derive(10 * n + l), n, l)
        m = xi_build(e)
        flag = stabilized_flag(xi_pattern(e), n)
        from gzcut import is_invariant_subspace

        for k in range(len(flag.steps)):
            assert is_invariant_subspace(m, flag.subspace(k)).ok


def test_reduce_to_xi_diagonal():
    k, e = reduce_to_xi(np.diag([1.0, 2.0, 3.0]))
    assert e.l == 2
    assert_allclose(sort_complex(e.h), [1, 2], atol=1e-12)
    assert max(abs(v) for v in e.y + e.z) < 1e-12
    assert e.w == pytest.approx(3)


def test_reduce_to_xi_fixed_point_up_to_sorting():
    k, e = reduce_to_xi(BORDERED)
    assert e.l == 1
    assert_allclose(sort_complex(e.h), [1, 2], atol=1e-10)
    assert_allclose(ad(k, BORDERED), xi_build(e), atol=1e-10)


def test_reduce_to_xi_round_trip_preserves_data():
    rng = SeededRng(50)
    for t, (n, l) in enumerate(((3, 0), (3, 2), (4, 1), (5, 2))):
        e = random_xi(rng.derive(t), n, l)
        g = sample_K(rng.derive(100 + t), n)
        x = ad(g, xi_build(e))
        k, out = reduce_to_xi(x)
        assert out.l == l
        assert_allclose(sort_complex(out.h), sort_complex(e.h), atol=1e-8)
        assert_allclose(ad(k, x), xi_build(out, Tolerances()), atol=1e-8)


def test_reduce_to_xi_rejects_degenerate_cutoff():
    m = np.diag([1.0, 1.0, 5.0])
    with pytest.raises(CutoffNotRegularSemisimple):
        reduce_to_xi(m)


def test_reduce_to_xi_warns_near_the_gap_policy():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2] = 0.0, 5e-4, 1.0
    with pytest.warns(RuntimeWarning, match="nearly degenerate"):
        reduce_to_xi(m)


def test_canonical_form_worked_example():
    res = canonical_form(BORDERED)
    assert res.l == 1
    assert (res.idx.i, res.idx.j) == (2, 3)
    assert res.pattern.marks == ("U",)
    assert res.residual < 1e-10
    assert contains(parabolic_p(res.idx, 3), res.image).ok


def test_canonical_form_diagonal_hits_a_borel():
    # maximal coincidence count: the target is a closed-orbit Borel, and a
    # diagonal matrix (everything shared, pattern all U) lands in (n, n)
    res = canonical_form(np.diag([1.0, 2.0, 3.0]))
    assert res.l == 2
    assert (res.idx.i, res.idx.j) == (3, 3)
    assert res.residual < 1e-12


def test_canonical_form_planted_patterns_reach_the_predicted_indices():
    # n = 4, two coincidences: k - 1 counts the U marks, orbit length is 1
    cases = {
        ("U", "U"): (3, 4),
        ("U", "L"): (2, 3),
        ("L", "U"): (2, 3),
        ("L", "L"): (1, 2),
    }
    for marks, expected in cases.items():
        y = [0.7 if m == "U" else 0.0 for m in marks] + [0.9]
        z = [0.0 if m == "U" else 0.6 for m in marks] + [1.1]
        e = xi(4, 2, (1.0, 2.0, 3.5), y, z, -0.3)
        res = canonical_form(xi_build(e))
        assert (res.idx.i, res.idx.j) == expected
        assert res.pattern.marks == marks
        assert res.residual < 1e-10


def test_canonical_form_upper_triangular_sample():
    # generic upper triangular matrices share their whole cutoff spectrum
    gen = np.random.default_rng(3)
    x = np.triu(cgauss(gen, (4, 4)))
    res = canonical_form(x)
    assert res.l == 3
    assert res.idx.length == 0  # a Borel
    assert res.residual < 1e-8


def test_canonical_round_trips_recover_count_index_and_membership():
    rng = SeededRng(2024)
    t = 0
    for n in (3, 4, 5):
        for l in range(n):
            for _ in range(12):
                e = random_xi(rng.derive(t), n, l)
                g = sample_K(rng.derive(10_000 + t), n)
                x = ad(g, xi_build(e))
                res = canonical_form(x)
                assert res.l == l == coincidence_count(x).l
                assert res.idx.length == n - 1 - l
                assert res.residual < 1e-7
                t += 1


def test_is_regular_examples():
    jordan = np.eye(4, k=1)
    assert is_regular(jordan)
    assert not is_regular(np.eye(2))
    assert is_regular(np.diag([1.0, 2.0, 3.0]))


def test_gradients_match_finite_differences():
    # directional derivative of tr((x_i)^j) along xi vs the trace pairing
    gen = np.random.default_rng(8)
    h = 1e-6
    for n in (3, 4):
        x = cgauss(gen, (n, n))
        grads = gz_gradients(x)
        labels = [(n - 1, j) for j in range(1, n)] + [(n, j) for j in range(1, n + 1)]
        for (i, j), grad in zip(labels, grads):
            for _ in range(3):
                direction = cgauss(gen, (n, n))
                fd = (
                    gz_function(x + h * direction, i, j)
                    - gz_function(x - h * direction, i, j)
                ) / (2 * h)
                expected = np.trace(grad @ direction)
                assert abs(fd - expected) <= 1e-5 * (1 + abs(expected))


def test_strong_regularity_hand_solved_2x2():
    x = np.array([[0, 1], [0, 0]], dtype=complex)
    # by hand: the centralizer of x is span{I, x}; the cutoff centralizer is
    # the full 1 x 1 algebra span{E_11}; a I + b x = c E_11 forces a = b = c = 0
    rep = is_n_strongly_regular(x)
    assert rep.ok
    assert rep.centralizer_rank == rep.centralizer_expected == 3
    assert rep.gradient_rank == 3


def test_strong_regularity_counterexamples():
    assert not is_n_strongly_regular(np.eye(2)).ok  # not regular
    assert not is_n_strongly_regular(np.diag([1.0, 1.0, 2.0])).ok  # cutoff not regular


def test_strong_regularity_methods_agree_on_random_samples():
    gen = np.random.default_rng(12)
    for n in (2, 3, 4):
        for _ in range(60):
            rep = is_n_strongly_regular(cgauss(gen, (n, n)))  # raises on mismatch
            assert rep.ok  # generic matrices are strongly regular


def test_strong_regularity_on_nilradical_components():
    rng = SeededRng(404)
    n = 4
    for i in (1, 2, 3, 4):
        x = ad(sample_K(rng.derive(i), n), sample_in(nilradical_n(i, n), rng.derive(50 + i)))
        expected = i in (1, n)
        assert is_n_strongly_regular(x).ok == expected


def test_sn_membership_examples():
    assert sn_membership(np.zeros((3, 3)))
    assert not sn_membership(np.diag([0.0, 0.0, 1.0]))
    rng = SeededRng(55)
    for i in (1, 2, 3, 4):
        x = ad(sample_K(rng.derive(i), 4), sample_in(nilradical_n(i, 4), rng.derive(90 + i)))
        assert sn_membership(x)


def test_random_xi_plants_the_advertised_count():
    rng = SeededRng(71)
    for t, (n, l) in enumerate(((3, 0), (4, 2), (5, 4), (6, 3))):
        e = random_xi(rng.derive(t), n, l)
        assert e.l == l
        assert coincidence_count(xi_build(e)).l == l
        gaps = np.abs(np.subtract.outer(e.h, e.h))
        np.fill_diagonal(gaps, np.inf)
        assert gaps.min() >= 0.5
