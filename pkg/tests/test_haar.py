import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haarlaw.haar import (
    PhasedPermutation,
    batch_cycle_stats,
    cycle_decompose,
    dense,
    det_id_minus_phased_permutation,
    reflection_to,
    sample_haar_recursive,
    sample_haar_unitary_ginibre,
    sample_phased_permutation,
    sample_phased_permutations,
    stabilizer_embed,
)
from haarlaw.kernels import RngStream, sample_kn_alpha, sample_sphere_point
from haarlaw.linalg import lu_det, unitarity_defect
from haarlaw.stats import ks_two_sample

from conftest import within_se


def random_phases(nprng, n):
    return np.exp(2j * np.pi * nprng.random(n))


class TestGinibre:
    def test_n1_phase(self, rng):
        G = sample_haar_unitary_ginibre(1, rng)
        assert G.shape == (1, 1) and abs(abs(G[0, 0]) - 1) < 1e-15

    def test_unitary(self, rng):
        assert np.all(unitarity_defect(sample_haar_unitary_ginibre(7, rng, size=100)) < 1e-10)

    def test_corner_second_moment(self, rng):
        G = sample_haar_unitary_ginibre(4, rng, size=100_000)
        assert within_se(np.abs(G[:, 0, 0]) ** 2, 1 / 4)

    def test_trace_centered(self, rng):
        G = sample_haar_unitary_ginibre(4, rng, size=100_000)
        assert abs(np.trace(G, axis1=1, axis2=2).mean()) < 0.02


class TestReflection:
    def test_degenerate(self):
        assert np.array_equal(reflection_to(np.eye(3)[0]), np.eye(3))

    def test_e2(self):
        e1, e2 = np.eye(2)
        R = reflection_to(e2)
        assert np.allclose(R @ e1, e2)
        assert unitarity_defect(R) < 1e-12

    def test_random_target(self, rng, nprng):
        v = sample_sphere_point(5, rng)
        R = reflection_to(v)
        assert np.linalg.norm(R @ np.eye(5)[0] - v) < 1e-10
        assert unitarity_defect(R) < 1e-10
        w = np.eye(5)[0] - v
        x = nprng.standard_normal(5) + 1j * nprng.standard_normal(5)
        x -= (np.vdot(w, x) / np.vdot(w, w)) * w
        assert np.linalg.norm(R @ x - x) < 1e-10

    def test_non_unit(self):
        with pytest.raises(ValueError):
            reflection_to([2.0, 0.0])

    def test_unstable_denominator(self):
        v = np.array([1.0, 1e-9])
        v /= np.linalg.norm(v)
        assert v[0] == 1.0 and v[1] != 0
        with pytest.raises(ValueError):
            reflection_to(v)


class TestStabilizer:
    def test_identity(self):
        assert np.array_equal(stabilizer_embed(np.eye(2)), np.eye(3))

    def test_fixes_e1(self, rng):
        H = sample_haar_unitary_ginibre(3, rng)
        M = stabilizer_embed(H)
        e1 = np.eye(4)[0]
        assert np.array_equal(M @ e1, e1)
        assert abs(lu_det(np.eye(4) - M)) < 1e-14


class TestRecursive:
    def test_n1(self, rng):
        G = sample_haar_recursive(1, rng)
        assert G.shape == (1, 1) and abs(abs(G[0, 0]) - 1) < 1e-15

    def test_unitary(self, rng):
        for _ in range(50):
            assert unitarity_defect(sample_haar_recursive(3, rng)) < 1e-9

    def test_first_column_is_sphere_point(self, rng):
        cols = np.array([sample_haar_recursive(4, rng)[:, 0] for _ in range(20_000)])
        for k in range(4):
            assert within_se(np.abs(cols[:, k]) ** 2, 1 / 4)
        assert within_se(np.abs(cols[:, 0]) ** 4, 2 / 20)  # E[B^2] for Beta(1, 3)

    def test_det_law_matches_ginibre(self):
        root = RngStream(77)
        n, m = 6, 10_000
        s0 = root.substream(0)
        rec = np.array([lu_det(np.eye(n) - sample_haar_recursive(n, s0)) for _ in range(m)])
        gin = lu_det(np.eye(n) - sample_haar_unitary_ginibre(n, root.substream(1), size=m))
        _, p = ks_two_sample(rec.real, gin.real)
        assert p > 1e-3

    @pytest.mark.parametrize("sampler", ["ginibre", "recursive"])
    def test_corner_entry_law(self, sampler):
        root = RngStream(5)
        n, m = 5, 5000
        if sampler == "ginibre":
            x = sample_haar_unitary_ginibre(n, root.substream(0), size=m)[:, 0, 0]
        else:
            s0 = root.substream(0)
            x = np.array([sample_haar_recursive(n, s0)[0, 0] for _ in range(m)])
        y = sample_kn_alpha(n - 1, root.substream(1), m)
        for fn in (np.abs, np.angle):
            _, p = ks_two_sample(fn(x), fn(y))
            assert p > 1e-3


class TestPhasedPermutation:
    def test_validation(self):
        with pytest.raises(ValueError):
            PhasedPermutation([0, 0], [1, 1])
        with pytest.raises(ValueError):
            PhasedPermutation([1, 0], [1, 2])

    def test_n1(self, rng):
        p = sample_phased_permutation(1, rng)
        assert p.sigma.tolist() == [0]
        assert abs(abs(p.phases[0]) - 1) < 1e-15

    def test_uniform_on_s3(self, rng):
        sigma, _ = sample_phased_permutations(3, rng, 100_000)
        perms = [tuple(s) for s in itertools.permutations(range(3))]
        codes = sigma @ np.array([9, 3, 1])
        for perm in perms:
            hits = codes == np.dot(perm, [9, 3, 1])
            assert within_se(hits, 1 / 6)

    def test_fixed_point_marginal(self, rng):
        sigma, _ = sample_phased_permutations(5, rng, 100_000)
        assert within_se(sigma[:, 0] == 0, 1 / 5)

    def test_single_draw_matches_batch_shape(self, rng):
        p = sample_phased_permutation(6, rng)
        assert sorted(p.sigma.tolist()) == list(range(6))


class TestCycles:
    def test_identity(self):
        c = cycle_decompose(PhasedPermutation(np.arange(4), np.ones(4)))
        assert c.lengths == [1, 1, 1, 1]

    def test_three_cycle_phase(self):
        a, b, c = np.exp(1j * np.array([0.3, 1.1, -2.0]))
        d = cycle_decompose(PhasedPermutation([1, 2, 0], [a, b, c]))
        assert d.count == 1 and d.lengths == [3]
        assert np.isclose(d.cycle_phases[0], a * b * c)

    def test_partition(self, rng):
        for n in range(1, 12):
            d = cycle_decompose(sample_phased_permutation(n, rng))
            assert sum(d.lengths) == n
            assert sorted(itertools.chain(*d.cycles)) == list(range(n))


class TestDeterminant:
    def test_identity_unit_phases(self):
        assert det_id_minus_phased_permutation(PhasedPermutation(np.arange(3), np.ones(3))) == 0

    def test_swap(self):
        a, b = 0.4, 2.2
        p = PhasedPermutation([1, 0], np.exp(1j * np.array([a, b])))
        expected = 1 - np.exp(1j * (a + b))
        assert np.isclose(det_id_minus_phased_permutation(p), expected)
        assert np.isclose(lu_det(np.eye(2) - dense(p)), expected)

    def test_matches_dense_oracle(self, rng):
        for n in range(2, 11):
            for _ in range(1000):
                p = sample_phased_permutation(n, rng)
                assert abs(det_id_minus_phased_permutation(p) - lu_det(np.eye(n) - dense(p))) < 1e-10

    def test_batch_stats_match_single(self, rng):
        sigma, phases = sample_phased_permutations(7, rng, 300)
        counts, dets = batch_cycle_stats(sigma, phases)
        for k in range(300):
            p = PhasedPermutation(sigma[k], phases[k])
            assert counts[k] == cycle_decompose(p).count
            assert np.isclose(dets[k], det_id_minus_phased_permutation(p), atol=1e-14)


class TestDense:
    def test_identity(self):
        assert np.array_equal(dense(PhasedPermutation(np.arange(3), np.ones(3))), np.eye(3))

    def test_unitary(self, rng):
        for _ in range(50):
            assert unitarity_defect(dense(sample_phased_permutation(6, rng))) < 1e-14

    def test_convention(self):
        ph = np.exp(1j * np.array([0.1, 0.2, 0.3]))
        M = dense(PhasedPermutation([2, 0, 1], ph))
        # entry phases[j] at row i = sigma^{-1}(j), column j
        assert M[0, 2] == ph[2] and M[1, 0] == ph[0] and M[2, 1] == ph[1]

    def test_composition_hand_case(self):
        a = np.exp(1j * np.array([0.1, 0.2, 0.3]))
        b = np.exp(1j * np.array([1.0, -0.5, 2.5]))
        p = PhasedPermutation([1, 2, 0], a)
        q = PhasedPermutation([1, 0, 2], b)
        r = p.compose(q)
        # row 0: p sends 0 -> 1 (weight a1), q sends 1 -> 0 (weight b0)
        assert r.sigma.tolist() == [0, 2, 1]
        assert np.isclose(dense(r)[0, 0], a[1] * b[0])
        assert np.allclose(dense(p) @ dense(q), dense(r))

    @settings(max_examples=50, deadline=None)
    @given(st.permutations(list(range(5))), st.permutations(list(range(5))),
           st.integers(min_value=0, max_value=2**32 - 1))
    def test_composition_group_law(self, s1, s2, seed):
        nprng = np.random.default_rng(seed)
        p = PhasedPermutation(s1, random_phases(nprng, 5))
        q = PhasedPermutation(s2, random_phases(nprng, 5))
        assert np.allclose(dense(p) @ dense(q), dense(p.compose(q)))
