import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_B
from deepqaoa.objective import from_values, gen_qubo, gen_uniform
from deepqaoa.universality import (
    check_severing,
    dense_mixer,
    hypercube_bfs_count,
    lie_closure,
    lie_closure_dim,
    mixer_graph_connected,
)


def severing_oracle(values, tol=0.0):
    """Brute force over ordered pairs."""
    n = len(values)
    for a, b in itertools.combinations(range(n), 2):
        if abs(values[a] - values[b]) <= tol:
            return False
    diffs = [(values[a] - values[b], (a, b)) for a in range(n) for b in range(n) if a != b]
    for (d1, p1), (d2, p2) in itertools.combinations(diffs, 2):
        if abs(d1 - d2) <= tol:
            return False
    return True


class TestSevering:
    def test_arithmetic_progression(self):
        r = check_severing(from_values([0.0, 1.0, 2.0, 3.0]))
        assert not r.severing
        assert r.violation == "degenerate_resonance"
        (z, zp), (t, tp) = r.witness
        v = [0.0, 1.0, 2.0, 3.0]
        assert v[z] - v[zp] == v[t] - v[tp]
        assert (z, zp) != (t, tp)
        assert r.verdict() == "not severing: degenerate_resonance f(0) - f(1) = f(1) - f(2)"

    def test_powers_of_two_sever(self):
        assert check_severing(from_values([1.0, 2.0, 4.0, 8.0])).severing

    def test_repeated_value(self):
        r = check_severing(from_values([1.0, 1.0, 2.0, 5.0]))
        assert r.violation == "degenerate_values"
        assert r.witness == (0, 1)
        assert r.verdict() == "not severing: degenerate_values f(0) = f(1)"

    def test_constant(self):
        assert not check_severing(from_values([3.0] * 4)).severing

    def test_maxcut_flip_symmetry_is_degenerate(self):
        r = check_severing(from_values([0.0, -1.0, -1.0, 0.0]))
        assert r.violation == "degenerate_values"

    @pytest.mark.parametrize("seed", range(20))
    def test_random_nine_bit_tables_sever(self, seed):
        assert check_severing(gen_uniform(9, seed)).severing
        assert check_severing(gen_qubo(9, seed)).severing

    def test_tolerance_scales_with_sup_norm(self):
        # f(3) - f(2) misses f(1) - f(0) by 1e-10
        v = [0.0, 1.0, 3.0, 4.0 + 1e-10]
        assert check_severing(from_values(v), tol=1e-14).severing
        assert not check_severing(from_values(v), tol=1e-9).severing
        assert check_severing(from_values([1e6 * x for x in v]), tol=1e-14).severing
        assert not check_severing(from_values([1e6 * x for x in v]), tol=1e-9).severing

    def test_rounding_noise_is_still_degenerate(self):
        # 0.1 + 0.2 != 0.3 in binary, yet the steps are equal in intent
        assert not check_severing(from_values([0.1, 0.2, 0.1 + 0.2, 0.4])).severing

    @pytest.mark.parametrize("seed", range(20))
    def test_affine_invariance(self, seed):
        t = gen_uniform(6, seed)
        v = t.values
        ap = from_values(np.round(v * 8) / 8)
        for table in (t, ap):
            moved = from_values(2.0 * table.values + 7.0)
            assert check_severing(moved).severing == check_severing(table).severing

    def test_negative_tol(self):
        with pytest.raises(ValueError):
            check_severing(from_values([0.0, 1.0]), tol=-1.0)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(-6, 6), min_size=8, max_size=8))
    def test_matches_brute_force(self, ints):
        values = [float(x) for x in ints]
        assert check_severing(from_values(values), tol=0.0).severing == severing_oracle(values)

    def test_report_dict(self):
        d = check_severing(from_values([0.0, 1.0, 2.0, 3.0])).to_dict()
        assert d["severing"] is False
        assert d["witness"] == [[0, 1], [1, 2]]


class TestClosure:
    def test_dense_mixer(self):
        assert np.array_equal(dense_mixer(3), dense_B(3))

    @pytest.mark.parametrize("seed", range(20))
    def test_random_two_bit_is_full(self, seed):
        assert lie_closure_dim(gen_uniform(2, seed)) == 15

    def test_constant_gives_one(self):
        assert lie_closure_dim(from_values([2.0] * 4)) == 1

    def test_symmetric_objective_is_deficient(self):
        # f invariant under the global flip commutes with prod X_n
        assert lie_closure_dim(from_values([0.0, -1.0, -1.0, 0.0])) < 15

    def test_one_bit(self):
        assert lie_closure_dim(from_values([0.0, 1.0])) == 3

    def test_converges(self):
        r = lie_closure(gen_qubo(2, 0))
        assert r.converged and r.dimension <= 15

    def test_limit(self):
        with pytest.raises(ValueError):
            lie_closure(gen_uniform(4, 0))


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_mixer_graph(n):
    assert hypercube_bfs_count(n) == 2**n
    assert mixer_graph_connected(n)
