import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_mixer_unitary, dense_phase_unitary, random_state
from deepqaoa.landscape import mu_all
from deepqaoa.objective import ObjectiveSpec, from_values, gen_qubo, gen_uniform, normalize_sup, traceless
from deepqaoa.search import (
    BETA_STEPS,
    GAMMA_STEPS,
    NoTrapError,
    SearchConfig,
    build_grid,
    candidate_states,
    candidate_values,
    initial_state,
    local_search,
    make_record,
    near_eigenstate_init,
    pick_trap_string,
    run,
    step,
)
from deepqaoa.statevector import LayerParams, basis_state, expectation, plus_state, trace_distance


class TestGrid:
    def test_shape_and_range(self):
        g = build_grid(0.1, 2.0)
        assert len(g) == BETA_STEPS * GAMMA_STEPS == 55
        assert g.range == pytest.approx(0.05)
        assert g.betas[0] == pytest.approx(-0.05) and g.betas[-1] == pytest.approx(0.05)
        assert g.gammas.tolist() == pytest.approx([-0.05, -0.025, 0.0, 0.025, 0.05])

    def test_contains_exact_identity(self):
        g = build_grid(0.3, 1.0)
        assert LayerParams(0.0, 0.0) in g.pairs
        assert g[27] == LayerParams(0.0, 0.0)

    def test_row_major_beta_outer(self):
        g = build_grid(0.1, 1.0)
        assert g[0] == LayerParams(g.betas[0], g.gammas[0])
        assert g[1] == LayerParams(g.betas[0], g.gammas[1])
        assert g[5] == LayerParams(g.betas[1], g.gammas[0])
        assert g.pairs == [g[i] for i in range(len(g))]

    @pytest.mark.parametrize("args", [(0.0, 1.0), (0.1, 0.0), (0.1, 1.0, 10, 5)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            build_grid(*args)


class TestCandidates:
    def test_dense_oracle(self, rng):
        t = normalize_sup(gen_qubo(3, 4))
        c = traceless(t)
        g = build_grid(0.2, 1.0)
        psi = random_state(rng, 3)
        cands = candidate_states(psi, g, c)
        for i, params in enumerate(g.pairs):
            u = dense_mixer_unitary(3, params.beta) @ dense_phase_unitary(c.c_values, params.gamma)
            assert np.allclose(cands[i], u @ psi, atol=1e-12)

    def test_values(self, rng):
        t = normalize_sup(gen_uniform(4, 0))
        g = build_grid(0.1, 1.0)
        psi = random_state(rng, 4)
        cands = candidate_states(psi, g, traceless(t))
        f0 = expectation(psi, t)
        vals = candidate_values(cands, g, t, f0)
        for i, params in enumerate(g.pairs):
            if params.beta == 0.0:
                assert vals[i] == f0
            else:
                assert vals[i] == pytest.approx(expectation(cands[i], t), abs=1e-14)


class TestStep:
    def test_optimal_basis_state_stays_put(self):
        t = normalize_sup(gen_qubo(4, 0))
        z = t.argmin_set[0]
        g = build_grid(0.1, 1.0)
        new, rec = step(basis_state(z, 4), g, traceless(t), t)
        # no move lowers F; a pure phase layer wins the tie and F is unchanged
        assert rec.chosen_beta == 0.0
        assert rec.f_value == t[z]
        assert abs(new[z]) == pytest.approx(1.0)
        assert rec.success_prob == pytest.approx(1.0)

    def test_improves_from_plus(self):
        t = normalize_sup(gen_qubo(5, 1))
        g = build_grid(0.1, 1.0)
        psi = plus_state(5)
        new, rec = step(psi, g, traceless(t), t)
        assert rec.f_value < expectation(psi, t)
        assert rec.f_value == pytest.approx(expectation(new, t), abs=1e-14)

    def test_does_not_modify_input(self, rng):
        t = normalize_sup(gen_qubo(3, 1))
        psi = random_state(rng, 3)
        before = psi.copy()
        step(psi, build_grid(0.1, 1.0), traceless(t), t)
        assert np.array_equal(psi, before)


class TestLocalSearch:
    def test_monotone(self):
        t = normalize_sup(gen_qubo(6, 2))
        _, recs = local_search(t, plus_state(6), 0.1, 200)
        f = [r.f_value for r in recs]
        assert all(b <= a for a, b in zip(f, f[1:]))

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from([0.01, 0.1, 0.5, 1.0]))
    def test_monotone_property(self, seed, eps):
        t = normalize_sup(gen_uniform(4, seed))
        psi = random_state(np.random.default_rng(seed), 4)
        _, recs = local_search(t, psi, eps, 30)
        f = [expectation(psi, t)] + [r.f_value for r in recs]
        assert all(b <= a for a, b in zip(f, f[1:]))

    def test_f_value_tracks_state(self):
        t = normalize_sup(gen_qubo(5, 0))
        final, recs = local_search(t, plus_state(5), 0.1, 50)
        assert recs[-1].f_value == pytest.approx(expectation(final, t), abs=1e-12)

    def test_record_every(self):
        t = normalize_sup(gen_qubo(3, 0))
        _, recs = local_search(t, plus_state(3), 0.1, 10, record_every=3)
        assert [r.p for r in recs] == [3, 6, 9, 10]

    def test_input_state_untouched(self):
        t = normalize_sup(gen_qubo(3, 0))
        psi = plus_state(3)
        local_search(t, psi, 0.1, 5)
        assert np.array_equal(psi, plus_state(3))

    def test_bounded_motion(self):
        t = normalize_sup(gen_qubo(9, 0))
        c = traceless(t)
        for eps in (0.01, 0.1):
            g = build_grid(eps, 1.0)
            psi = plus_state(9)
            for p in range(1, 41):
                new, _ = step(psi, g, c, t, p)
                assert trace_distance(psi, new) <= 2 * eps
                psi = new

    def test_deterministic(self):
        cfg = SearchConfig(ObjectiveSpec("qubo", 5, 3), epsilon=0.1, max_rounds=40)
        a_state, a = run(cfg)
        b_state, b = run(cfg)
        assert a == b
        assert a_state.tobytes() == b_state.tobytes()

    def test_bad_rounds(self):
        with pytest.raises(ValueError):
            local_search(normalize_sup(gen_qubo(2, 0)), plus_state(2), 0.1, 0)


class TestInit:
    def test_near_eigenstate(self):
        psi = near_eigenstate_init(3, 0.1, 9)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        assert abs(psi[3]) ** 2 > 0.95
        # direct normalization arithmetic
        d = 0.1 / np.sqrt(512)
        expected = (1 + d) ** 2 / ((1 + d) ** 2 + 511 * d**2)
        assert abs(psi[3]) ** 2 == pytest.approx(expected)

    def test_small_delta_limit(self):
        assert abs(near_eigenstate_init(1, 1e-9, 4)[1]) ** 2 == pytest.approx(1.0)

    @pytest.mark.parametrize("delta, z", [(0.0, 0), (1.0, 0), (0.1, 16)])
    def test_invalid(self, delta, z):
        with pytest.raises(ValueError):
            near_eigenstate_init(z, delta, 4)

    def test_trap_one_bit(self):
        with pytest.raises(NoTrapError):
            pick_trap_string(from_values([0.0, 1.0]))

    def test_trap_constant(self):
        with pytest.raises(NoTrapError):
            pick_trap_string(from_values([1.0] * 8))

    @pytest.mark.parametrize("seed", range(5))
    def test_trap_qubo(self, seed):
        t = gen_qubo(9, seed)
        z = pick_trap_string(t)
        mus = mu_all(t)
        assert mus[z] > 0 and z not in t.argmin_set
        candidates = [w for w in range(t.dim) if w not in t.argmin_set]
        assert mus[z] == max(mus[w] for w in candidates)
        assert z == min(w for w in candidates if mus[w] == mus[z])

    def test_initial_state_modes(self):
        t = normalize_sup(gen_qubo(4, 0))
        psi, z = initial_state(SearchConfig(init="plus"), t)
        assert z is None and np.array_equal(psi, plus_state(4))
        psi, z = initial_state(SearchConfig(init="near_eigenstate", init_z=5), t)
        assert z == 5 and abs(psi[5]) ** 2 > 0.9
        _, z = initial_state(SearchConfig(init="trap"), t)
        assert z == pick_trap_string(t)

    @pytest.mark.parametrize(
        "kwargs", [{"epsilon": 0.0}, {"max_rounds": 0}, {"record_every": 0}, {"init": "random"}]
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            SearchConfig(**kwargs)


def test_make_record_at_start():
    t = normalize_sup(gen_qubo(9, 0))
    rec = make_record(0, plus_state(9), t, LayerParams(0.0, 0.0))
    assert rec.p == 0
    assert rec.success_prob == pytest.approx(1 / 512)
    assert rec.f_value == pytest.approx(t.mean)
    assert rec.grad_b_mag < 1e-12
    assert len(rec.row()) == len(rec.FIELDS)
