import numpy as np
import pytest

from repvar import cohomology
from repvar.cohomology import coboundary, h1_basis, obstruction
from repvar.jets import (
    JetRepresentation,
    LiftOptions,
    gauge_transform,
    jet_residual_profile,
    jet_word,
    lift,
    probe_cone,
)
from repvar.repspace import evaluate_word, transport_apply
from repvar.unitary import random_skew, vec_skew

from conftest import random_cocycle


def _jet_rep(rep, gen_jets, conj_jets, order):
    return JetRepresentation(
        base=rep, order=order,
        generator_jets=tuple(tuple(j) for j in gen_jets),
        conjugator_jets=tuple(tuple(j) for j in conj_jets),
    )


def test_jet_word_zero_jets_is_constant(genus2_irr):
    jrep = _jet_rep(genus2_irr, [[] for _ in range(4)], [], 3)
    w = genus2_irr.presentation.relators[0]
    out = jet_word(jrep, w)
    assert np.allclose(out.coeff(0), evaluate_word(genus2_irr, w))
    assert np.max(np.abs(out.coeffs[1:])) == 0.0


def test_jet_word_order1_matches_transport(corpus_points):
    # the key cross-module oracle: first-order jet coefficients reproduce the
    # Fox-calculus transport times the word value
    rng = np.random.default_rng(70)
    for name, rep in corpus_points.items():
        n_gen = len(rep.presentation.generators)
        u = [random_skew(rng, rep.rank, 0.8) for _ in range(n_gen)]
        jrep = _jet_rep(rep, [[x] for x in u], [[] for _ in rep.presentation.groups], 1)
        words = list(rep.presentation.relators) + [p.word for p in rep.presentation.peripherals]
        for w in words:
            expected = transport_apply(rep.matrices, w, u) @ evaluate_word(rep, w)
            got = jet_word(jrep, w).coeff(1)
            assert np.linalg.norm(got - expected) <= 1e-12, name


def test_jet_unitarity_over_ring(genus2_irr):
    rng = np.random.default_rng(71)
    jetsets = [[random_skew(rng, 2, 0.5) for _ in range(4)] for _ in range(4)]
    jrep = _jet_rep(genus2_irr, jetsets, [], 4)
    for mj in jrep.matrix_jets():
        prod = mj.dagger() @ mj
        expected = np.zeros_like(prod.coeffs)
        expected[0] = np.eye(2)
        assert np.max(np.abs(prod.coeffs - expected)) <= 1e-12


def test_lift_coboundary_any_order(sphere4_rep, sphere4_cc):
    rng = np.random.default_rng(72)
    x = random_skew(rng, 2, 0.8)
    cb = coboundary(sphere4_rep, x)
    report = lift(sphere4_cc, cb.generator_part, 8)
    assert report.succeeded
    assert report.achieved_order == 8
    assert max(report.residuals) <= 1e-11


def test_lift_basis_vectors_genus2_irr(genus2_irr_cc):
    basis = h1_basis(genus2_irr_cc)
    for v in basis.vectors:
        report = lift(genus2_irr_cc, v, 6)
        assert report.succeeded
        assert max(report.residuals) <= 1e-9


def test_lift_failure_matches_obstruction(genus2_red_cc):
    basis = h1_basis(genus2_red_cc)
    failures = 0
    for v in basis.vectors:
        obs = obstruction(genus2_red_cc, v)
        report = lift(genus2_red_cc, v, 4)
        if obs.norm > 1e-7:
            failures += 1
            assert not report.succeeded
            assert report.achieved_order == 1
            assert not report.budget_exceeded
            agree = np.linalg.norm(obs.coordinates - report.obstruction.coordinates)
            assert agree <= 1e-8
        else:
            assert report.succeeded
    assert failures > 0


def test_order2_equivalence_sampled(corpus_points):
    # lift succeeds at order 2 iff the obstruction norm is below the threshold
    rng = np.random.default_rng(73)
    checked = 0
    for name, rep in corpus_points.items():
        cc = cohomology.assemble_complex(rep)
        basis = h1_basis(cc)
        if len(basis) == 0:
            continue
        for _ in range(20):
            u = random_cocycle(cc, basis, rng)
            unorm = float(np.linalg.norm(np.concatenate([vec_skew(m) for m in u])))
            q = obstruction(cc, u)
            report = lift(cc, u, 2)
            assert (q.norm <= 1e-7 * unorm ** 2) == report.succeeded, name
            checked += 1
    assert checked >= 60


def test_lift_report_invariant(genus2_red_cc, genus2_irr_cc):
    basis = h1_basis(genus2_red_cc)
    for v in basis.vectors[:4]:
        report = lift(genus2_red_cc, v, 3)
        assert (report.achieved_order == 3) == (report.obstruction is None)


def test_lift_profile_matches_reported_residuals(genus2_irr_cc):
    basis = h1_basis(genus2_irr_cc)
    report = lift(genus2_irr_cc, basis.vectors[0], 5)
    profile = jet_residual_profile(report.corrections, genus2_irr_cc)
    for m in range(2, 6):
        assert profile[m - 1] == pytest.approx(report.residuals[m - 1], abs=1e-10)


def test_lift_shares_one_factorization(genus2_irr_cc, monkeypatch):
    # the order-m systems share the order-zero matrix: lifting must reuse the
    # factorization built at assembly and never build another
    calls = []
    original = cohomology._LstsqSolver.__init__

    def counting(self, *args, **kwargs):
        calls.append(1)
        return original(self, *args, **kwargs)

    monkeypatch.setattr(cohomology._LstsqSolver, "__init__", counting)
    basis = h1_basis(genus2_irr_cc)
    solver_before = genus2_irr_cc.cone_solver
    report = lift(genus2_irr_cc, basis.vectors[1], 6)
    assert report.succeeded
    assert genus2_irr_cc.cone_solver is solver_before
    assert not calls


def test_lift_budget_exceeded_reported(sphere4_cc, monkeypatch):
    # force an unsolvable order-3 system: the bounded kernel search must run
    # out and the failure must be flagged, never silent
    basis = h1_basis(sphere4_cc)
    solver = sphere4_cc.cone_solver
    original = solver.solve
    calls = {"n": 0}

    def failing(b):
        calls["n"] += 1
        x, resid = original(b)
        return (x, resid) if calls["n"] == 1 else (x, resid + 1.0)

    monkeypatch.setattr(solver, "solve", failing)
    report = lift(sphere4_cc, basis.vectors[0], 4, LiftOptions(budget=2, seed=1))
    assert not report.succeeded
    assert report.budget_exceeded
    assert report.achieved_order == 2
    assert report.obstruction is not None
    assert calls["n"] >= 4  # order 2, order 3, and two rescue attempts


def test_gauge_action_preserves_profile(sphere4_cc, sphere4_rep):
    basis = h1_basis(sphere4_cc)
    report = lift(sphere4_cc, basis.vectors[0], 5)
    assert report.succeeded
    before = jet_residual_profile(report.corrections, sphere4_cc)
    rng = np.random.default_rng(74)
    gauge = [random_skew(rng, 2, 0.4) for _ in range(5)]
    moved = gauge_transform(report.corrections, gauge)
    after = jet_residual_profile(moved, sphere4_cc)
    assert max(abs(a - b) for a, b in zip(before, after)) <= 1e-10


def test_probe_abelian_all_cone_success(torus_cc):
    basis = h1_basis(torus_cc)
    report = probe_cone(torus_cc, basis, samples=50, order=6, seed=3)
    assert report.cone_success == 50
    assert report.prediction_holds
    assert report.budget_exceeded == 0


def test_probe_rigid_flagged(sphere3_cc):
    basis = h1_basis(sphere3_cc)
    report = probe_cone(sphere3_cc, basis, samples=10, order=4, seed=3)
    assert report.rigid
    assert report.samples == 0


def test_probe_reducible_contingency(genus2_red_cc):
    basis = h1_basis(genus2_red_cc)
    report = probe_cone(genus2_red_cc, basis, samples=30, order=4, seed=5)
    assert report.prediction_holds
    assert report.noncone_fail_order2 == 30
    assert report.budget_exceeded == 0


def test_probe_deterministic(genus2_red_cc):
    basis = h1_basis(genus2_red_cc)
    a = probe_cone(genus2_red_cc, basis, samples=10, order=3, seed=9)
    b = probe_cone(genus2_red_cc, basis, samples=10, order=3, seed=9)
    assert a == b
