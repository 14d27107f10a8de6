"""End-to-end rootfinders: normal form, resultant pencil, operator
determinants, and the two closed-form univariate reductions."""

import json
import warnings

import numpy as np
import pytest

from polylab import (
    FamilySpec,
    MultiParamEig,
    MultiPoly,
    NullityMismatch,
    PolySystem,
    RankDeficientBasis,
    SingularDelta0,
    UnsupportedShape,
    bezout_count,
    build_ms_matrices,
    determinantal_representation_quadratic,
    generate,
    hausdorff_distance,
    mep_from_system,
    newton_polish,
    operator_determinants,
    solve_gb_elimination_example,
    solve_macaulay_resultant,
    solve_mep_operator_determinants,
    solve_normal_form,
    solve_rur_example,
    true_root_error,
)
from polylab.conditioning import mep_operator


def cyclic_truth(d, sigma, shift=0.0):
    """Closed-form roots of the cyclic-squares system."""
    roots = [np.full(d, shift, dtype=complex)]
    n = 2**d
    for k in range(n - 1):
        xs = [sigma * np.exp(2j * np.pi * k / (n - 1))]
        for _ in range(d - 1):
            xs.append(xs[-1] ** 2 / sigma)
        roots.append(np.array(xs) + shift)
    return roots


def test_newton_polish_contracts_toward_the_root():
    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    target = np.asarray(s.true_roots[1], dtype=complex)
    x0 = target + 1e-4
    x1 = newton_polish(s, x0)
    assert np.linalg.norm(x1 - target) <= 1e-7
    assert np.linalg.norm(x1 - target) < np.linalg.norm(x0 - target)


def test_ms_matrices_commute_and_share_the_root_spectrum():
    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    mats, basis, N = build_ms_matrices(s)
    assert basis == [(0, 0), (1, 0), (0, 1), (1, 1)]
    comm = np.linalg.norm(mats[0] @ mats[1] - mats[1] @ mats[0], 2)
    assert comm <= 1e-12
    key = lambda z: (round(z.real, 8), round(z.imag, 8))
    got = sorted(np.linalg.eigvals(mats[0]), key=key)
    want = sorted((r[0] for r in cyclic_truth(2, 0.5)), key=key)
    assert np.max(np.abs(np.array(got) - np.array(want))) <= 1e-10


def test_ms_matrices_reject_positive_dimensional_systems():
    s = PolySystem(
        2,
        [MultiPoly(2, {(2, 0): 1.0}), MultiPoly(2, {(1, 1): 1.0})],
        true_roots=[],
        family_tag="",
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(NullityMismatch):
            build_ms_matrices(s)


def test_normal_form_solver_recovers_all_cyclic_roots():
    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    rep = solve_normal_form(s, rng=np.random.default_rng(2))
    assert rep.method_tag == "nf"
    assert len(rep.roots) == 4
    assert hausdorff_distance(rep.roots, cyclic_truth(2, 0.5)) <= 1e-8
    scale = s.coefficient_scale()
    assert max(rep.residuals) <= 1e-9 * scale
    assert len(rep.subproblem_kappa) == 4
    assert all(np.isfinite(k) for k in rep.subproblem_kappa)
    assert rep.diagnostics["basis"] == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_normal_form_solver_is_deterministic():
    s = generate(FamilySpec(family="cyclic_squares", d=3, sigma=0.4))
    a = solve_normal_form(s, rng=np.random.default_rng(9))
    b = solve_normal_form(s, rng=np.random.default_rng(9))
    assert hausdorff_distance(a.roots, b.roots) == 0.0


def test_polish_flag_sharpens_an_ill_conditioned_solve():
    s = generate(FamilySpec(family="notdev2d", d=2, sigma=1e-3, seed=2))
    raw = solve_normal_form(s, rng=np.random.default_rng(3))
    polished = solve_normal_form(s, rng=np.random.default_rng(3), polish=True)
    origin = [np.zeros(2, dtype=complex)]
    raw_err = true_root_error(raw, origin)
    pol_err = true_root_error(polished, origin)
    assert polished.diagnostics["polished"] is True
    assert pol_err <= raw_err
    assert pol_err <= 1e-12


def test_macaulay_solver_square_path_bivariate():
    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    rep = solve_macaulay_resultant(s, rng=np.random.default_rng(4))
    assert rep.method_tag == "macaulay"
    assert rep.diagnostics["square"] is True
    assert hausdorff_distance(rep.roots, cyclic_truth(2, 0.5)) <= 1e-8


def test_macaulay_solver_reduced_path_trivariate():
    s = generate(FamilySpec(family="cyclic_squares", d=3, sigma=0.5))
    rep = solve_macaulay_resultant(s, rng=np.random.default_rng(7))
    assert rep.diagnostics["square"] is False
    assert len(rep.roots) == 8
    assert hausdorff_distance(rep.roots, cyclic_truth(3, 0.5)) <= 1e-8


def test_macaulay_solver_filters_near_infinite_stragglers():
    # tiny sigma pushes one infinite eigenvalue's |beta| above the absolute
    # cutoff; the relative gap filter must still deliver exactly 4 roots
    target = np.array([1 / 3, 1 / 3], dtype=complex)
    for sigma in (1e-3, 1e-4):
        for seed in range(20):
            s = generate(
                FamilySpec(family="notdev2d", d=2, sigma=sigma, seed=seed, shift=(1 / 3, 1 / 3))
            )
            rep = solve_macaulay_resultant(s, rng=np.random.default_rng(seed))
            assert len(rep.roots) == 4
            best = min(np.linalg.norm(np.asarray(r) - target) for r in rep.roots)
            assert best <= 1e-4


def test_macaulay_solver_rejects_positive_dimensional_systems():
    s = PolySystem(
        2,
        [MultiPoly(2, {(2, 0): 1.0}), MultiPoly(2, {(1, 1): 1.0})],
        true_roots=[],
        family_tag="",
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises((RankDeficientBasis, NullityMismatch)):
            solve_macaulay_resultant(s, rng=np.random.default_rng(0))


def test_determinantal_representation_matches_the_polynomial():
    rng = np.random.default_rng(71)
    p = MultiPoly(2, {(2, 0): 1.5, (1, 0): 0.3, (0, 1): -0.7, (0, 0): 0.2})
    rep = determinantal_representation_quadratic(p)
    assert len(rep) == 3 and rep[0].shape == (2, 2)
    for _ in range(10):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        det = np.linalg.det(mep_operator(rep, x))
        assert abs(det - p.eval(x)) <= 1e-10 * (1 + abs(p.eval(x)))


def test_determinantal_representation_rejects_unsupported_shapes():
    with pytest.raises(UnsupportedShape):
        determinantal_representation_quadratic(MultiPoly(2, {(1, 1): 1.0}))
    with pytest.raises(UnsupportedShape):
        determinantal_representation_quadratic(MultiPoly(2, {(2, 0): 1.0, (0, 2): 1.0}))
    with pytest.raises(UnsupportedShape):
        determinantal_representation_quadratic(MultiPoly(2, {(1, 0): 1.0, (0, 1): 1.0}))
    with pytest.raises(UnsupportedShape):
        determinantal_representation_quadratic(MultiPoly(1, {(3,): 1.0}))


def test_mep_from_system_requires_pivotable_quadratics():
    s = generate(FamilySpec(family="notdev2d", d=2, sigma=0.1, seed=1))
    with pytest.raises(UnsupportedShape):
        mep_from_system(s)


def test_operator_determinants_on_separable_system():
    # x^2 = 1 and y^2 = 1 decouple: the x-pencil spectrum is {1, -1}, twice
    s = PolySystem(
        2,
        [MultiPoly(2, {(2, 0): 1.0, (0, 0): -1.0}), MultiPoly(2, {(0, 2): 1.0, (0, 0): -1.0})],
        true_roots=[],
        family_tag="",
    )
    deltas = operator_determinants(mep_from_system(s))
    assert len(deltas) == 3
    ev = np.sort(np.linalg.eigvals(np.linalg.solve(deltas[0], deltas[1])).real)
    assert np.allclose(ev, [-1.0, -1.0, 1.0, 1.0], atol=1e-10)


def test_mep_solver_recovers_all_cyclic_roots():
    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    rep = solve_mep_operator_determinants(mep_from_system(s), system=s)
    assert rep.method_tag == "mep"
    assert hausdorff_distance(rep.roots, cyclic_truth(2, 0.5)) <= 1e-6
    assert max(rep.residuals) <= 1e-8


def test_mep_solver_without_system_uses_determinant_residuals():
    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    mep = mep_from_system(s)
    rep = solve_mep_operator_determinants(mep)
    assert all(np.isnan(k) for k in rep.kappa_root)
    assert max(rep.residuals) <= 1e-8


def test_mep_solver_rejects_singular_delta0():
    W1 = (np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)))
    W2 = (np.eye(3), np.zeros((3, 3)), np.zeros((3, 3)))
    with pytest.raises(SingularDelta0):
        solve_mep_operator_determinants(MultiParamEig(d=2, W=(W1, W2)))


def test_multiparam_eig_validates_block_shapes():
    with pytest.raises(ValueError):
        MultiParamEig(d=2, W=[(np.eye(2), np.eye(2), np.eye(2))])
    with pytest.raises(ValueError):
        MultiParamEig(d=1, W=[(np.eye(2), np.eye(3))])


def test_gb_elimination_polynomial_is_exact():
    g, rep = solve_gb_elimination_example(2, 0.1)
    assert np.array_equal(g.coeffs, np.array([0.0, -(0.1**3), 0.0, 0.0, 1.0], dtype=complex))
    assert g.derivative().eval(0.0) == -(0.1**3)
    assert rep.kappa_root == [10.0]
    assert rep.subproblem_kappa[0] == 1.0 / 0.1**3
    assert rep.diagnostics["error"] <= 1e-12
    assert len(rep.diagnostics["all_roots"]) == 4


def test_gb_elimination_with_shifted_root():
    g, rep = solve_gb_elimination_example(3, 0.1, shift=1 / 3)
    assert abs(g.eval(1 / 3)) <= 1e-14
    assert rep.diagnostics["error"] <= 1e-9
    assert abs(rep.roots[0][0] - 1 / 3) == rep.diagnostics["error"]


def test_gb_elimination_flags_underflow():
    with pytest.warns(RuntimeWarning):
        g, rep = solve_gb_elimination_example(6, 1e-6)
    assert rep.diagnostics["underflow"] is True
    assert rep.subproblem_kappa[0] == np.inf


def test_gb_elimination_rejects_nonpositive_sigma():
    with pytest.raises(ValueError):
        solve_gb_elimination_example(2, 0.0)


def test_rur_t_values_follow_the_sign_patterns():
    u = np.array([0.8, 0.6])
    f, rep = solve_rur_example(2, 4.0, u)
    a = 1.0 / (4.0 * np.sqrt(2))
    want = sorted(a * (s1 * 0.8 + s2 * 0.6) for s1 in (1, -1) for s2 in (1, -1))
    got = sorted(t.real for t in rep.diagnostics["t_values"])
    assert np.max(np.abs(np.array(got) - np.array(want))) <= 1e-14
    assert rep.diagnostics["t_star"] == pytest.approx(a * 1.4)
    assert rep.kappa_root == [4.0 * np.sqrt(2) / 2.0]
    assert rep.subproblem_kappa[0] == pytest.approx(33.671751485073706, rel=1e-9)
    assert f.degree == 4


def test_rur_warns_when_the_form_fails_to_separate():
    u = np.array([1.0, 1.0]) / np.sqrt(2)
    with pytest.warns(RuntimeWarning):
        f, rep = solve_rur_example(2, 4.0, u)
    assert rep.diagnostics["collisions"] >= 2


def test_rur_from_solver_mode_matches_closed_form():
    rng = np.random.default_rng(72)
    s = generate(FamilySpec(family="hypercube", d=2, c=4.0), rng=rng)
    u = np.array([0.8, 0.6])
    f_exact, _ = solve_rur_example(2, 4.0, u)
    f_solver, rep = solve_rur_example(2, 4.0, u, mode="from-solver", system=s)
    assert rep.diagnostics["mode"] == "from-solver"
    key = lambda z: (z.real, z.imag)
    a = sorted(np.roots(f_exact.coeffs[::-1]), key=key)
    b = sorted(np.roots(f_solver.coeffs[::-1]), key=key)
    assert np.max(np.abs(np.array(a) - np.array(b))) <= 1e-8


def test_rur_input_validation():
    with pytest.raises(ValueError):
        solve_rur_example(11, 4.0, np.ones(11) / np.sqrt(11))
    with pytest.raises(ValueError):
        solve_rur_example(2, 4.0, np.array([0.8, 0.6, 0.1]))
    with pytest.raises(ValueError):
        solve_rur_example(2, 4.0, np.array([1.2, 0.9]))
    with pytest.raises(ValueError):
        solve_rur_example(2, 4.0, np.array([0.8, 0.6]), mode="psychic")
    with pytest.raises(ValueError):
        solve_rur_example(2, 4.0, np.array([0.8, 0.6]), mode="from-solver")


def test_hausdorff_distance_basics():
    a = [np.array([0.0, 0.0]), np.array([1.0, 0.0])]
    b = [np.array([0.0, 0.0]), np.array([1.0, 0.0]), np.array([0.0, 2.0])]
    assert hausdorff_distance(a, a) == 0.0
    assert hausdorff_distance(a, b) == pytest.approx(2.0)
    assert hausdorff_distance(a, []) == np.inf


def test_root_report_serializes_to_json():
    s = generate(FamilySpec(family="cyclic_squares", d=2, sigma=0.5))
    rep = solve_macaulay_resultant(s, rng=np.random.default_rng(4))
    blob = json.dumps(rep.to_json_dict())
    back = json.loads(blob)
    assert back["method_tag"] == "macaulay"
    assert len(back["roots"]) == 4
    assert all(len(r) == 2 and len(r[0]) == 2 for r in back["roots"])
