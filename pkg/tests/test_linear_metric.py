import math

import numpy as np
import pytest
import scipy.optimize
from hypothesis import assume, given
from hypothesis import strategies as st
from oracles import (
    FAMILY_SAMPLERS,
    adjoint_numeric,
    conjugate,
    eta,
    hamiltonian,
    herm_defect,
    pbw_defect,
)

from su2metric.linear_metric import (
    DomainError,
    GateViolation,
    LinearMetricParams,
    SingularGaussError,
    adjoint_matrix,
    constraint_coefficients,
    dyson_operator,
    gauss_decompose,
    gauss_product,
    hermitian_alternative,
    is_hameva,
    quadratic_family_forced,
    solve_couplings,
    solve_gamma_zero_family,
    solve_lambda_zero_family,
    solve_linear_family,
    solve_quadratic_family,
)
from su2metric.su2_core import (
    QuadHamiltonianParams,
    build_spin_rep,
    spin_rep_from_two_l,
)

unit = st.floats(-1, 1, allow_nan=False)


def conjugation_defect(h, e):
    """Hermiticity defect of e h e^-1 in units of the rounding the oracle itself incurs."""
    scale = np.linalg.cond(e) * max(1.0, np.abs(h).max())
    return herm_defect(conjugate(h, e)) / scale
metrics = st.builds(LinearMetricParams, unit, unit, unit)


def fig1_hamiltonian(theta=1.0):
    sh2 = math.sinh(theta) ** 2
    g0 = math.sqrt(8 - theta * theta)
    return QuadHamiltonianParams(beta0=64 * g0 * sh2 / (theta * theta + 16 * sh2), alphaP=4.0, betaP=4.0)


# ---------------------------------------------------------------- parameters and operators


def test_theta_sq_sign_and_positivity():
    assert LinearMetricParams(1, 1, 0).theta_sq == 8
    m = LinearMetricParams(0.1, 0, 1)
    assert m.theta_sq < 0 and not m.is_positive and m.theta.imag > 0
    assert LinearMetricParams(0.3, 0.1, 0).is_hermitian


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        LinearMetricParams(float("inf"), 0, 0)


@given(metrics)
def test_adjoint_matrix_matches_projection(m):
    b = adjoint_matrix(m).b
    assert np.abs(b - adjoint_numeric(m.lam, m.Gamma, m.Gamma0)).max() < 1e-11 * np.abs(b).max()


@given(metrics)
def test_adjoint_matrix_unimodular(m):
    assert abs(adjoint_matrix(m).det - 1) < 1e-11


@given(metrics, st.sampled_from([1, 3, 4]))
def test_adjoint_action_on_generators(m, two_l):
    rep = spin_rep_from_two_l(two_l)
    e = dyson_operator(m, rep)
    ei = np.linalg.inv(e)
    scale = np.abs(e).max() * np.abs(ei).max()
    for g, got in zip((rep.L0, rep.Lplus, rep.Lminus), adjoint_matrix(m).act(rep)):
        assert np.abs(e @ g @ ei - got).max() < 1e-12 * scale


@given(metrics, st.sampled_from([1, 2, 3, 4]))
def test_dyson_operator_matches_scipy(m, two_l):
    e = dyson_operator(m, spin_rep_from_two_l(two_l))
    assert np.abs(e - eta(m.lam, m.Gamma, m.Gamma0, two_l / 2)).max() < 1e-12 * np.abs(e).max()


@given(metrics, st.sampled_from([1, 2, 3, 4]))
def test_gauss_reconstruction(m, two_l):
    rep = spin_rep_from_two_l(two_l)
    e = dyson_operator(m, rep)
    assert np.abs(gauss_product(gauss_decompose(m), rep) - e).max() < 1e-12 * np.abs(e).max()


def test_gauss_singular():
    # cos(theta) + i Gamma0 sin(theta)/theta = 0 needs theta^2 < 0 with cosh = 0, impossible for real params;
    # the guard is exercised through its threshold instead.
    with pytest.raises(SingularGaussError):
        gauss_decompose(LinearMetricParams(0.2, 0.1, 0.3), eps=10.0)


def test_hermitian_metric_is_positive_definite():
    m = LinearMetricParams(0.4, -0.3, 0.0)
    e = dyson_operator(m, build_spin_rep(2))
    assert np.abs(e - e.conj().T).max() < 1e-12
    assert np.linalg.eigvalsh(e).min() > 0


# ---------------------------------------------------------------- constraint polynomials


@given(metrics)
def test_constraints_vanish_for_zero_hamiltonian(m):
    assert not constraint_coefficients(QuadHamiltonianParams(), m).xi.any()


@given(metrics)
def test_constraints_vanish_at_identity_for_hermitian_h(m):
    p = QuadHamiltonianParams(alphaP=0.3, alpha00=1.2, alphaPP=-0.4, betaPP=0.7, alphaPM=0.5)
    # Only the Y^0 column survives at lambda = Gamma = Gamma0 = 0 and it carries beta0, a+0, b+0.
    assert not constraint_coefficients(p, LinearMetricParams()).evaluate(1.0).any()


def test_constraint_zero_iff_counterpart_hermitian():
    rep_l = 2.0
    p = fig1_hamiltonian()
    good = LinearMetricParams(1.0, 1.0, math.sqrt(7.0))
    bad = LinearMetricParams(1.0, 1.0, 2.0)
    h = hamiltonian(p, rep_l)
    for m, expect in ((good, True), (bad, False)):
        small = constraint_coefficients(p, m).residual(m.Y) < 1e-9
        herm = conjugation_defect(h, eta(m.lam, m.Gamma, m.Gamma0, rep_l)) < 1e-12
        assert small == herm == expect


def test_linear_subclass_root_matches_quotient_form():
    # tanh(theta)/theta = beta0 / (Delta - 4 (a+ Gamma - b+ lambda)) along the Figure 1 ray
    p = fig1_hamiltonian(1.3)
    m = LinearMetricParams(1.0, 1.0, math.sqrt(8 - 1.69))
    lam, G, G0 = m.lam, m.Gamma, m.Gamma0
    ap, bp, b0 = p.alphaP, p.betaP, p.beta0
    th2p = G0**2 + 4 * (lam**2 + G**2)
    delta = math.sqrt(16 * (bp * lam - ap * G) ** 2 + 8 * b0 * G0 * (ap * lam + bp * G) - b0**2 * th2p)
    assert any(abs(m.Y - b0 / (s * delta - 4 * (ap * G - bp * lam))) < 1e-12 for s in (1, -1))
    assert constraint_coefficients(p, m).residual(m.Y) < 1e-12


# ---------------------------------------------------------------- master property across families


@pytest.mark.parametrize("family", sorted(FAMILY_SAMPLERS))
def test_every_solution_hermitizes(family):
    rng = np.random.default_rng(abs(hash(family)) % 2**32)
    sampler = FAMILY_SAMPLERS[family]
    checked = 0
    for _ in range(400):
        for s in sampler(rng):
            m, p = s.metric, s.hamiltonian
            assert herm_defect(conjugate(hamiltonian(p, 2.0), eta(m.lam, m.Gamma, m.Gamma0, 2.0))) < 1e-8
            assert pbw_defect(p, m) < 1e-8
            assert s.constraint_residual <= 1e-9
            checked += 1
        if checked >= 30:
            break
    assert checked >= 30


# ---------------------------------------------------------------- linear family


def test_linear_trivial_when_beta0_zero():
    res = solve_linear_family(QuadHamiltonianParams(alphaP=1.0), LinearMetricParams(1, 0, 0))
    assert [s.branch for s in res] == ["trivial"]
    assert res[0].metric == LinearMetricParams()


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0, 2.5])
def test_linear_recovers_figure1_scale(theta):
    p = fig1_hamiltonian(theta)
    res = solve_linear_family(p, LinearMetricParams(1.0, 1.0, math.sqrt(8 - theta * theta)))
    assert any(abs(s.metric.lam - 1.0) < 1e-9 for s in res)


def test_linear_beyond_reality_bound_is_empty():
    res = solve_linear_family(QuadHamiltonianParams(beta0=3.0, alphaP=1.0), LinearMetricParams(0.3, -0.2, 0.5))
    assert len(res) == 0
    assert any("exceeds" in d for d in res.diagnostics)


def test_linear_gates():
    with pytest.raises(GateViolation):
        solve_linear_family(QuadHamiltonianParams(beta0=1, alphaPP=0.1), LinearMetricParams(1, 0, 0))
    with pytest.raises(GateViolation):
        solve_linear_family(QuadHamiltonianParams(beta0=1, alpha00=1.0, alphaPM=0.2), LinearMetricParams(1, 0, 0))
    with pytest.raises(DomainError):
        solve_linear_family(QuadHamiltonianParams(beta0=1, alphaP=1), LinearMetricParams())


def test_hameva_is_infeasible_not_a_gate_error():
    p = QuadHamiltonianParams(beta0=0.7, alphaP=0.6, alpha00=1.4)
    assert is_hameva(p)
    res = solve_linear_family(p, LinearMetricParams(1, 1, 1))
    assert len(res) == 0 and "no consistent solution" in res.diagnostics
    assert not is_hameva(QuadHamiltonianParams(alphaP=0.6, alpha00=1.4))
    assert not is_hameva(QuadHamiltonianParams(beta0=0.7, alphaP=0.6, alpha00=1.4, alphaPM=0.7))


def test_hameva_has_no_hermitizing_linear_metric():
    # Independent check: minimize the relative Hermiticity defect over all metric vectors.
    rng = np.random.default_rng(3)
    for _ in range(3):
        sx, sz, szz = rng.uniform(0.2, 2.0, 3)
        h = hamiltonian(QuadHamiltonianParams(beta0=sz, alphaP=sx, alpha00=szz), 1.5)

        def defect(x):
            hc = conjugate(h, eta(*x, 1.5))
            return np.linalg.norm(hc - hc.conj().T) / np.linalg.norm(hc)

        best = min(
            scipy.optimize.minimize(defect, rng.uniform(-1, 1, 3), method="Nelder-Mead").fun for _ in range(10)
        )
        assert best > 0.1


def test_linear_allows_casimir_shift():
    p = QuadHamiltonianParams(beta0=1.0, alphaP=1.0, alpha00=2.0, alphaPM=1.0)
    assert len(hermitian_alternative(p)) > 0


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.05, 0.95), st.sampled_from([1, -1]))
def test_hermitian_alternative_inside_bound(ap, bp, frac, sign):
    assume(math.hypot(ap, bp) > 0.1)
    b0 = sign * frac * 2 * math.hypot(ap, bp)
    res = hermitian_alternative(QuadHamiltonianParams(beta0=b0, alphaP=ap, betaP=bp))
    assert len(res) >= 1
    assert all(s.metric.Gamma0 == 0 and s.metric.is_positive for s in res)


def test_hermitian_alternative_needs_direction():
    with pytest.raises(DomainError):
        hermitian_alternative(QuadHamiltonianParams(beta0=1.0))


def test_same_lambda_gamma_without_gamma0_does_not_hermitize():
    # Dropping Gamma0 from a solution is not a solution in general; a different
    # Gamma0 = 0 metric has to be found.
    p = fig1_hamiltonian(1.0)
    m = LinearMetricParams(1.0, 1.0, math.sqrt(7.0))
    h = hamiltonian(p, 2.0)
    assert conjugation_defect(h, eta(m.lam, m.Gamma, m.Gamma0, 2.0)) < 1e-12
    assert herm_defect(conjugate(h, eta(m.lam, m.Gamma, 0.0, 2.0))) > 1.0
    alt = hermitian_alternative(p)
    assert len(alt) > 0
    for s in alt:
        assert herm_defect(conjugate(h, eta(s.metric.lam, s.metric.Gamma, 0.0, 2.0))) < 1e-8


def test_gamma0_free_alternative_for_sampled_solutions():
    rng = np.random.default_rng(3)
    seen = 0
    while seen < 20:
        for s in FAMILY_SAMPLERS["linear"](rng):
            if s.metric.Gamma0 != 0.0:
                assert len(hermitian_alternative(s.hamiltonian)) > 0
                seen += 1


# ---------------------------------------------------------------- quadratic family


def test_quadratic_project_then_validate():
    p = QuadHamiltonianParams(beta0=0.8, alphaP=1.0, betaP=1.5, alphaP0=0.3, betaP0=0.2, alphaPP=0.1, alphaPM=0.4)
    proj = solve_quadratic_family(p, 0.3, mode="project")
    assert len(proj) >= 1
    ham = proj[0].hamiltonian
    assert (ham.alpha00, ham.betaPP) == quadratic_family_forced(p, 0.3)
    val = solve_quadratic_family(ham, 0.3)
    assert [s.metric for s in val] == [s.metric for s in proj]
    # validate mode rejects the unprojected couplings
    assert len(solve_quadratic_family(p, 0.3)) == 0


def test_quadratic_tanh_root_product_is_one():
    p = QuadHamiltonianParams(beta0=0.8, alphaP=1.0, betaP=1.5, alphaP0=0.3, betaP0=0.2)
    nu = 0.3
    r = math.sqrt(1 + nu * nu)
    n = 2 * p.betaP - p.betaP0 - (2 * p.alphaP - p.alphaP0) * nu
    d = math.sqrt(n * n - p.beta0**2 * r * r)
    assert ((n + d) / (p.beta0 * r)) * ((n - d) / (p.beta0 * r)) == pytest.approx(1.0)
    res = solve_quadratic_family(p, nu, mode="project")
    assert len(res) == 1
    assert any("coth root" in x for x in res.diagnostics)


def test_quadratic_family_reduces_to_linear_family():
    p = QuadHamiltonianParams(beta0=1.0, alphaP=1.0, betaP=1.0)
    nu = -1 / 3  # the (betaP, -alphaP) direction rotated into Gamma = nu lambda
    res = solve_quadratic_family(p, nu, mode="project")
    for s in res:
        h = hamiltonian(s.hamiltonian, 2.0)
        assert herm_defect(conjugate(h, eta(s.metric.lam, s.metric.Gamma, 0.0, 2.0))) < 1e-8
    lin = hermitian_alternative(p)
    assert len(lin) > 0 and len(res) > 0
    # with beta+ = alpha+ the linear solution needs Gamma = -lambda
    assert all(abs(s.metric.Gamma + s.metric.lam) < 1e-12 for s in lin)


def test_quadratic_without_real_tanh():
    res = solve_quadratic_family(QuadHamiltonianParams(beta0=5.0, betaP=0.1), 0.2, mode="project")
    assert len(res) == 0 and "no consistent solution" in res.diagnostics


def test_quadratic_zero_hamiltonian_is_degenerate():
    res = solve_quadratic_family(QuadHamiltonianParams(), 0.2)
    assert len(res) == 0 and "degenerate" in res.diagnostics[0]


def test_quadratic_domain_errors():
    with pytest.raises(DomainError):
        quadratic_family_forced(QuadHamiltonianParams(beta0=1.0), 1.0)
    with pytest.raises(DomainError):
        quadratic_family_forced(QuadHamiltonianParams(betaP=1.0), 0.2)
    with pytest.raises(ValueError):
        solve_quadratic_family(QuadHamiltonianParams(beta0=1.0), 0.2, mode="guess")


def test_forced_couplings_match_linear_solve():
    p = QuadHamiltonianParams(beta0=0.8, alphaP=1.0, betaP=1.5, alphaP0=0.3, betaP0=0.2, alphaPP=0.1, alphaPM=0.4)
    (s,) = solve_quadratic_family(p, 0.3, mode="project")
    q = solve_couplings(p, s.metric, ("alpha00", "betaPP"))
    assert q.alpha00 == pytest.approx(s.hamiltonian.alpha00, abs=1e-9)
    assert q.betaPP == pytest.approx(s.hamiltonian.betaPP, abs=1e-9)


def test_solve_couplings_errors():
    with pytest.raises(DomainError):
        solve_couplings(QuadHamiltonianParams(beta0=1.0), LinearMetricParams(), ("alpha00", "betaPP"))
    with pytest.raises(ValueError):
        solve_couplings(QuadHamiltonianParams(), LinearMetricParams(0.1), ("alpha00",), equations=(0, 1))


def test_quadratic_hermitian_h_without_quadratic_imaginary_parts():
    # a Hermitian H of the family with broken parameters has no such metric
    p = QuadHamiltonianParams(alphaP=1.0, alpha00=1.0, alphaPM=0.5)
    with pytest.raises(DomainError):
        solve_quadratic_family(p, 0.2)


# ---------------------------------------------------------------- Gamma0 != 0 families


@pytest.mark.parametrize("solver", [solve_gamma_zero_family, solve_lambda_zero_family])
def test_gamma0_families_domain(solver):
    with pytest.raises(DomainError):
        solver(QuadHamiltonianParams(beta0=1.0), 2.0)
    res = solver(QuadHamiltonianParams(), 0.5)
    assert len(res) == 0 and "degenerate" in res.diagnostics[0]


@pytest.mark.parametrize("solver", [solve_gamma_zero_family, solve_lambda_zero_family])
@pytest.mark.parametrize("nu", [0.0, 0.7, -1.2, 1.6])
def test_gamma0_families_hermitize(solver, nu):
    rng = np.random.default_rng(int(10 * nu) + 40)
    found = 0
    for _ in range(200):
        p = QuadHamiltonianParams.from_array(rng.uniform(-1, 1, 9))
        for s in solver(p, nu, mode="project"):
            if s.theta > 3:
                continue
            m = s.metric
            assert m.Gamma0 == pytest.approx(nu * (m.lam if solver is solve_gamma_zero_family else m.Gamma))
            assert conjugation_defect(hamiltonian(s.hamiltonian, 1.5), eta(m.lam, m.Gamma, m.Gamma0, 1.5)) < 1e-12
            found += 1
    assert found > 0


@pytest.mark.parametrize("solver", [solve_gamma_zero_family, solve_lambda_zero_family])
def test_special_branches_need_large_nu(solver):
    rng = np.random.default_rng(5)
    branches = set()
    for _ in range(50):
        p = QuadHamiltonianParams.from_array(rng.uniform(-1, 1, 9))
        branches |= {s.branch for s in solver(p, 1.8, mode="project")}
        assert not any(s.branch.startswith("special") for s in solver(p, 1.2, mode="project"))
    assert {"special+", "special-"} <= branches


def test_validate_mode_reports_forced_mismatch():
    p = QuadHamiltonianParams(beta0=0.5, alphaP=0.2, betaP=1.0, alphaP0=0.1, betaP0=0.3)
    res = solve_gamma_zero_family(p, 0.5)
    assert len(res) == 0
    assert any("forced to" in d for d in res.diagnostics)
