import itertools
import math

import numpy as np
import pytest

from symbreak.errors import DomainError
from symbreak.golden import load_golden
from symbreak.hessian import block_operator_apply
from symbreak.spectrum import (
    abc,
    analytic_spectrum,
    critical_alpha_standard,
    critical_alpha_trivial,
    critical_ordering,
    critical_set,
    eigenvalue_family,
    isotypic_basis,
    merged_view,
    numerical_spectrum_match,
    root_scan,
    spectrum_symbolic_check_k5,
    w_block_matrix,
)
from symbreak.symrep import permutation_matrix

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------

def test_abc_values():
    def triple(alpha):
        co = abc(alpha)
        return (co.a, co.b, co.c)

    assert triple(0.0) == pytest.approx((0.5, 0.0, 0.0))
    assert triple(1.0) == pytest.approx((0.25, 0.25, 1.0 / TWO_PI))
    assert triple(2.0) == pytest.approx((0.0, 0.5, 1.0 / math.pi))
    for alpha in (-1.0, 0.3, 2.7):
        co = abc(alpha)
        assert co.a + co.b == pytest.approx(0.5, abs=1e-15)


# ---------------------------------------------------------------------------
# analytic spectrum
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("k", range(4, 11))
def test_multiplicity_accounting(k):
    entries = analytic_spectrum(k, 0.9)
    assert sum(e.multiplicity for e in entries) == k * k
    # the closed multiplicity identity behind the merged display
    assert k * (k - 1) // 2 + k * (k - 3) // 2 + 2 * (k - 1) + 2 == k * k


def test_spectrum_requires_k4():
    with pytest.raises(DomainError):
        analytic_spectrum(3, 1.0)


@pytest.mark.parametrize("k", [4, 5, 8])
def test_trace_consistency(k):
    # sum of value * multiplicity equals tr A = k * (k/2) for every alpha
    for alpha in np.linspace(-1.0, 3.5, 10):
        entries = analytic_spectrum(k, float(alpha))
        total = sum(e.value * e.multiplicity for e in entries)
        assert total == pytest.approx(k * k / 2.0, abs=1e-9)


def test_k5_values_match_frozen_display():
    golden = load_golden()["spectrum_display"]
    for key, want in golden["values"].items():
        alpha = float(key)
        entries = {e.formula_id: e.value for e in analytic_spectrum(5, alpha)}
        assert entries["wedge"] == pytest.approx(want["b_minus_c"], abs=1e-12)
        assert entries["W_bminus_c"] == pytest.approx(want["b_minus_c"], abs=1e-12)
        assert entries["sym0"] == pytest.approx(want["b_plus_c"], abs=1e-12)
        assert entries["W_plus"] == pytest.approx(want["W_plus"], abs=1e-12)
        assert entries["W_minus"] == pytest.approx(want["W_minus"], abs=1e-12)
        assert entries["span_IJ_plus"] == pytest.approx(want["span_plus"], abs=1e-12)
        assert entries["span_IJ_minus"] == pytest.approx(want["span_minus"], abs=1e-12)


def test_k4_alpha1_w_pair():
    entries = {e.formula_id: e for e in analytic_spectrum(4, 1.0)}
    # frozen from the dense eigensolver oracle; the independently quoted
    # approximations 1.192435 / 0.307565 agree to 1e-4
    assert entries["W_plus"].value == pytest.approx(1.1924394, abs=1e-6)
    assert entries["W_minus"].value == pytest.approx(0.3075606, abs=1e-6)
    assert entries["W_plus"].value == pytest.approx(1.192435, abs=1e-4)
    assert entries["W_minus"].value == pytest.approx(0.307565, abs=1e-4)
    assert entries["W_plus"].multiplicity == entries["W_minus"].multiplicity == 3


def test_k5_alpha0_collapse():
    groups = merged_view(analytic_spectrum(5, 0.0), tol=1e-12)
    assert groups == [(0.0, 20), (2.5, 5)]


def test_symbolic_display_check():
    assert all(spectrum_symbolic_check_k5().values())


# ---------------------------------------------------------------------------
# isotypic basis
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("k", [4, 5, 6])
def test_basis_counts_and_algebra(k):
    basis = isotypic_basis(k)
    mats = basis.all_matrices()
    assert len(mats) == k * k
    stacked = np.stack([m.flatten() for m in mats])
    assert np.linalg.matrix_rank(stacked) == k * k
    ones = np.ones(k)
    J = np.outer(ones, ones)
    for i, (K, S, D) in enumerate(basis.ksd):
        r = np.zeros(k)
        r[i], r[-1] = 1.0, -1.0
        assert np.abs(K @ J - k * np.outer(r, ones)).max() <= 1e-12
        assert np.abs(S @ J - k * np.outer(r, ones)).max() <= 1e-12
        assert np.abs(D @ J).max() <= 1e-12
        assert np.abs(2 * np.outer(r, ones) - (S + K)).max() <= 1e-12
        assert np.abs(2 * np.outer(ones, r) - (S - K)).max() <= 1e-12
    # featured constructions
    assert np.abs(basis.p_perp - (np.eye(k) - J / k)).max() == 0.0
    assert np.abs(np.diag(basis.p_perp) - (1 - 1 / k)).max() <= 1e-15
    for i, uw in enumerate(basis.u_w):
        r = np.zeros(k)
        r[i], r[-1] = 1.0, -1.0
        assert np.abs(np.diag(uw) - (2 - k) * r).max() <= 1e-12
        assert np.abs(uw + k * basis.ksd[i][2]).max() <= 1e-12   # U_{r_i} = -k D_i
    # P_perp lies in span{I, J}
    coeffs, res, *_ = np.linalg.lstsq(
        np.stack([m.flatten() for m in basis.span_ij], axis=1),
        basis.p_perp.flatten(), rcond=None,
    )
    assert np.abs(np.stack([m.flatten() for m in basis.span_ij], axis=1) @ coeffs
                  - basis.p_perp.flatten()).max() <= 1e-12


@pytest.mark.parametrize("k,alpha", [(4, 1.0), (5, 0.7), (6, 2.5)])
def test_eigen_equations_on_basis(k, alpha):
    basis = isotypic_basis(k)
    co = abc(alpha)
    for mat in basis.wedge:
        assert np.abs(block_operator_apply(mat, alpha) - (co.b - co.c) * mat).max() <= 1e-10
    for mat in basis.s0:
        assert np.abs(block_operator_apply(mat, alpha) - (co.b + co.c) * mat).max() <= 1e-10
    block = w_block_matrix(k, alpha)
    for (K, S, D) in basis.ksd:
        triple = [K, S, D]
        for row in range(3):
            got = block_operator_apply(triple[row], alpha)
            want = sum(block[row, col] * triple[col] for col in range(3))
            assert np.abs(got - want).max() <= 1e-10
    # the 3x3 restriction carries eigenvalues {b-c, W_plus, W_minus}
    evals = np.sort(np.linalg.eigvals(block).real)
    fam = {e.formula_id: e.value for e in analytic_spectrum(k, alpha)}
    want = np.sort([fam["W_bminus_c"], fam["W_plus"], fam["W_minus"]])
    assert np.abs(evals - want).max() <= 1e-10


def test_families_closed_under_diagonal_action(rng):
    k = 5
    basis = isotypic_basis(k)
    for fam_name, mats in basis.families().items():
        span = np.stack([m.flatten() for m in mats], axis=1)
        for _ in range(5):
            sigma = rng.permutation(k)
            p = permutation_matrix(tuple(int(x) for x in sigma))
            for m in mats:
                moved = (p @ m @ p.T).flatten()
                coeffs, *_ = np.linalg.lstsq(span, moved, rcond=None)
                assert np.abs(span @ coeffs - moved).max() <= 1e-10, fam_name


def test_basis_requires_k4():
    with pytest.raises(DomainError):
        isotypic_basis(3)


# ---------------------------------------------------------------------------
# critical set
# ---------------------------------------------------------------------------

def test_critical_values_k5():
    crit = critical_set(5)
    assert crit.values[0] == 0.0
    assert crit.values[1] == pytest.approx(2.2094612037138237, abs=1e-12)
    assert crit.values[2] == pytest.approx(3.158727282587906, abs=1e-12)
    # matches the published four-significant-digit value
    assert crit.values[2] == pytest.approx(3.1587, abs=5e-5)
    assert max(crit.residuals) <= 1e-12
    assert crit.trivial_zero_at_origin


def test_critical_value_k4_middle():
    p = math.pi
    want = (8 * p + 8 * p * p) / (4 + 3 * p * p + 4 * p)
    assert critical_alpha_standard(4) == pytest.approx(want, abs=1e-15)
    assert critical_alpha_standard(4) == pytest.approx(2.254, abs=1e-3)


def test_critical_asymptote_large_k():
    assert abs(critical_alpha_standard(10**6) - 2.0) <= 1e-4
    assert abs(critical_alpha_trivial(10**6) - 2.0) <= 1e-4


def test_ordering_chain_sweep():
    minpos = math.inf
    for k in range(4, 65):
        rep = critical_ordering(k)
        assert rep.ok
        zero, mid, last = rep.chain
        assert zero == 0.0 < mid < last
        assert mid > 2.0  # both nonzero members stay above the asymptote
        minpos = min(minpos, mid)
    assert minpos > 1.0  # engineering regime is uniformly subcritical


@pytest.mark.parametrize("k", range(4, 17))
def test_nonzero_members_zero_exactly_their_family(k):
    crit = critical_set(k)
    _, mid, last = crit.values
    margin = 1e-6
    for fid in ("wedge", "sym0", "W_bminus_c", "W_plus", "span_IJ_plus"):
        fam = eigenvalue_family(k, fid)
        assert abs(fam(mid)) > margin
        assert abs(fam(last)) > margin
    assert abs(eigenvalue_family(k, "W_minus")(mid)) <= 1e-12
    assert abs(eigenvalue_family(k, "W_minus")(last)) > margin
    assert abs(eigenvalue_family(k, "span_IJ_minus")(last)) <= 1e-12
    assert abs(eigenvalue_family(k, "span_IJ_minus")(mid)) > margin


@pytest.mark.parametrize("k", [4, 5, 8, 16, 64])
def test_root_scan_nonnegativity(k):
    scan = root_scan(k, grid=2000)
    for fid, roots in scan.items():
        assert all(r >= 0.0 for r in roots), (fid, roots)
        assert sum(1 for r in roots if r > 0.0) <= 1
    # the minus branches of both quadratic families vanish at the origin too
    assert 0.0 in scan["W_minus"] and 0.0 in scan["span_IJ_minus"]
    crit = critical_set(k)
    assert scan["W_minus"][-1] == pytest.approx(crit.values[1], abs=1e-7)
    assert scan["span_IJ_minus"][-1] == pytest.approx(crit.values[2], abs=1e-7)


# ---------------------------------------------------------------------------
# numerical match
# ---------------------------------------------------------------------------

def test_match_k5_alpha1():
    rep = numerical_spectrum_match(5, 1.0)
    assert rep.ok
    assert rep.max_deviation <= 1e-10
    assert sorted(c.numeric_multiplicity for c in rep.clusters) == [1, 1, 4, 4, 5, 10]


def test_match_k8_alpha25():
    rep = numerical_spectrum_match(8, 2.5)
    assert rep.ok
    assert sorted(c.numeric_multiplicity for c in rep.clusters) == [1, 1, 7, 7, 20, 28]


def test_match_k4_alpha0_degenerate():
    rep = numerical_spectrum_match(4, 0.0)
    assert rep.ok
    assert sum(c.numeric_multiplicity for c in rep.clusters) == 16
    values = sorted(c.numeric_value for c in rep.clusters)
    assert values == pytest.approx([0.0, 2.0], abs=1e-10)


def test_match_dominant_labels_k5():
    rep = numerical_spectrum_match(5, 1.0)
    by_mult = {c.numeric_multiplicity: c.dominant_label for c in rep.clusters}
    assert by_mult[10] == "(3,1,1)"   # wedge dominates the merged b-c cluster
    assert by_mult[5] == "(3,2)"
    assert by_mult[4] == "(4,1)"
    assert by_mult[1] == "(5)"


def test_match_detects_perturbation():
    rep = numerical_spectrum_match(5, 1.0, perturbation=1e-3)
    assert not rep.ok
    assert rep.message


@pytest.mark.parametrize("k", range(4, 9))
def test_operator_matrix_spectral_equivalence(k):
    # eigenvalues of the abstract block operator, built by applying it to a
    # matrix unit basis, coincide with the assembled-Hessian spectrum
    from symbreak.hessian import assemble_dense, hessian_at_minimum, unvec, vec

    for alpha in np.linspace(0.0, 3.5, 11):
        dense = assemble_dense(hessian_at_minimum(k, float(alpha)))
        op = np.zeros((k * k, k * k))
        for col in range(k * k):
            e = np.zeros(k * k)
            e[col] = 1.0
            op[:, col] = vec(block_operator_apply(unvec(e, k), float(alpha)))
        lhs = np.sort(np.linalg.eigvalsh(dense))
        rhs = np.sort(np.linalg.eigvals(op).real)
        assert np.abs(lhs - rhs).max() <= 1e-10


def test_eigenvector_projections_recover_isotypic_multiplicities():
    # dim-weighted projections of the numerical eigenvectors reproduce the
    # {2, 3, 1, 1} decomposition of R^{k^2}
    from symbreak.symrep import hook_dimension

    for k in (4, 5):
        rep = numerical_spectrum_match(k, 1.3)
        assert rep.ok
        dims: dict[str, int] = {}
        for c in rep.clusters:
            dims[c.dominant_label] = dims.get(c.dominant_label, 0) + c.numeric_multiplicity
        # the merged b-c cluster mixes the hook component with one standard
        # copy; split it using the analytic multiplicities
        hook_lab = f"({k - 2},1,1)"
        std_lab = f"({k - 1},1)"
        dims[std_lab] = dims.get(std_lab, 0) + dims[hook_lab] - (k - 1) * (k - 2) // 2
        dims[hook_lab] = (k - 1) * (k - 2) // 2
        mults = {
            hook_lab: dims[hook_lab] // hook_dimension((k - 2, 1, 1)),
            f"({k - 2},2)": dims[f"({k - 2},2)"] // hook_dimension((k - 2, 2)),
            std_lab: dims[std_lab] // hook_dimension((k - 1, 1)),
            f"({k})": dims[f"({k})"] // hook_dimension((k,)),
        }
        assert mults == {hook_lab: 1, f"({k - 2},2)": 1, std_lab: 3, f"({k})": 2}


def test_match_capacity_guard():
    with pytest.raises(DomainError):
        numerical_spectrum_match(65, 1.0)
