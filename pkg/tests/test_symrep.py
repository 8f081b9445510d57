import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symbreak.burnside import cycle_type
from symbreak.errors import CapacityError, ConsistencyError, DomainError
from symbreak.golden import compare_character_table
from symbreak.symrep import (
    character_table,
    class_size,
    closed_form_character,
    closed_form_partition,
    conjugate_partition,
    cycle_type_sign,
    decompose_class_function,
    decompose_diag_square,
    diag_square_character,
    fixed_space_dim,
    frobenius_character,
    hook_dimension,
    inner_product,
    irreducible_character,
    partitions_of,
    permutation_matrix,
    sorted_cycle_types,
    sym_wedge_characters,
    validate_partition,
)


# ---------------------------------------------------------------------------
# partitions and classes
# ---------------------------------------------------------------------------

def test_partition_validation():
    assert validate_partition([3, 1, 1]) == (3, 1, 1)
    with pytest.raises(DomainError):
        validate_partition([1, 3])
    with pytest.raises(DomainError):
        validate_partition([2, 0])
    with pytest.raises(DomainError):
        validate_partition([])


@settings(max_examples=30, deadline=None, derandomize=True)
@given(n=st.integers(1, 10))
def test_partition_enumeration_and_class_sizes(n):
    parts = partitions_of(n)
    assert parts[0] == (n,)
    assert parts[-1] == tuple([1] * n)
    assert len(set(parts)) == len(parts)
    assert sum(class_size(c) for c in parts) == math.factorial(n)


def test_conjugate_partition_involution():
    for n in range(1, 9):
        for eta in partitions_of(n):
            assert conjugate_partition(conjugate_partition(eta)) == eta


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

def test_trivial_character_is_one():
    for k in range(2, 9):
        for ct in sorted_cycle_types(k):
            assert frobenius_character((k,), ct) == 1


def test_standard_character_counts_fixed_points():
    for k in range(3, 9):
        for ct in sorted_cycle_types(k):
            i1 = sum(1 for c in ct if c == 1)
            assert frobenius_character((k - 1, 1), ct) == i1 - 1


def test_two_row_character_on_five_cycle():
    # (3,2) on the 5-cycle class: (i1-1)(i1-2)/2 + i2 - 1 = 1 - 0 - 1 = 0
    assert frobenius_character((3, 2), (5,)) == 0
    assert closed_form_character("two-row", (5,)) == 0


def test_identity_value_equals_hook_dimension():
    for n in range(2, 9):
        ident = tuple([1] * n)
        for eta in partitions_of(n):
            assert frobenius_character(eta, ident) == hook_dimension(eta)


@pytest.mark.parametrize("k", range(4, 9))
def test_closed_forms_match_frobenius(k):
    for shape in ("top", "standard", "two-row", "hook"):
        eta = closed_form_partition(shape, k)
        for ct in sorted_cycle_types(k):
            assert closed_form_character(shape, ct) == frobenius_character(eta, ct)


def test_closed_form_dimensions():
    for k in range(4, 10):
        ident = tuple([1] * k)
        assert closed_form_character("two-row", ident) == k * (k - 3) // 2
        assert closed_form_character("hook", ident) == (k - 1) * (k - 2) // 2


def test_hook_dimensions_examples():
    assert hook_dimension((5,)) == 1
    assert hook_dimension((4, 1)) == 4
    assert hook_dimension((3, 1, 1)) == 6
    assert hook_dimension((3, 2)) == 5


def test_size_mismatch_rejected():
    with pytest.raises(DomainError):
        frobenius_character((3, 1), (5,))


def test_capacity_guard():
    with pytest.raises(CapacityError):
        frobenius_character(tuple([1] * 13), tuple([1] * 13))


def test_conjugate_twist_path_on_long_partitions():
    # partitions with >= 9 parts route through the conjugate; check against
    # the sign-twist identities chi_{1^n} = sgn and chi_{(2,1^{n-2})} =
    # sgn * (i1 - 1)
    n = 10
    for ct in sorted_cycle_types(n):
        sgn = cycle_type_sign(ct)
        assert frobenius_character(tuple([1] * n), ct) == sgn
        i1 = sum(1 for c in ct if c == 1)
        assert frobenius_character((2,) + tuple([1] * (n - 2)), ct) == sgn * (i1 - 1)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def test_character_table_s5_matches_reference():
    assert compare_character_table()["ok"]


def test_character_table_s5_under_one_second():
    import time

    character_table.cache_clear()
    start = time.perf_counter()
    character_table(5)
    assert time.perf_counter() - start < 1.0


@pytest.mark.parametrize("k", range(2, 9))
def test_orthogonality_and_centralizer_columns(k):
    table = character_table(k)
    table.check_orthogonality()
    for ci, ct in enumerate(table.cycle_types):
        sq = sum(row[ci] ** 2 for row in table.values)
        assert sq == math.factorial(k) // table.class_sizes[ci]


def test_character_table_k4_degrees():
    assert sorted(character_table(4).degrees()) == [1, 1, 2, 3, 3]


def test_character_table_capacity():
    with pytest.raises(CapacityError):
        character_table(9)


# ---------------------------------------------------------------------------
# Sym^2 / wedge^2 and the diagonal-square decomposition
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("k", range(4, 9))
def test_sym_wedge_decompositions(k):
    sym, wedge = sym_wedge_characters(k)
    assert decompose_class_function(sym, k) == {
        (k,): 1, (k - 1, 1): 1, (k - 2, 2): 1}
    assert decompose_class_function(wedge, k) == {(k - 2, 1, 1): 1}
    ident = tuple([1] * k)
    assert sym[ident] + wedge[ident] == (k - 1) ** 2


@pytest.mark.parametrize("k", range(4, 11))
def test_diag_square_law(k):
    mults = decompose_diag_square(k)
    assert mults == {(k,): 2, (k - 1, 1): 3, (k - 2, 2): 1, (k - 2, 1, 1): 1}
    assert sum(m * hook_dimension(eta) for eta, m in mults.items()) == k * k


def test_diag_square_k5_component_dimensions():
    mults = decompose_diag_square(5)
    dims = {eta: m * hook_dimension(eta) for eta, m in mults.items()}
    assert dims == {(5,): 2, (4, 1): 12, (3, 2): 5, (3, 1, 1): 6}
    assert sum(dims.values()) == 25


@pytest.mark.parametrize("k", [4, 5])
def test_permutation_character_via_explicit_matrices(k):
    # chi_V(g) = i1(g)^2 for the diagonal action U -> P U P^T on R^{k^2}
    chi = diag_square_character(k)
    for ct in sorted_cycle_types(k):
        perm = _representative(ct)
        p = permutation_matrix(perm)
        action = np.kron(p, p)          # matrix of U -> P U P^T in vec coords
        i1 = sum(1 for c in ct if c == 1)
        assert int(round(np.trace(action))) == chi[ct] == i1 * i1


def _representative(ct):
    images = []
    start = 0
    for length in ct:
        images.extend(list(range(start + 1, start + length)) + [start])
        start += length
    return tuple(images)


# ---------------------------------------------------------------------------
# fixed spaces
# ---------------------------------------------------------------------------

def test_fixed_space_trivial_character(lattice5):
    chi = irreducible_character((5,))
    for cls in lattice5.classes:
        assert fixed_space_dim(chi, cls.representative) == 1


def test_fixed_space_standard_at_full_group(lattice5):
    chi = irreducible_character((4, 1))
    full = lattice5.classes[-1]
    assert fixed_space_dim(chi, full.representative) == 0


def test_fixed_space_standard_at_point_stabilizer(lattice5):
    chi = irreducible_character((4, 1))
    s4 = lattice5.class_by_label("S4")
    assert fixed_space_dim(chi, s4.representative) == 1
    # burn-in against the explicit matrix action on the sum-zero subspace
    elems = list(s4.representative)
    proj = sum(permutation_matrix(p) for p in elems) / len(elems)
    ones = np.ones((5, 5)) / 5.0
    rank_on_vperp = int(round(np.trace(proj - proj @ ones)))
    assert rank_on_vperp == 1


def test_fixed_space_rejects_non_integer_average(lattice5):
    chi = dict(irreducible_character((4, 1)))
    chi[(2, 1, 1, 1)] += 1   # corrupt one class value
    d1 = lattice5.class_by_label("D1")
    with pytest.raises(ConsistencyError):
        fixed_space_dim(chi, d1.representative)


def test_inner_product_orthonormality():
    a = irreducible_character((3, 2))
    b = irreducible_character((4, 1))
    assert inner_product(a, a, 5) == 1
    assert inner_product(a, b, 5) == 0


def test_cycle_type_helper_consistency(lattice5):
    # permutation-level cycle types agree with the partition bookkeeping
    for cls in lattice5.classes:
        for p in cls.representative:
            assert sum(cycle_type(p)) == 5
