import pytest

from orbifold_gw.correlators import (InvariantRecord, RFamily, correction_coeff, default_order, extract_invariant,
                                     multipoint_eps_poly, r_base, r_next, r_subset_form, two_point_coeff,
                                     two_point_kernel)
from orbifold_gw.exact import Q, mat_equal
from orbifold_gw.structure import build_structure, degree_from_dimension
from orbifold_gw.tables import compute_table

STRUCTURES = [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2)]


@pytest.mark.parametrize("mm", STRUCTURES)
def test_base_series_has_no_negative_eps_powers(mm):
    st = build_structure(*mm)
    for a in st.sectors():
        R = r_base(st, a, 10)
        for row in R.entries:
            for x in row:
                assert all(e >= 0 for c in x.coeffs for e, _ in c.items())


def test_multiset_recursion_equals_labelled_subsets():
    st = build_structure(2, 1)
    types = [(1, 1), (2, 0)]
    fam = RFamily(st, types, 9)
    labels = {0: (1, 1), 1: (1, 1), 2: (2, 0)}
    memo = {}
    for b in st.sectors():
        assert mat_equal(fam.get(b, (2, 1)), r_subset_form(st, labels, b, frozenset(labels), 9, memo))
        assert mat_equal(fam.get(b, (1, 1)), r_subset_form(st, labels, b, frozenset({0, 2}), 9, memo))


def test_single_type_step():
    st = build_structure(3, 1)
    fam = RFamily(st, [(2, 1)], 8)
    prior = {(c, l): fam.get(c, (l,)) for c in st.sectors() for l in range(3)}
    for b in st.sectors():
        assert mat_equal(r_next(st, (2, 1), b, 3, prior), fam.get(b, (3,)))


@pytest.mark.parametrize("mm,b,c,fixed,m", [((2, 1), 1, 2, (1, 1), 1), ((3, 1), 1, 3, (2, 0), 2),
                                            ((2, 2), 2, 1, (3, 1), 2)])
def test_exchange_symmetry_of_distinguished_pair(mm, b, c, fixed, m):
    st = build_structure(*mm)
    fam = RFamily(st, [fixed], 12)
    for j1 in range(3):
        for j2 in range(3):
            lhs = two_point_coeff(st, fam, b, c, (m,), -j1 - 1, -j2 - 1)
            rhs = two_point_coeff(st, fam, c, b, (m,), -j2 - 1, -j1 - 1)
            assert lhs == rhs


def test_choice_of_distinguished_pair_is_irrelevant():
    # <τ1(φ1) τ1(φ2) τ2(φ1)>: distinguish any two, recurse on the third
    st = build_structure(2, 1)
    ins = [(1, 1), (2, 1), (1, 2)]
    polys = []
    for k in range(3):
        (b, j1), (c, j2) = [x for t, x in enumerate(ins) if t != k]
        fam = RFamily(st, [ins[k]], 14)
        polys.append(two_point_coeff(st, fam, b, c, (1,), -j1 - 1, -j2 - 1))
    assert polys[0] == polys[1] == polys[2]
    assert polys[0]


def test_correction_never_reaches_nonnegative_levels():
    for mm in STRUCTURES:
        st = build_structure(*mm)
        for b in st.sectors():
            for c in st.sectors():
                for j1 in range(4):
                    for j2 in range(4):
                        assert correction_coeff(st, b, c, -j1 - 1, -j2 - 1).is_zero()


def test_kernel_keys_and_values():
    st = build_structure(2, 1)
    K = two_point_kernel(st, 1, 1, (1, 1), 1, 2, 2)
    assert set(K) == {(j1, j2) for j1 in range(3) for j2 in range(3)}
    # <τ1(φ1)^3>_1 = -1/8 with weight q_{1,1}^3
    q = st.q_norm(1, 1)
    assert K[(1, 1)].coeff(2 * 1 + 1) / q ** 3 == Q(-1, 8)


def test_dimension_constraint_matches_vanishing():
    # away from the constraint the ε-coefficients must vanish identically
    for mm in [(2, 1), (3, 1), (2, 2)]:
        st = build_structure(*mm)
        for ins in ([(1, 1)] * 3, [(1, 1), (2, 0), (st.l - 1, 2)], [(2, 1)] * 4):
            poly = multipoint_eps_poly(st, ins, eps_cap=12)
            m = len(ins) - 2
            for e, v in poly.items():
                assert (e - m) % 2 == 0
                g = (e - m) // 2
                assert degree_from_dimension(st, g, ins) is not None, (mm, ins, g, v)


@pytest.mark.parametrize("mm,ins,g", [((2, 1), [(1, 1)] * 2, 0), ((2, 1), [(1, 2)] * 2, 1),
                                      ((2, 1), [(1, 1)] * 3, 1), ((3, 1), [(2, 1)] * 2, 0),
                                      ((3, 1), [(1, 1), (2, 1)], 0), ((2, 2), [(2, 1)] * 2, 1),
                                      ((2, 2), [(1, 1), (3, 1)], 0), ((2, 1), [(2, 1), (1, 1), (1, 1)], 0)])
def test_divisor_relation(mm, ins, g):
    # every inserted class cups the point class φ_{m1} to zero, so <τ0(φ_{m1}) X>_{g,d} = d <X>_{g,d}
    st = build_structure(*mm)
    base = extract_invariant(st, ins, g)
    plus = extract_invariant(st, ins + [(st.m1, 0)], g)
    assert base.d == plus.d
    if base.d is not None:
        assert plus.value == base.d * base.value


def test_stable_under_larger_budget():
    st = build_structure(3, 1)
    for ins, g in [([(1, 1)] * 4, 0), ([(2, 2)] * 2, 1), ([(1, 0), (2, 1), (3, 2)], 1)]:
        r = extract_invariant(st, ins, g)
        assert extract_invariant(st, ins, g, order=default_order(ins) + 2).value == r.value


def test_extract_values_and_records():
    st = build_structure(2, 1)
    r = extract_invariant(st, [(1, 1)] * 5, 0)
    assert isinstance(r, InvariantRecord)
    assert (r.d, r.value, r.vanishes) == (3, Q(10), False)
    v = extract_invariant(build_structure(3, 1), [(1, 1)] * 3, 0)
    assert v.vanishes and v.value == 0 and v.degree_text() == "vanishes (degree-dimension)"
    assert extract_invariant(build_structure(2, 2), [(2, 1)] * 2, 1).value == Q(1, 2)
    with pytest.raises(ValueError):
        extract_invariant(st, [(3, 1)] * 2, 0)


def test_parity_pattern_for_tau1_phi1_on_2_1():
    st = build_structure(2, 1)
    res = compute_table(st, 1, 1, range(1, 11), range(0, 5))
    nonzero = 0
    for (k, g), v in res.cells.items():
        if (4 - 4 * g + k) % 3:
            assert v == 0, (k, g)
        elif v:
            nonzero += 1
    assert nonzero >= 8
