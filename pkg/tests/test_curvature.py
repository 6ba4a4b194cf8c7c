import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylhol.curvature import (
    CurvatureComponents,
    berger_check,
    check_structure_constraints,
    component_invariants,
    curvature_space,
    decompose_curvature,
    first_prolongation,
    generated_algebra,
    mixed_part_map,
    prolongation_is_symmetric,
    prolongation_nonzero_criterion,
    reconstruct,
    tensor_from_function,
    weak_berger_check,
    weak_curvature_space,
)
from weylhol.errors import ValidationError
from weylhol.families import FamilySpec, co_rp, conformal_algebra, family, make_family, orthogonal_algebra, subalgebra_menu
from weylhol.lie import CoElement, WittFrame, euclidean_gram, lie_closure, matrix_span, pseudo_euclidean_gram, so_basis, wedge
from weylhol.linalg import RationalMatrix, unit_vector

import oracles


def so(n):
    return orthogonal_algebra(euclidean_gram(n))


def so_sum(blocks, with_id=True, block_bases=None):
    return make_family(FamilySpec("so-sum", 0, blocks=tuple(blocks), with_id=with_id, block_bases=block_bases))


ORACLE_ALGEBRAS = {
    "so2": lambda: so(2),
    "so3": lambda: so(3),
    "so2+so2+id": lambda: so_sum((2, 2)),
    "so1+so2+id": lambda: so_sum((1, 2)),
    "co_rp(1)": lambda: co_rp(1),
    "co_rp(2)": lambda: co_rp(2),
    "Rid+g1(so2) n=2": lambda: family("Rid-plus(g1h)", 2, "so2"),
    "g-theta-2 n=2": lambda: family("g-theta-2", 2, "so2", theta=[1]),
    "so-twist n=2": lambda: family("so-twist", 2, a=1),
}


@pytest.mark.parametrize("name", list(ORACLE_ALGEBRAS))
def test_curvature_space_dimension_matches_dense_solve(name):
    g = ORACLE_ALGEBRAS[name]()
    basis = curvature_space(g)
    assert len(basis) == oracles.curvature_space_dim(g.basis(), g.size)
    assert generated_algebra(basis, g.size).dim == oracles.curvature_values_span(g.basis(), g.size)


def test_curvature_space_classical_values():
    assert len(curvature_space(so(2))) == 1
    assert len(curvature_space(so(3))) == 6
    assert len(curvature_space(so_sum((2, 2)))) == 1 + 1 + 4


def test_every_basis_element_is_a_curvature_tensor():
    g = co_rp(2)
    for R in curvature_space(g):
        assert not R.bianchi_violations()
        assert R.values_in(g)


def test_bianchi_violation_is_detected():
    G = euclidean_gram(3)
    e = [unit_vector(3, i) for i in range(3)]
    ok = tensor_from_function(3, lambda i, j: wedge(e[0], e[1], G) if (i, j) == (0, 1) else G.scale(0))
    assert not ok.bianchi_violations()
    bad = tensor_from_function(3, lambda i, j: wedge(e[1], e[2], G) if (i, j) == (0, 1) else G.scale(0))
    assert bad.bianchi_violations() == [(0, 1, 2)]


def test_generated_algebra_of_empty_basis():
    assert generated_algebra([], 3).dim == 0
    assert generated_algebra(curvature_space(so(3)), 3).dim == 3


@pytest.mark.parametrize("g,expected", [
    (lambda: family("Rid-plus(g1h)", 2, "so2"), True),
    (lambda: family("so-twist", 2, a=1), False),
    (lambda: family("so-twist", 3, a=Fraction(-1, 2)), False),
    (lambda: so_sum((2, 2, 2)), False),
    (lambda: so(3), True),
], ids=["Rid+g1", "twist-n2", "twist-n3", "three-factor", "so3"])
def test_berger_examples(g, expected):
    assert berger_check(g()).is_berger is expected


def test_identity_plus_type_four_curvature_has_no_identity_part():
    g = family("Rid-plus(g4h-m-psi)", 3, subalgebra_menu("so2", 2), m=2, psi=[[1]])
    W = generated_algebra(curvature_space(g), g.size)
    so_part = orthogonal_algebra(WittFrame(3).gram())
    assert all(so_part.contains(RationalMatrix.from_flat(5, w)) for w in W.basis)
    assert not berger_check(g).is_berger


def test_berger_report_fields():
    g = so(2)
    rep = berger_check(g).report(g)
    assert rep["op"] == "berger" and rep["dim"] == 1 and rep["is_berger"] is True


# --- weak curvature tensors --------------------------------------------------------

@pytest.mark.parametrize("h,n", [("so2", 2), ("so3", 3), ("so2+so2", 4), ("so2", 3), ("u1", 4)])
def test_weak_curvature_dimension_matches_dense_solve(h, n):
    alg = matrix_span(subalgebra_menu(h, n), n, h)
    assert len(weak_curvature_space(alg)) == oracles.weak_curvature_dim(alg.basis(), n)


def test_weak_curvature_examples():
    assert len(weak_curvature_space(matrix_span([], 3, "0"))) == 0
    assert len(weak_curvature_space(so(2))) == 2
    for h, n in (("so2", 2), ("so3", 3), ("so2+so2", 4)):
        assert weak_berger_check(matrix_span(subalgebra_menu(h, n), n, h)).holds
    assert weak_berger_check(matrix_span([], 2, "0")).holds


def test_weak_curvature_is_additive_over_blocks():
    a, b = subalgebra_menu("so2", 2), subalgebra_menu("so3", 3)
    from weylhol.lie import embed_block
    mats = [embed_block(M, 5, 0) for M in a] + [embed_block(M, 5, 2) for M in b]
    d = len(weak_curvature_space(matrix_span(mats, 5)))
    assert d == len(weak_curvature_space(so(2))) + len(weak_curvature_space(so(3)))


# --- prolongations -----------------------------------------------------------------

@pytest.mark.parametrize("name,g", [
    ("so(3)", lambda: so(3)),
    ("so(1,2)", lambda: orthogonal_algebra(pseudo_euclidean_gram(1, 2))),
    ("co(1,2)", lambda: conformal_algebra(pseudo_euclidean_gram(1, 2))),
    ("co(2)", lambda: conformal_algebra(euclidean_gram(2))),
    ("co_rp(1)", lambda: co_rp(1)),
    ("co_rp(2)", lambda: co_rp(2)),
    ("g1h(so2) n=2", lambda: family("g1h", 2, "so2")),
])
def test_prolongation_dimension_matches_dense_solve(name, g):
    g = g()
    pr = first_prolongation(g)
    assert pr.dim == oracles.prolongation_dim(g.basis(), g.size)
    assert all(prolongation_is_symmetric(phi) for phi in pr.basis)


def test_prolongation_examples():
    assert first_prolongation(so(3)).dim == 0
    assert first_prolongation(conformal_algebra(pseudo_euclidean_gram(1, 2))).dim == 3
    for n in (1, 2, 3):
        assert first_prolongation(co_rp(n)).dim == 1


def test_identity_plus_full_rotation_algebra_in_the_plane_is_not_zero_prolongation():
    # span{J} is all of so(2), and R id + so(2) = co(2) has a two dimensional prolongation
    g = lie_closure(so_basis(2) + [RationalMatrix.identity(2)], 2)
    assert first_prolongation(g).dim == 2


def _co(n, b=0, a=0, A=None, X=None):
    A = RationalMatrix.zeros(n) if A is None else A
    X = (Fraction(0),) * n if X is None else tuple(Fraction(x) for x in X)
    return CoElement(Fraction(b), Fraction(a), A, X).matrix()


def test_prolongation_criterion_examples():
    c = prolongation_nonzero_criterion(co_rp(2))
    assert (c.prolongation_nonzero, c.contains_generators) == (True, True)
    f = lie_closure([_co(2, A=so_basis(2)[0])], 4)
    c = prolongation_nonzero_criterion(f)
    assert (c.prolongation_nonzero, c.contains_generators) == (False, False)
    f = lie_closure([_co(2, b=1, a=-1)] + [_co(2, X=unit_vector(2, i)) for i in range(2)], 4)
    c = prolongation_nonzero_criterion(f)
    assert (c.prolongation_nonzero, c.contains_generators) == (True, True)


# --- decomposition -----------------------------------------------------------------

def _random_element(basis, rng):
    R = basis[0].scale(0)
    for T in basis:
        R = R + T.scale(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
    return R


def test_zero_tensor_has_zero_components():
    R = curvature_space(co_rp(2))[0].scale(0)
    assert decompose_curvature(R).is_zero()


def test_reconstruct_with_only_mu():
    n = 2
    zero = (Fraction(0),) * n
    Z = RationalMatrix.zeros(n)
    pairs = {(i, j): Fraction(0) for i in range(n) for j in range(i + 1, n)}
    c = CurvatureComponents(Fraction(1), Fraction(0), Z, zero, zero, zero, (Z,) * n, Z,
                            {k: Z for k in pairs}, dict(pairs))
    R = reconstruct(c)
    assert R.pair(0, n + 1) == RationalMatrix.identity(n + 2)
    for i in range(n):
        V = unit_vector(n, i)
        assert R.pair(0, 1 + i) == CoElement(Fraction(0), Fraction(0), Z, tuple(-x for x in V)).matrix()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_decomposition_round_trip_on_random_elements(n):
    basis = curvature_space(co_rp(n))
    rng = random.Random(n)
    for _ in range(10):
        R = _random_element(basis, rng)
        c = decompose_curvature(R)
        assert reconstruct(c).values == R.values
        assert all(component_invariants(c).__dict__.values())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=34, max_size=34))
def test_decomposition_round_trip_property(coeffs):
    basis = _CO3
    R = basis[0].scale(0)
    for c, T in zip(coeffs, basis):
        R = R + T.scale(c)
    assert reconstruct(decompose_curvature(R)).values == R.values


_CO3 = curvature_space(co_rp(3))


def test_decompose_rejects_non_curvature_input():
    n = 2
    g = co_rp(n)
    bad = tensor_from_function(4, lambda i, j: _co(n, b=1) if (i, j) == (0, 1) else RationalMatrix.zeros(4), g)
    with pytest.raises(ValidationError):
        decompose_curvature(bad)


@pytest.mark.parametrize("fam,n,h,kw", [
    ("Rid-plus(g1h)", 3, "so2", {}),
    ("Rid-plus(g2h)", 1, "0", {}),
    ("Rid-plus(g3h-phi)", 3, "so2", {"phi": [1]}),
])
def test_structure_constraints_hold_for_proper_h(fam, n, h, kw):
    g = family(fam, n, h, **kw)
    halg = matrix_span(subalgebra_menu(h, n), n, h)
    basis = curvature_space(g)
    assert basis
    for R in basis:
        rep = check_structure_constraints(halg, R)
        assert rep.all_pass, rep.failures()


def test_small_type_one_has_trivial_components():
    g = family("Rid-plus(g2h)", 1, "0")
    for R in curvature_space(g):
        c = decompose_curvature(R)
        assert c.A0.is_zero() and not any(c.Z0) and not c.S


def test_type_three_in_the_plane_has_weak_curvature_p_part():
    # h = so(2) is all of so(2) here, so only the P constraint is claimed
    n = 2
    halg = matrix_span(subalgebra_menu("so2", n), n, "so2")
    weak = weak_curvature_space(halg)
    rows = [sum((list(T.values[i].flat()) for i in range(n)), []) for T in weak]
    for R in curvature_space(family("Rid-plus(g3h-phi)", n, "so2", phi=[1])):
        target = sum((list(M.flat()) for M in decompose_curvature(R).P), [])
        assert oracles.dense_rank(rows + [target]) == oracles.dense_rank(rows)


def test_mixed_part_of_two_factor_sum():
    g = so_sum((2, 3))
    hits = 0
    for R in curvature_space(g):
        Z = mixed_part_map(R, 2)
        assert Z is not None
        hits += not Z.is_zero()
    assert hits == 2 * 3


def test_mixed_part_detects_non_conformal_shape():
    G = euclidean_gram(3)
    e = [unit_vector(3, i) for i in range(3)]
    R = tensor_from_function(3, lambda i, j: wedge(e[i], e[j], G))
    assert mixed_part_map(R, 1) is None
