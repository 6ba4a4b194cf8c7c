"""Acceptance criteria, one test per criterion.

Every comparison is exact.  Each test gathers all mismatches before failing so
that a red criterion reports everything that went wrong, and tests/conftest.py
prints one pass/fail line per criterion at the end of the run.

Run alone with ``python tests/test_acceptance.py``.
"""

import random
from fractions import Fraction

from weylhol.curvature import (
    berger_check,
    check_structure_constraints,
    curvature_space,
    decompose_curvature,
    first_prolongation,
    prolongation_nonzero_criterion,
    reconstruct,
    weak_berger_check,
    weak_curvature_space,
)
from weylhol.families import (
    co_rp,
    conformal_algebra,
    family,
    orthogonal_algebra,
    subalgebra_menu,
)
from weylhol.lie import embed_block, euclidean_gram, lie_closure, matrix_span, pseudo_euclidean_gram, so_basis
from weylhol.linalg import RationalMatrix, subspace_equal
from weylhol.presets import conformal_preset, table_preset
from weylhol.suites import berger_fixtures, random_co_subalgebras
from weylhol.weyl import (
    compare_holonomy,
    conformal_change,
    connection_from,
    curvature,
    is_compatible,
    is_stable,
    torsion_free,
    translations_contained,
    weyl_connection,
)

import oracles

SIGNATURES = ((2, 0), (3, 0), (1, 1), (1, 2), (1, 3))
MENU_SIZE = {"0": 0, "so2": 2, "so3": 3, "so2+so2": 4}


def expect(failures, label, expected, computed):
    if expected != computed:
        failures.append(f"{label}: expected {expected!r}, computed {computed!r}")


def finish(failures):
    assert not failures, f"{len(failures)} mismatches:\n  " + "\n  ".join(failures)


def random_rational(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def block_sum(blocks, with_id=True, bases=None):
    """so(V1) + ... + so(Vr) (or the given block subalgebras), optionally with R id."""
    N = sum(blocks)
    mats, off = [], 0
    for i, k in enumerate(blocks):
        B = so_basis(k) if bases is None else bases[i]
        mats += [embed_block(M, N, off) for M in B]
        off += k
    if with_id:
        mats.append(RationalMatrix.identity(N))
    return matrix_span(mats, N, "block-sum", None, euclidean_gram(N))


def so_dim_bruteforce(k):
    return oracles.curvature_space_dim(so_basis(k), k) if k > 1 else 0


# --- 1 ------------------------------------------------------------------------------

def test_criterion_1_prolongations():
    """prolongation suite"""
    failures = []
    for r, s in SIGNATURES:
        G = pseudo_euclidean_gram(r, s)
        expect(failures, f"dim so({r},{s})^(1)", 0, first_prolongation(orthogonal_algebra(G)).dim)
        expect(failures, f"dim co({r},{s})^(1)", r + s, first_prolongation(conformal_algebra(G)).dim)
    for n in (1, 2, 3):
        expect(failures, f"dim co(1,{n + 1})_Rp^(1)", 1, first_prolongation(co_rp(n)).dim)
    # h + R id for proper subalgebras h of so(n) taken from the menu
    for h, n in (("0", 2), ("0", 3), ("so2", 3), ("so2", 4), ("so3", 4), ("so2+so2", 5),
                 ("u1", 4)):
        hb = subalgebra_menu(h, n)
        assert len(hb) < n * (n - 1) // 2
        g = lie_closure(hb + [RationalMatrix.identity(n)], n, h)
        expect(failures, f"dim ({h} + R id in so({n}))^(1)", 0, first_prolongation(g).dim)
    # non-vanishing contrast: span(J) is all of so(2)
    g = lie_closure(subalgebra_menu("so2", 2) + [RationalMatrix.identity(2)], 2, "co2")
    expect(failures, "dim co(2)^(1)", 2, first_prolongation(g).dim)
    # biconditional on fixed-seed subalgebras of co(1, n+1)_Rp
    seen = set()
    cases = random_co_subalgebras(2024, 12)
    assert len(cases) >= 10
    for name, f in cases:
        c = prolongation_nonzero_criterion(f)
        brute = oracles.prolongation_dim(f.basis(), f.size)
        expect(failures, f"{name}: f^(1) != 0 (brute force)", brute > 0, c.prolongation_nonzero)
        expect(failures, f"{name}: f^(1) != 0 iff generators inside f", c.contains_generators,
               c.prolongation_nonzero)
        seen.add(c.prolongation_nonzero)
    expect(failures, "both sides of the biconditional exercised", {False, True}, seen)
    finish(failures)


# --- 2 ------------------------------------------------------------------------------

def test_criterion_2_curvature_decomposition():
    """curvature-space decomposition"""
    failures = []
    for n1 in (1, 2, 3):
        for n2 in (1, 2, 3):
            want = so_dim_bruteforce(n1) + so_dim_bruteforce(n2) + n1 * n2
            expect(failures, f"dim R(so({n1}) + so({n2}) + R id)", want,
                   len(curvature_space(block_sum((n1, n2)))))
    # the identity contributes nothing once (h1 + R id)^(1) = 0
    for blocks, b1, b2 in (((3, 2), subalgebra_menu("so2", 3), so_basis(2)),
                           ((2, 2), [], so_basis(2)),
                           ((3, 1), subalgebra_menu("so2", 3), []),
                           ((4, 2), subalgebra_menu("so3", 4), [])):
        with_id = curvature_space(block_sum(blocks, True, (b1, b2)))
        without = curvature_space(block_sum(blocks, False, (b1, b2)))
        expect(failures, f"collapse {blocks}: dims", len(without), len(with_id))
        g_no = block_sum(blocks, False, (b1, b2))
        expect(failures, f"collapse {blocks}: values avoid id", True,
               all(R.values_in(g_no) for R in with_id))
        expect(failures, f"collapse {blocks}: not Berger", False,
               berger_check(block_sum(blocks, True, (b1, b2))).is_berger)
    # three factors
    for blocks in ((1, 1, 1), (1, 2, 2), (2, 2, 2), (1, 2, 3)):
        g = block_sum(blocks)
        want = sum(so_dim_bruteforce(k) for k in blocks)
        expect(failures, f"dim R(three factors {blocks} + R id)", want, len(curvature_space(g)))
        expect(failures, f"three factors {blocks}: not Berger", False, berger_check(g).is_berger)
    sub = block_sum((2, 1, 2), True, (so_basis(2), [], []))
    expect(failures, "three factors so(2) + 0 + 0: not Berger", False, berger_check(sub).is_berger)
    finish(failures)


# --- 3 ------------------------------------------------------------------------------

def test_criterion_3_berger_matrix():
    """Berger matrix"""
    failures = []
    fixtures = berger_fixtures()
    positives = [f for f in fixtures if f[2]]
    negatives = [f for f in fixtures if not f[2]]
    assert positives and negatives
    for name, build, expected in fixtures:
        expect(failures, name, expected, berger_check(build()).is_berger)
    # every type of the classification is instantiated over the menu
    names = " ".join(f[0] for f in positives)
    for tag in ("Rid+g1", "Rid+g2", "Rid+g3", "g(alpha=", "g(theta=", ",3,phi=", "cp1", "cp2", "cp3"):
        assert tag in names, tag
    for h in MENU_SIZE:
        assert f"h={h}" in names, h
    for tag in ("Rid+type4", "type4 twist", "so(1,", "b2", "exclude cp2"):
        assert any(tag in f[0] for f in negatives), tag
    finish(failures)


# --- 4 ------------------------------------------------------------------------------

def test_criterion_4_structure_round_trip():
    """structure round-trip"""
    failures = []
    rng = random.Random(4)
    for n in (2, 3):
        basis = curvature_space(co_rp(n))
        for t in range(25):
            R = basis[0].scale(0)
            for T in basis:
                R = R + T.scale(random_rational(rng))
            c = decompose_curvature(R)
            expect(failures, f"n={n} sample {t}: reconstruct", R.values, reconstruct(c).values)
    for fam, n, h, kw in (("Rid-plus(g1h)", 2, "0", {}), ("Rid-plus(g1h)", 3, "so2", {}),
                          ("Rid-plus(g1h)", 4, "so2+so2", {}), ("Rid-plus(g2h)", 1, "0", {}),
                          ("Rid-plus(g2h)", 3, "so2", {}), ("Rid-plus(g2h)", 4, "so3", {}),
                          ("Rid-plus(g3h-phi)", 3, "so2", {"phi": [1]}),
                          ("Rid-plus(g3h-phi)", 4, "so2+so2", {"phi": [1, -1]})):
        g = family(fam, n, h, **kw)
        hb = subalgebra_menu(h, n)
        assert len(hb) < n * (n - 1) // 2 or n == 1
        halg = matrix_span(hb, n, h)
        for k, R in enumerate(curvature_space(g)):
            rep = check_structure_constraints(halg, R)
            expect(failures, f"{fam} n={n} h={h} element {k}", [], rep.failures())
    finish(failures)


# --- 5 ------------------------------------------------------------------------------

def _diag(*d):
    return RationalMatrix.from_rows([[Fraction(d[i]) if i == j else Fraction(0) for j in range(len(d))]
                                     for i in range(len(d))])


def test_criterion_5_realizations():
    """realization suite"""
    failures = []
    m = 3
    presets = []
    for row in (1, 2, 3):
        for n, n0, h in ((1, 1, "0"), (2, 0, "so2"), (3, 1, "so2")):
            hb = subalgebra_menu(h, n, n0)
            if row == 3 and not hb:
                # the third type needs a non-zero functional on h, so h = 0 has no instance
                continue
            presets.append(table_preset(row, n, n0, hb, phi=[1] if row == 3 else (), max_order=m))
    for n, n0 in ((2, 0), (3, 1)):
        hb = subalgebra_menu("so2", n, n0)
        for alpha in (0, 1):
            presets.append(table_preset(4, n, n0, hb, theta=[1], alpha=alpha, max_order=m))
        presets.append(table_preset(5, n, n0, hb, theta=[1], max_order=m))
        presets.append(table_preset(6, n, n0, hb, theta=[1], phi=[1], max_order=m))
    rows_seen = {p.params["row"] for p in presets}
    assert rows_seen == {1, 2, 3, 4, 5, 6}
    cps = [conformal_preset("cp2", 1, 0, max_order=m), conformal_preset("cp2", 2, 0, max_order=m),
           conformal_preset("cp2", 2, 1, max_order=m), conformal_preset("cp3", 2, 1, max_order=m),
           conformal_preset("cp3", 3, 1, max_order=m)]
    for p in presets + cps:
        label = p.tag + " " + str({k: v for k, v in p.params.items() if k in ("n", "n0", "k", "alpha")})
        stable, res, _ = is_stable(p.build, m)
        cmp = compare_holonomy(res.algebra, p.target)
        expect(failures, f"{label}: stable", True, stable)
        expect(failures, f"{label}: inside target", True, cmp.contained)
        expect(failures, f"{label}: contains target", True, cmp.contains)
        expect(failures, f"{label}: dim", p.target.dim, res.dim)
        if p.tag.startswith("row"):
            expect(failures, f"{label}: R^n inside", True, translations_contained(res.algebra))
    # displayed curvature values at the origin
    for tag, n, k in (("cp2", 1, 0), ("cp2", 2, 0), ("cp2", 2, 1), ("cp3", 2, 1), ("cp3", 3, 1), ("cp1", 2, 0)):
        W = conformal_preset(tag, n, k).structure(4)
        R = curvature(weyl_connection(W))
        expect(failures, f"{tag} n={n} k={k}: R(d_k+1, d_u)", _diag(0, *([1] * n), 2), R.at_origin(k + 1, n + 1))
        if tag != "cp2":
            expect(failures, f"{tag} n={n} k={k}: R(d_v, d_u)", _diag(1, *([0] * n), -1), R.at_origin(0, n + 1))
    finish(failures)


# --- 6 ------------------------------------------------------------------------------

def test_criterion_6_connection_properties():
    """connection correctness properties"""
    failures = []
    K = 6
    for seed in range(10):
        n = 1 + seed % 3
        W = oracles.random_walker(1000 + seed, n, K)
        conn = weyl_connection(W)
        expect(failures, f"seed {seed} n={n}: torsion free", True, torsion_free(conn))
        expect(failures, f"seed {seed} n={n}: nabla g = 2 omega (x) g", True, is_compatible(conn, 2))
        rng = random.Random(seed)
        phi = oracles.random_jet(rng, W.names, K, 2, 3)
        g2, w2 = conformal_change(W.metric(), W.omega(), phi)
        same = weyl_connection(W).truncated(K - 1) == connection_from(g2, w2).truncated(K - 1)
        expect(failures, f"seed {seed} n={n}: invariant under (e^(2 phi) g, omega - d phi)", True, same)
    finish(failures)


# --- 7 ------------------------------------------------------------------------------

def test_criterion_7_weak_berger():
    """weak Berger"""
    failures = []
    for h in ("so2", "so3", "so2+so2"):
        n = MENU_SIZE[h]
        alg = matrix_span(subalgebra_menu(h, n), n, h)
        v = weak_berger_check(alg)
        expect(failures, f"L(P({h})) = {h}", True, v.holds)
        expect(failures, f"L(P({h})) equal as subspaces", True, subspace_equal(v.witness, alg.carrier))
        expect(failures, f"dim P({h}) vs brute force", oracles.weak_curvature_dim(alg.basis(), n), v.space_dim)
    expect(failures, "dim P(so(2))", 2, len(weak_curvature_space(orthogonal_algebra(euclidean_gram(2)))))
    for a, b in (("so2", "so2"), ("so2", "so3"), ("so3", "so2"), ("so3", "so3")):
        na, nb = MENU_SIZE[a], MENU_SIZE[b]
        N = na + nb
        ha = matrix_span(subalgebra_menu(a, na), na)
        hb = matrix_span(subalgebra_menu(b, nb), nb)
        mats = [embed_block(M, N, 0) for M in ha.basis()] + [embed_block(M, N, na) for M in hb.basis()]
        d = len(weak_curvature_space(matrix_span(mats, N)))
        expect(failures, f"dim P({a} + {b})", len(weak_curvature_space(ha)) + len(weak_curvature_space(hb)), d)
    finish(failures)


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
