"""Verification suites: lists of exact checks with expected and computed values."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

from .curvature import (
    berger_check,
    check_structure_constraints,
    component_invariants,
    curvature_space,
    decompose_curvature,
    first_prolongation,
    prolongation_nonzero_criterion,
    reconstruct,
    weak_berger_check,
    weak_curvature_space,
)
from .families import (
    FamilySpec,
    co_rp,
    conformal_algebra,
    family,
    make_family,
    orthogonal_algebra,
    subalgebra_menu,
)
from .lie import (
    CoElement,
    LieSubalgebra,
    embed_block,
    euclidean_gram,
    lie_closure,
    matrix_span,
    pseudo_euclidean_gram,
    so_basis,
)
from .linalg import RationalMatrix, unit_vector
from .presets import RealizationPreset, conformal_preset, table_preset
from .weyl import (
    compare_holonomy,
    holonomy_generate,
    is_stable,
    translations_contained,
)

SUITES = ("prolongations", "curvature-decomp", "berger-matrix", "weak-berger", "realizations")


@dataclass
class Check:
    id: str
    anchor: str
    expected: object
    computed: object

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def as_dict(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "expected": self.expected,
                "computed": self.computed, "pass": self.passed}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    wall_time: float | None = None
    meta: dict | None = None

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, checks: Iterable[Check]) -> None:
        self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        ok = sum(c.passed for c in self.checks)
        return {"total": len(self.checks), "passed": ok, "failed": len(self.checks) - ok}

    def as_dict(self) -> dict:
        return {"checks": [c.as_dict() for c in sorted(self.checks, key=lambda c: c.id)],
                "summary": self.summary(), "pass": self.passed}

    def to_json(self) -> str:
        # wall time is deliberately left out so that reports are byte-identical across runs
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, default=str) + "\n"

    def to_text(self) -> str:
        rows = sorted(self.checks, key=lambda c: c.id)
        w_id = max([len("check")] + [len(c.id) for c in rows])
        w_e = max([len("expected")] + [len(_short(c.expected)) for c in rows])
        w_c = max([len("computed")] + [len(_short(c.computed)) for c in rows])
        line = f"{'check':<{w_id}}  {'expected':<{w_e}}  {'computed':<{w_c}}  result"
        out = [line, "-" * len(line)]
        for c in rows:
            out.append(f"{c.id:<{w_id}}  {_short(c.expected):<{w_e}}  {_short(c.computed):<{w_c}}  "
                       f"{'pass' if c.passed else 'FAIL'}")
        s = self.summary()
        tail = f"{s['passed']}/{s['total']} checks passed"
        if self.wall_time is not None:
            tail += f" in {self.wall_time:.2f}s"
        out.append(tail)
        return "\n".join(out) + "\n"


def _short(x) -> str:
    s = json.dumps(x, default=str, sort_keys=True) if not isinstance(x, str) else x
    return s if len(s) <= 60 else s[:57] + "..."


# --- prolongations ---------------------------------------------------------------

def proper_with_id_instances() -> list[tuple[str, LieSubalgebra]]:
    """Proper subalgebras h of so(n) for which (h + R id)^(1) should vanish."""
    def with_id(mats, n, tag):
        return lie_closure(list(mats) + [RationalMatrix.identity(n)], n, tag)

    J3 = subalgebra_menu("so2", 3)
    out = [
        ("0+id in so(2)", with_id([], 2, "0")),
        ("0+id in so(3)", with_id([], 3, "0")),
        ("span(J)+id in so(3)", with_id(J3, 3, "so2")),
        ("u(1)+id in so(4)", with_id(subalgebra_menu("u1", 4), 4, "u1")),
        ("so(2)+so(2)+id in so(4)", with_id(subalgebra_menu("so2+so2", 4), 4, "so2+so2")),
        ("so(3)+id in so(4)", with_id(subalgebra_menu("so3", 4), 4, "so3")),
    ]
    # a subalgebra of so(1,3) preserving the non-degenerate plane spanned by the first two vectors
    G = pseudo_euclidean_gram(1, 3)
    b = [unit_vector(4, i) for i in range(4)]
    from .lie import wedge
    mats = [wedge(b[0], b[1], G), wedge(b[2], b[3], G), RationalMatrix.identity(4)]
    out.append(("so(1,1)+so(2)+id in so(1,3)", lie_closure(mats, 4, "so(1,1)+so(2)")))
    return out


def random_co_subalgebras(seed: int, count: int = 12) -> list[tuple[str, LieSubalgebra]]:
    """Fixed-seed subalgebras of co(1, n+1)_Rp generated by a few random elements."""
    rng = random.Random(seed)
    out = []
    for t in range(count):
        n = rng.choice((1, 2, 3))
        Z = RationalMatrix.zeros(n)
        zero = (Fraction(0),) * n

        def r():
            return Fraction(rng.randint(-7, 7), rng.randint(1, 7))

        gens = []
        if t % 3 == 0:
            gens.append(CoElement(Fraction(1), Fraction(-1), Z, zero).matrix())
            gens += [CoElement(Fraction(0), Fraction(0), Z, unit_vector(n, i)).matrix() for i in range(n)]
        for _ in range(rng.randint(1, 3)):
            A = Z
            for B in so_basis(n):
                A = A + B.scale(r() if rng.random() < 0.5 else 0)
            X = tuple(r() if rng.random() < 0.5 else Fraction(0) for _ in range(n))
            b = r() if rng.random() < 0.5 else Fraction(0)
            a = r() if rng.random() < 0.5 else Fraction(0)
            gens.append(CoElement(b, a, A, X).matrix())
        g = lie_closure(gens, n + 2, f"random-{t}")
        out.append((f"random-{seed}-{t} (n={n})", g))
    return out


def prolongation_checks(seed: int = 0) -> list[Check]:
    checks = []
    for r, s in ((2, 0), (3, 0), (1, 1), (1, 2), (1, 3)):
        G = pseudo_euclidean_gram(r, s)
        checks.append(Check(f"prolongation/so({r},{s})", "prolongation of so(r,s) vanishes",
                            0, first_prolongation(orthogonal_algebra(G)).dim))
        checks.append(Check(f"prolongation/co({r},{s})", "prolongation of co(r,s) is R^{r,s}",
                            r + s, first_prolongation(conformal_algebra(G)).dim))
    for n in (1, 2, 3):
        checks.append(Check(f"prolongation/co(1,{n + 1})_Rp", "prolongation of co(1,n+1)_Rp is a line",
                            1, first_prolongation(co_rp(n)).dim))
    for name, h in proper_with_id_instances():
        checks.append(Check(f"prolongation/proper-h/{name}", "proper h: (h + R id)^(1) = 0",
                            0, first_prolongation(h).dim))
    for name, f in random_co_subalgebras(seed):
        c = prolongation_nonzero_criterion(f)
        checks.append(Check(f"prolongation/criterion/{name}",
                            "f^(1) != 0 iff R(p^q + id) + R^n inside f",
                            c.contains_generators, c.prolongation_nonzero))
    return checks


# --- curvature decomposition -------------------------------------------------------

def so_sum(blocks, with_id=True, block_bases=None) -> LieSubalgebra:
    return make_family(FamilySpec(family="so-sum", n=0, blocks=tuple(blocks), with_id=with_id,
                                  block_bases=block_bases))


def random_combination(basis, rng: random.Random):
    R = basis[0].scale(0)
    for T in basis:
        R = R + T.scale(Fraction(rng.randint(-7, 7), rng.randint(1, 7)))
    return R


def curvature_checks(seed: int = 0, samples: int = 25) -> list[Check]:
    checks = []
    so_dims = {k: len(curvature_space(orthogonal_algebra(euclidean_gram(k)))) if k > 1 else 0
               for k in (1, 2, 3)}
    for n1 in (1, 2, 3):
        for n2 in (1, 2, 3):
            d = len(curvature_space(so_sum((n1, n2))))
            checks.append(Check(f"curvature/sum/so({n1})+so({n2})+id",
                                "R(so(V1)+so(V2)+R id) = R(so(V1)) + R(so(V2)) + V1 (x) V2",
                                so_dims[n1] + so_dims[n2] + n1 * n2, d))
    # collapse: h1 proper in so(V1) kills the identity contribution
    for name, (n1, b1), (n2, b2) in (
        ("span(J)<so(3), so(2)", (3, subalgebra_menu("so2", 3)), (2, so_basis(2))),
        ("0<so(2), so(2)", (2, []), (2, so_basis(2))),
        ("span(J)<so(3), 0<so(1)", (3, subalgebra_menu("so2", 3)), (1, [])),
    ):
        a = len(curvature_space(so_sum((n1, n2), True, (tuple(b1), tuple(b2)))))
        b = len(curvature_space(so_sum((n1, n2), False, (tuple(b1), tuple(b2)))))
        checks.append(Check(f"curvature/collapse/{name}", "R(h1 + h2 + R id) = R(h1 + h2)", b, a))
    for blocks in ((2, 2, 2), (1, 2, 2), (2, 2, 3)):
        checks.append(Check(f"curvature/three-factor/{blocks}", "three-factor sum with id is not Berger",
                            False, berger_check(so_sum(blocks)).is_berger))
    rng = random.Random(seed)
    for n in (2, 3):
        basis = curvature_space(co_rp(n))
        ok = 0
        for _ in range(samples):
            R = random_combination(basis, rng)
            c = decompose_curvature(R)
            inv = component_invariants(c)
            if reconstruct(c).values == R.values and all(inv.__dict__.values()):
                ok += 1
        checks.append(Check(f"curvature/round-trip/n={n}", "decompose then reconstruct is exact",
                            samples, ok))
    for name, g, h in structure_fixtures():
        basis = curvature_space(g)
        ok = sum(check_structure_constraints(h, R).all_pass for R in basis)
        checks.append(Check(f"curvature/constraints/{name}", "Z0 = tau = A0 = 0, S in R(h), P in P(h)",
                            len(basis), ok))
    return checks


def structure_fixtures() -> list[tuple[str, LieSubalgebra, LieSubalgebra]]:
    """(name, R id + g^{i,h}, h) with h proper in so(n)."""
    out = []
    for fam, n, h, kw in (
        ("Rid-plus(g1h)", 3, "so2", {}),
        ("Rid-plus(g2h)", 3, "so2", {}),
        ("Rid-plus(g1h)", 2, "0", {}),
        ("Rid-plus(g2h)", 1, "0", {}),
        ("Rid-plus(g3h-phi)", 3, "so2", {"phi": [1]}),
        ("Rid-plus(g1h)", 4, "so2+so2", {}),
        ("Rid-plus(g3h-phi)", 4, "so2+so2", {"phi": [1, -1]}),
    ):
        g = family(fam, n, h, **kw)
        hb = subalgebra_menu(h, n)
        out.append((f"{fam} n={n} h={h}", g, matrix_span(hb, n, h)))
    return out


# --- Berger matrix -------------------------------------------------------------------

MENU = {"0": 0, "so2": 2, "so3": 3, "so2+so2": 4}
VALUES = (Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2))


def _abelian_values(h: str, k: int) -> list | None:
    """A functional on the menu algebra vanishing on [h, h] (None when only zero works)."""
    if h == "so2":
        return [VALUES[k % 4]]
    if h == "so2+so2":
        return [VALUES[k % 4], VALUES[(k + 1) % 4]]
    return None


def berger_fixtures() -> list[tuple[str, Callable[[], LieSubalgebra], bool]]:
    out: list = []

    def add(name, fn, expected):
        out.append((name, fn, expected))

    for h, s in MENU.items():
        for n in sorted({max(s, 1), s + 1}):
            if n > 6:
                continue
            off = n - s
            hb = lambda h=h, n=n, off=off: subalgebra_menu(h, n, off)  # noqa: E731
            base = f"n={n} h={h}"
            add(f"Rid+g1 {base}", lambda hb=hb, n=n: make_family(FamilySpec("Rid-plus(g1h)", n, tuple(hb()))), True)
            add(f"Rid+g2 {base}", lambda hb=hb, n=n: make_family(FamilySpec("Rid-plus(g2h)", n, tuple(hb()))), True)
            for k in range(4):
                ab = _abelian_values(h, k)
                zero = [Fraction(0)] * len(hb())
                th = ab if ab is not None else zero
                alpha = VALUES[(k + 1) % 4]
                if alpha or any(th):
                    add(f"g(alpha={alpha},theta={th},1) {base}",
                        lambda hb=hb, n=n, th=th, alpha=alpha: make_family(
                            FamilySpec("g-alpha-theta-1", n, tuple(hb()), theta=tuple(th), alpha=alpha)), True)
                if ab is None:
                    continue
                phi = [VALUES[(k + 2) % 4] or Fraction(1)] + [Fraction(1)] * (len(ab) - 1)
                if any(phi):
                    add(f"Rid+g3(phi={phi}) {base}",
                        lambda hb=hb, n=n, phi=phi: make_family(
                            FamilySpec("Rid-plus(g3h-phi)", n, tuple(hb()), phi=tuple(phi))), True)
                if any(ab):
                    add(f"g(theta={ab},2) {base}",
                        lambda hb=hb, n=n, ab=ab: make_family(
                            FamilySpec("g-theta-2", n, tuple(hb()), theta=tuple(ab))), True)
                    add(f"g(theta={ab},3,phi={phi}) {base}",
                        lambda hb=hb, n=n, ab=ab, phi=phi: make_family(
                            FamilySpec("g-theta-3-phi", n, tuple(hb()), theta=tuple(ab), phi=tuple(phi))), True)
    # algebras preserving a non-degenerate subspace
    for n in (1, 2, 3):
        for k in range(-1, n):
            add(f"cp1 n={n} k={k}", lambda n=n, k=k: make_family(FamilySpec("conformal-product-1", n, k=k)), True)
        for k in range(0, n):
            add(f"cp2 n={n} k={k}", lambda n=n, k=k: make_family(FamilySpec("conformal-product-2", n, k=k)), True)
        for k in range(1, n):
            add(f"cp3 n={n} k={k}", lambda n=n, k=k: make_family(FamilySpec("conformal-product-3", n, k=k)), True)
    add("cp2 n=4 k=2 kappa=so(2)", lambda: make_family(
        FamilySpec("conformal-product-2", 4, tuple(so_basis(2)), k=2)), True)
    add("cp3 n=4 k=2 kappa=so(2)", lambda: make_family(
        FamilySpec("conformal-product-3", 4, tuple(so_basis(2)), k=2)), True)
    # exclusions
    J = subalgebra_menu("so2", 2)
    add("exclude Rid+type4 n=3 m=2 h=so2", lambda: family("Rid-plus(g4h-m-psi)", 3, J, m=2, psi=[[1]]), False)
    add("exclude Rid+type4 n=5 m=4 h=so2+so2", lambda: family(
        "Rid-plus(g4h-m-psi)", 5, subalgebra_menu("so2+so2", 4), m=4, psi=[[1], [0]]), False)
    add("exclude Rid+type4 n=6 m=4 h=so2+so2", lambda: family(
        "Rid-plus(g4h-m-psi)", 6, subalgebra_menu("so2+so2", 4), m=4, psi=[[1, 0], [0, 1]]), False)
    for t in (Fraction(1), Fraction(-1), Fraction(1, 2)):
        add(f"exclude type4 twist n=3 m=2 h=so2 theta={t}",
            lambda t=t: family("g4-twist", 3, J, m=2, psi=[[1]], theta=[t]), False)
    for n in (2, 3):
        for a in (Fraction(1), Fraction(-1), Fraction(1, 2)):
            add(f"exclude so(1,{n - 1})+R(e^e+{a} id) n={n}", lambda n=n, a=a: family("so-twist", n, a=a), False)
    for t2 in (Fraction(1), Fraction(-1), Fraction(1, 2)):
        for t1 in (Fraction(0), Fraction(1)):
            add(f"exclude b2 n=3 n0=1 h=so2 theta1={t1} theta2={t2}",
                lambda t1=t1, t2=t2: family("b2-twist", 3, "so2", h_offset=1, n0=1, theta=[t1], theta2=[t2]),
                False)
        add(f"exclude b2 n=2 n0=1 h=0 theta2={t2}",
            lambda t2=t2: family("b2-twist", 2, "0", n0=1, theta2=[t2]), False)
    for t in (Fraction(1), Fraction(-1), Fraction(1, 2)):
        add(f"exclude cp2 n=2 k=0 theta={t}", lambda t=t: make_family(
            FamilySpec("conformal-product-2", 2, k=0, theta=(t,))), False)
        add(f"exclude cp2 n=3 k=1 theta={t}", lambda t=t: make_family(
            FamilySpec("conformal-product-2", 3, k=1, theta=(t,))), False)
    return out


def berger_checks() -> list[Check]:
    checks = []
    for name, fn, expected in berger_fixtures():
        checks.append(Check(f"berger/{name}", "Berger verdict of the classification",
                            expected, berger_check(fn()).is_berger))
    return checks


# --- weak Berger -----------------------------------------------------------------

def weak_berger_checks() -> list[Check]:
    checks = []
    for h in ("so2", "so3", "so2+so2"):
        n = MENU[h]
        alg = matrix_span(subalgebra_menu(h, n), n, h)
        checks.append(Check(f"weak-berger/{h}", "images of P(h) span h", True, weak_berger_check(alg).holds))
    checks.append(Check("weak-berger/dim P(so2)", "dim P(so(2)) = 2", 2,
                        len(weak_curvature_space(orthogonal_algebra(euclidean_gram(2))))))
    for (a, b) in (("so2", "so2"), ("so2", "so3"), ("so3", "so2")):
        na, nb = MENU[a], MENU[b]
        N = na + nb
        mats = [embed_block(M, N, 0) for M in subalgebra_menu(a, na)]
        mats += [embed_block(M, N, na) for M in subalgebra_menu(b, nb)]
        da = len(weak_curvature_space(matrix_span(subalgebra_menu(a, na), na)))
        db = len(weak_curvature_space(matrix_span(subalgebra_menu(b, nb), nb)))
        d = len(weak_curvature_space(matrix_span(mats, N)))
        checks.append(Check(f"weak-berger/additivity/{a}+{b}", "P(h1 + h2) = P(h1) + P(h2)", da + db, d))
    return checks


# --- realizations -------------------------------------------------------------------

def realization_presets(max_order: int = 3) -> list[RealizationPreset]:
    out = []
    for row in (1, 2, 3):
        for n, n0, h in ((1, 1, "0"), (2, 0, "so2"), (3, 1, "so2")):
            hb = subalgebra_menu(h, n, n0)
            if row == 3 and not hb:
                continue
            out.append(table_preset(row, n, n0, hb, phi=[1] if row == 3 else (), max_order=max_order))
    for n, n0 in ((2, 0), (3, 1)):
        hb = subalgebra_menu("so2", n, n0)
        for alpha in (0, 1):
            out.append(table_preset(4, n, n0, hb, theta=[1], alpha=alpha, max_order=max_order))
        out.append(table_preset(5, n, n0, hb, theta=[1], max_order=max_order))
        out.append(table_preset(6, n, n0, hb, theta=[1], phi=[1], max_order=max_order))
    for tag, n, k in (("cp2", 1, 0), ("cp2", 2, 0), ("cp2", 2, 1), ("cp3", 2, 1), ("cp3", 3, 1), ("cp1", 2, 0)):
        out.append(conformal_preset(tag, n, k, max_order=max_order))
    return out


def preset_name(p: RealizationPreset) -> str:
    if p.tag.startswith("row"):
        pr = p.params
        extra = ""
        if pr["row"] >= 4:
            extra = f" alpha={pr['alpha']} theta_i={[str(x) for x in pr['theta_i']]}"
        return f"{p.tag} n={pr['n']} n0={pr['n0']} dim h={len(pr['h_basis'])}{extra}"
    return f"{p.tag} n={p.params['n']} k={p.params['k']}"


def realization_checks_for(p: RealizationPreset, max_order: int | None = None) -> list[Check]:
    m = p.max_order if max_order is None else max_order
    name = preset_name(p)
    stable, a, _ = is_stable(p.build, m)
    cmp = compare_holonomy(a.algebra, p.target)
    checks = [
        Check(f"realize/{name}/stable", f"generated algebra stable from order {m} to {m + 1}", True, stable),
        Check(f"realize/{name}/inside-target", "generated algebra inside target", True, cmp.contained),
        Check(f"realize/{name}/contains-target", "target inside generated algebra", True, cmp.contains),
        Check(f"realize/{name}/dim", "holonomy dimension", p.target.dim, a.dim),
    ]
    if p.tag.startswith("row"):
        checks.append(Check(f"realize/{name}/translations", "R^n inside the holonomy algebra",
                            True, translations_contained(a.algebra)))
    return checks


def realization_checks(max_order: int = 3) -> list[Check]:
    out = []
    for p in realization_presets(max_order):
        out.extend(realization_checks_for(p))
    return out


def run_suite(tags: Iterable[str], seed: int = 0, max_order: int = 3) -> VerificationReport:
    tags = list(tags)
    if "all" in tags:
        tags = list(SUITES)
    rep = VerificationReport()
    for t in tags:
        if t not in SUITES:
            raise ValueError(f"unknown suite {t!r}; expected one of {SUITES + ('all',)}")
    for t in dict.fromkeys(tags):
        if t == "prolongations":
            rep.extend(prolongation_checks(seed))
        elif t == "curvature-decomp":
            rep.extend(curvature_checks(seed))
        elif t == "berger-matrix":
            rep.extend(berger_checks())
        elif t == "weak-berger":
            rep.extend(weak_berger_checks())
        elif t == "realizations":
            rep.extend(realization_checks(max_order))
    return rep
