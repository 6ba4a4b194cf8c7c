"""Explicit Walker metrics and gauge functions whose Weyl holonomy is a prescribed algebra."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .curvature import weak_curvature_space, _cyclic_violations
from .errors import ValidationError
from .families import FamilySpec, make_family, subalgebra_menu
from .jets import JetScalar, walker_variables
from .lie import LieSubalgebra, lie_closure, matrix_span
from .linalg import Q, RationalMatrix, vec
from .weyl import WeylStructure, build_walker, required_order

ROWS = (1, 2, 3, 4, 5, 6)
CONFORMAL = ("cp1", "cp2", "cp3")

ROW_TARGET = {
    1: "Rid-plus(g1h)",
    2: "Rid-plus(g2h)",
    3: "Rid-plus(g3h-phi)",
    4: "g-alpha-theta-1",
    5: "g-theta-2",
    6: "g-theta-3-phi",
}


@dataclass
class RealizationPreset:
    tag: str
    n: int
    build: Callable[[int], WeylStructure]   # jet order K -> structure
    target: LieSubalgebra
    max_order: int
    order: int
    params: dict

    def structure(self, order: int | None = None) -> WeylStructure:
        return self.build(self.order if order is None else order)


def a_coefficients(P: Sequence[RationalMatrix], names, order: int) -> list[JetScalar]:
    """A_i = 1/3 (P^i_{jk} + P^i_{kj}) x^j x^k with P(e_k) e_j = P^i_{jk} e_i."""
    n = len(P)
    A = []
    for i in range(n):
        a = JetScalar.zero(names, order)
        for j in range(n):
            for k in range(n):
                c = P[k][i, j] + P[j][i, k]
                if c:
                    xj = JetScalar.variable(names, order, f"x{j + 1}")
                    xk = JetScalar.variable(names, order, f"x{k + 1}")
                    a = a + (xj * xk).scale(c / 3)
        A.append(a)
    return A


def default_weak_curvature(h_basis: Sequence[RationalMatrix], n: int) -> list[RationalMatrix]:
    """A P in P(h) whose image generates h, tried on small integer combinations."""
    if not h_basis:
        return [RationalMatrix.zeros(n)] * n
    h = matrix_span(h_basis, n)
    basis = weak_curvature_space(h)
    for weights in ([k + 1 for k in range(len(basis))], [1] * len(basis)):
        P = [RationalMatrix.zeros(n)] * n
        for w, T in zip(weights, basis):
            P = [a + b.scale(w) for a, b in zip(P, T.values)]
        if lie_closure(P, n).same_as(h):
            return P
    raise ValidationError("no generating weak curvature tensor found among the tried combinations")


def _functional(h_basis, values, M: RationalMatrix) -> Fraction:
    from .families import functional_value
    return functional_value(h_basis, values, M)


def _jet_linear(names, order, coeffs: Sequence[Fraction]) -> JetScalar:
    out = JetScalar.zero(names, order)
    for i, c in enumerate(coeffs):
        if c:
            out = out + JetScalar.variable(names, order, f"x{i + 1}").scale(c)
    return out


def table_preset(row: int, n: int, n0: int = 0, h_basis: Sequence[RationalMatrix] = (),
                 P: Sequence[Sequence] | None = None, theta: Sequence = (), phi: Sequence = (),
                 alpha=0, max_order: int = 3, order: int | None = None) -> RealizationPreset:
    if row not in ROWS:
        raise ValidationError(f"unknown table row {row}")
    if not 0 <= n0 <= n:
        raise ValidationError("need 0 <= n0 <= n")
    h_basis = list(h_basis)
    for B in h_basis:
        if B.shape != (n, n):
            raise ValidationError(f"h basis matrices must be {n}x{n}")
        if any(B[i, j] for i in range(n) for j in range(n) if i < n0 or j < n0):
            raise ValidationError("h must act trivially on the first n0 coordinates")
    if P is None:
        Pm = default_weak_curvature(h_basis, n)
    else:
        if len(P) != n:
            raise ValidationError(f"P needs one coefficient vector per e_i ({n})")
        Pm = []
        for coeffs in P:
            coeffs = vec(coeffs)
            if len(coeffs) != len(h_basis):
                raise ValidationError("P coefficient vectors must match the h basis")
            M = RationalMatrix.zeros(n)
            for c, B in zip(coeffs, h_basis):
                M = M + B.scale(c)
            Pm.append(M)
    if any(not Pm[i].is_zero() for i in range(n0)):
        raise ValidationError("P must vanish on the first n0 coordinates")
    if _cyclic_violations(Pm):
        raise ValidationError("P violates the cyclic condition, so P is not a weak curvature tensor")
    h = matrix_span(h_basis, n)
    generates = lie_closure(Pm, n).same_as(h) if h_basis else all(M.is_zero() for M in Pm)
    if not generates:
        raise ValidationError("the image of P does not generate h")
    theta = vec(theta) or (Fraction(0),) * len(h_basis)
    phi = vec(phi) or (Fraction(0),) * len(h_basis)
    alpha = Q(alpha)
    th = [_functional(h_basis, theta, M) for M in Pm]
    ph = [_functional(h_basis, phi, M) for M in Pm]

    spec = FamilySpec(family=ROW_TARGET[row], n=n, h_basis=tuple(h_basis), theta=theta, phi=phi,
                      alpha=alpha)
    target = make_family(spec)

    def build(K: int) -> WeylStructure:
        names = walker_variables(n)
        v = JetScalar.variable(names, K, "v")
        sq = JetScalar.zero(names, K)
        for i in range(n0):
            x = JetScalar.variable(names, K, f"x{i + 1}")
            sq = sq + x * x
        lin_th = _jet_linear(names, K, th)
        lin_ph = _jet_linear(names, K, ph)
        if row == 1:
            H, f = (v * v * v).scale(Fraction(1, 3)) + sq, v
        elif row == 2:
            H, f = v * v + sq, v
        elif row == 3:
            H, f = v * v + (lin_ph * v).scale(2) + sq, v
        elif row == 4:
            H = (v * v).scale(1 + alpha) + (lin_th * v).scale(2) + sq
            f = v.scale(alpha) + lin_th
        elif row == 5:
            H, f = (lin_th * v).scale(2) + sq, lin_th
        else:
            H, f = ((lin_th + lin_ph) * v).scale(2) + sq, lin_th
        A = a_coefficients(Pm, names, K)
        return build_walker(n, K, H=H, f=f, A=A, label=f"row {row}")

    K = required_order(max_order) if order is None else order
    params = {"row": row, "n": n, "n0": n0, "theta_i": th, "phi_i": ph, "alpha": alpha,
              "P": Pm, "h_basis": h_basis}
    return RealizationPreset(f"row{row}", n, build, target, max_order, K, params)


def conformal_preset(tag: str, n: int, k: int, kappa: str = "0", seed: int = 0,
                     max_order: int = 3, order: int | None = None) -> RealizationPreset:
    """g = 2 dv du + h1 + e^{-2fu} sum_{i>k} (dx^i)^2 + H du^2 with f = x^{k+1}.

    ``cp2`` uses H = 0, ``cp3`` and ``cp1`` use H = v^2 (cp1 is the k = 0 case).
    For kappa = so(k) with k >= 2 the factor h1 gets a fixed-seed quadratic
    perturbation; otherwise h1 is flat.
    """
    if tag not in CONFORMAL:
        raise ValidationError(f"unknown conformal product preset {tag!r}")
    if not 0 <= k <= n - 1:
        raise ValidationError("need 0 <= k <= n - 1")
    if tag == "cp1" and k != 0:
        raise ValidationError("cp1 is the k = 0 case")
    if tag == "cp3" and k == 0:
        tag = "cp1"
    kappa_basis = subalgebra_menu(kappa, k) if k else []
    if kappa not in ("0", f"so({k})") and not (kappa == "so2" and k == 2) and not (kappa == "so3" and k == 3):
        raise ValidationError("kappa must be {0} or so(k)")
    full = bool(kappa_basis)
    if tag == "cp1":
        target = make_family(FamilySpec(family="conformal-product-1", n=n, k=0))
    else:
        fam = "conformal-product-2" if tag == "cp2" else "conformal-product-3"
        target = make_family(FamilySpec(family=fam, n=n, k=k, h_basis=tuple(kappa_basis)))
    rng = random.Random(seed)
    pert = []
    if full:
        # symmetric quadratic perturbation of the first k coordinates
        for i in range(k):
            for j in range(i, k):
                for a in range(k):
                    for b in range(a, k):
                        c = Fraction(rng.randint(-7, 7), rng.randint(1, 7))
                        pert.append((i, j, a, b, c))

    def build(K: int) -> WeylStructure:
        names = walker_variables(n)
        zero = JetScalar.zero(names, K)
        one = JetScalar.constant(names, K, 1)
        f = JetScalar.variable(names, K, f"x{k + 1}")
        u = JetScalar.variable(names, K, "u")
        v = JetScalar.variable(names, K, "v")
        e = (f * u).scale(-2).exp()
        h = [[zero] * n for _ in range(n)]
        for i in range(n):
            h[i][i] = one if i < k else e
        for i, j, a, b, c in pert:
            xa = JetScalar.variable(names, K, f"x{a + 1}")
            xb = JetScalar.variable(names, K, f"x{b + 1}")
            t = (xa * xb).scale(c)
            h[i][j] = h[i][j] + t
            if i != j:
                h[j][i] = h[j][i] + t
        H = zero if tag == "cp2" else v * v
        return build_walker(n, K, H=H, f=f, h=h, label=tag)

    K = required_order(max_order) if order is None else order
    return RealizationPreset(tag, n, build, target, max_order, K,
                             {"tag": tag, "n": n, "k": k, "kappa": kappa, "seed": seed})


def preset_from_json(doc: dict) -> RealizationPreset:
    """Preset JSON: {"row": 1-6 | "cp1" | "cp2" | "cp3", "n", "n0", "h_basis", "P", ...}."""
    if "row" not in doc or "n" not in doc:
        raise ValidationError("preset needs 'row' and 'n'")
    row = doc["row"]
    n = int(doc["n"])
    max_order = int(doc.get("max_order", 3))
    order = doc.get("K")
    order = None if order is None else int(order)
    if isinstance(row, str) and row in CONFORMAL:
        return conformal_preset(row, n, int(doc.get("k", 0)), str(doc.get("kappa", "0")),
                                int(doc.get("seed", 0)), max_order, order)
    try:
        row = int(row)
    except (TypeError, ValueError):
        raise ValidationError(f"unknown row {row!r}") from None
    hb = doc.get("h_basis", [])
    if isinstance(hb, str):
        h_basis = subalgebra_menu(hb, n, int(doc.get("h_offset", doc.get("n0", 0))))
    else:
        h_basis = [RationalMatrix.from_rows([[Q(x) for x in r] for r in M]) for M in hb]
    return table_preset(row, n, int(doc.get("n0", 0)), h_basis, doc.get("P"),
                        doc.get("theta", ()), doc.get("phi", ()), doc.get("alpha", 0),
                        max_order, order)
