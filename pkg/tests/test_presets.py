from fractions import Fraction

import pytest

from weylhol.errors import ValidationError
from weylhol.families import family, subalgebra_menu
from weylhol.jets import JetScalar, walker_variables
from weylhol.presets import conformal_preset, default_weak_curvature, preset_from_json, table_preset
from weylhol.weyl import compare_holonomy, holonomy_generate, translations_contained


def var(n, K, name):
    return JetScalar.variable(walker_variables(n), K, name)


def test_fifth_row_data_and_target():
    p = table_preset(5, 2, 0, subalgebra_menu("so2", 2), theta=[1])
    W = p.structure(5)
    x1, x2, v = var(2, 5, "x1"), var(2, 5, "x2"), var(2, 5, "v")
    th = p.params["theta_i"]
    lin = x1.scale(th[0]) + x2.scale(th[1])
    assert W.H == (lin * v).scale(2)
    assert W.f == lin
    assert p.target.same_as(family("g-theta-2", 2, "so2", theta=[1]))


def test_sixth_row_data_and_target():
    p = table_preset(6, 2, 0, subalgebra_menu("so2", 2), theta=[1], phi=[1])
    W = p.structure(5)
    x1, x2, v = var(2, 5, "x1"), var(2, 5, "x2"), var(2, 5, "v")
    th, ph = p.params["theta_i"], p.params["phi_i"]
    assert W.H == ((x1.scale(th[0] + ph[0]) + x2.scale(th[1] + ph[1])) * v).scale(2)
    assert W.f == x1.scale(th[0]) + x2.scale(th[1])
    assert p.target.same_as(family("g-theta-3-phi", 2, "so2", theta=[1], phi=[1]))


def test_first_row_target():
    p = table_preset(1, 1, 1, [])
    assert p.target.same_as(family("Rid-plus(g1h)", 1, "0"))


def test_default_weak_curvature_generates_h():
    hb = subalgebra_menu("so2+so2", 4)
    P = default_weak_curvature(hb, 4)
    assert len(P) == 4 and any(not M.is_zero() for M in P)


@pytest.mark.parametrize("kw", [
    {"row": 7, "n": 2},
    {"row": 2, "n": 2, "n0": 3},
    {"row": 2, "n": 3, "n0": 2, "h_basis": subalgebra_menu("so2", 3)},
    {"row": 2, "n": 3, "h_basis": subalgebra_menu("so3", 3), "P": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
    {"row": 2, "n": 2, "h_basis": subalgebra_menu("so2", 2), "P": [[0], [0]]},
    {"row": 2, "n": 2, "n0": 1, "h_basis": subalgebra_menu("0", 2), "P": []},
], ids=["bad-row", "bad-n0", "h-on-flat-part", "P-not-cyclic", "P-not-generating", "P-wrong-length"])
def test_invalid_presets_are_rejected(kw):
    kw = dict(kw)
    with pytest.raises(ValidationError):
        table_preset(kw.pop("row"), kw.pop("n"), kw.pop("n0", 0), kw.pop("h_basis", []), **kw)


def test_explicit_weak_curvature_is_accepted():
    # P(e_1) = J, P(e_2) = 0 satisfies the cyclic condition and generates so(2)
    p = table_preset(2, 2, 0, subalgebra_menu("so2", 2), P=[[1], [0]])
    res = holonomy_generate(p.structure(6), 3)
    assert compare_holonomy(res.algebra, p.target).equal
    assert translations_contained(res.algebra)


def test_conformal_preset_validation():
    with pytest.raises(ValidationError):
        conformal_preset("cp4", 2, 0)
    with pytest.raises(ValidationError):
        conformal_preset("cp2", 2, 2)
    with pytest.raises(ValidationError):
        conformal_preset("cp1", 2, 1)
    assert conformal_preset("cp3", 2, 0).tag == "cp1"


def test_curved_first_factor_realizes_third_algebra_with_rotations():
    p = conformal_preset("cp3", 3, 2, kappa="so(2)")
    res = holonomy_generate(p.structure(6), 3)
    assert compare_holonomy(res.algebra, p.target).equal


def test_preset_json():
    p = preset_from_json({"row": 4, "n": 2, "h_basis": "so2", "theta": [1], "alpha": "1/2"})
    assert p.params["alpha"] == Fraction(1, 2)
    p = preset_from_json({"row": "cp2", "n": 2, "k": 1})
    assert p.tag == "cp2"
    with pytest.raises(ValidationError):
        preset_from_json({"n": 2})
    with pytest.raises(ValidationError):
        preset_from_json({"row": "x", "n": 2})
