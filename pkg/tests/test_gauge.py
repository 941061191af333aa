import pytest

from invym import catalog
from invym import exactla as la
from invym.connection import solve_wang
from invym.field import ZERO, parse, var
from invym.gauge import (
    CoordinateForm,
    GaugeError,
    MatrixGroupModel,
    a5_fixture_check,
    a5_invariants_check,
    a5_tangent_fixtures,
    decompose_in_basis,
    fels_renner_wang,
    form_text,
    gauge_potential,
    load_model,
    maurer_cartan_pullback,
    potential_curvature,
    structure_equation_holds,
)
from invym.psc import designated_homomorphism


@pytest.fixture(scope="module")
def b3_coeffs():
    model = load_model("B3")
    return decompose_in_basis(maurer_cartan_pullback(model), model.algebra.realization)


def _b3_wang(su2, y):
    p = catalog.load_pair("B3")
    return solve_wang(p, designated_homomorphism(p, su2)).point([y])


def test_b3_structure_equation():
    assert structure_equation_holds(maurer_cartan_pullback(load_model("B3")))


def test_structure_equation_detects_non_flat():
    x1, x2 = var("x1"), var("x2")
    one, zero = parse("1"), ZERO
    # theta = x2 dx1 * E12 is not a Maurer-Cartan form
    E = [[zero, x2], [zero, zero]]
    Z = [[zero, zero], [zero, zero]]
    assert not structure_equation_holds(CoordinateForm([E, Z], ("x1", "x2")))


def test_b3_maurer_cartan_coefficients(b3_coeffs):
    got = [[row[j] for row in b3_coeffs.components] for j in range(6)]
    expect = {
        0: ["0", "-1/x2", "0", "0"],
        1: ["x2", "-x1", "0", "0"],
        3: ["0", "0", "x2", "-x1"],
        4: ["0", "0", "0", "1/x2"],
    }
    for j in range(6):
        assert got[j] == [parse(t) for t in expect.get(j, ["0"] * 4)]


def test_b3_potential(su2, b3_coeffs):
    W = _b3_wang(su2, 1)
    omega = gauge_potential(fels_renner_wang(W), b3_coeffs)
    assert form_text(omega, su2) == "(x2*dx1 - x1*dx2) (x) f1"
    assert omega.components[0] == [var("x2"), ZERO, ZERO]
    assert omega.components[1] == [-var("x1"), ZERO, ZERO]
    assert omega.components[2] == omega.components[3] == [ZERO] * 3


def test_b3_potential_scales_with_y(su2, b3_coeffs):
    W = _b3_wang(su2, parse("3/2"))
    omega = gauge_potential(fels_renner_wang(W), b3_coeffs)
    assert omega.components[0][0] == parse("3*x2/2")
    assert omega.components[1][0] == parse("-3*x1/2")


def test_b3_potential_curvature(su2, b3_coeffs):
    omega = gauge_potential(fels_renner_wang(_b3_wang(su2, 1)), b3_coeffs)
    # d(x2 dx1 - x1 dx2) = -2 dx1^dx2 while [omega, omega] = 0 (abelian image)
    assert potential_curvature(omega, su2) == {(0, 1): [parse("-2"), ZERO, ZERO]}
    assert all(x == 0 for x in su2.bracket(omega.components[0], omega.components[1]))


def test_gauge_potential_basis_mismatch(su2, b3_coeffs):
    with pytest.raises(GaugeError):
        gauge_potential(la.zeros(3, 5), b3_coeffs)


def test_singular_section():
    alg = catalog.fels_renner("B3")
    with pytest.raises(GaugeError):
        MatrixGroupModel(la.zeros(4, 4), alg)


def test_model_needs_realization():
    with pytest.raises(GaugeError):
        MatrixGroupModel(la.identity(3), catalog.load_algebra("su2"))


def test_a5_has_no_section_file():
    with pytest.raises(GaugeError):
        load_model("A5")


def test_decompose_outside_algebra():
    alg = catalog.fels_renner("B3")
    odd = [[parse("1") if i == j == 3 else ZERO for j in range(4)] for i in range(4)]
    odd[2][0] = parse("1")
    with pytest.raises(GaugeError):
        decompose_in_basis(CoordinateForm([odd]), alg.realization)


def _a5_wang(su2):
    p = catalog.load_pair("A5")
    return fels_renner_wang(solve_wang(p, designated_homomorphism(p, su2)).particular())


def test_a5_wang_only_on_v7(su2):
    W = _a5_wang(su2)
    for j in range(7):
        col = [row[j] for row in W]
        assert all(x == 0 for x in col) == (j != 6)


def test_a5_pure_gauge(su2):
    rep = a5_fixture_check(_a5_wang(su2))
    assert rep.passed
    assert all(x == 0 for c in rep.potential for x in c)


def test_a5_fixture_scaled(su2):
    fx = a5_tangent_fixtures()
    x2 = var("x2")
    fx[3] = [[x2 * e for e in row] for row in fx[3]]
    assert a5_fixture_check(_a5_wang(su2), fx).passed


def test_a5_injected_v7_fails(su2):
    fx = a5_tangent_fixtures()
    v7 = catalog.fels_renner("A5").realization[6]
    fx[3] = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(fx[3], v7)]
    rep = a5_fixture_check(_a5_wang(su2), fx)
    assert not rep.passed
    assert rep.message == "nonzero potential"


def test_a5_invariants_killed():
    assert a5_invariants_check() == []


def test_form_text_scalar():
    assert form_text(CoordinateForm([parse("1"), parse("-1"), ZERO, parse("x1+1")])) == "dx1 - dx2 + (x1 + 1)*dx4"
    assert form_text(CoordinateForm([ZERO] * 4)) == "0"
