"""Local gauge potentials from rational sections of matrix group models.

For a section ``sigma`` of ``G -> G/K`` over a chart, the pulled-back
Maurer-Cartan form ``sigma^-1 d sigma`` is decomposed in the Fels-Renner basis
and fed through a Wang map to give the potential ``W(sigma^-1 d sigma)``.
Both shipped models live on the chart ``x2 != 0`` of a quotient diffeomorphic
to ``(R^2 minus the origin) x R^2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence

from . import exactla as la
from .catalog import basis_change, fels_renner
from .connection import WangMap
from .field import ONE, ZERO, Scalar, diff, is_zero, scalar, to_text
from .liealg import LieAlgebra

__all__ = [
    "CoordinateForm",
    "MatrixGroupModel",
    "GaugeError",
    "load_model",
    "maurer_cartan_pullback",
    "structure_equation_holds",
    "decompose_in_basis",
    "fels_renner_wang",
    "gauge_potential",
    "potential_curvature",
    "a5_tangent_fixtures",
    "a5_fixture_check",
    "a5_invariants_check",
    "form_text",
]

COORDS = ("x1", "x2", "x3", "x4")


class GaugeError(ValueError):
    """Singular section or a matrix outside the model algebra."""


@dataclass
class CoordinateForm:
    """A 1-form ``sum_i components[i] dx_i``.

    Components are scalars, matrices or h-vectors; all components of one form
    have the same kind.
    """

    components: List
    coords: Sequence[str] = COORDS

    def is_zero(self) -> bool:
        return all(_is_zero_value(c) for c in self.components)


def _is_zero_value(v):
    if isinstance(v, list):
        return all(_is_zero_value(x) for x in v)
    return is_zero(v)


def _read_gauge_doc(cid):
    text = resources.files("invym").joinpath("data", "gauge", f"{cid}.json").read_text()
    return json.loads(text)


@dataclass
class MatrixGroupModel:
    """A section ``sigma(x)`` of a matrix group model with its algebra in the same basis."""

    sigma: la.Matrix
    algebra: LieAlgebra
    coords: Sequence[str] = COORDS
    chart: str = ""

    def __post_init__(self):
        if self.algebra.realization is None:
            raise GaugeError("model algebra needs a matrix realization")
        if is_zero(la.det(self.sigma)):
            raise GaugeError("section matrix is singular")


def load_model(cid: str) -> MatrixGroupModel:
    """The shipped section for ``B3`` (the A5 model is described by fixtures instead)."""
    doc = _read_gauge_doc(cid)
    if "section" not in doc:
        raise GaugeError(f"{cid} ships no section matrix")
    sigma = [[scalar(x) for x in row] for row in doc["section"]]
    return MatrixGroupModel(sigma, fels_renner(cid), doc["coordinates"], doc.get("chart", ""))


def maurer_cartan_pullback(model: MatrixGroupModel) -> CoordinateForm:
    """``sigma^-1 d sigma`` as a matrix-valued 1-form."""
    inv = la.inverse(model.sigma)
    comps = []
    for x in model.coords:
        d = [[diff(e, x) for e in row] for row in model.sigma]
        comps.append(la.matmul(inv, d))
    return CoordinateForm(comps, model.coords)


def structure_equation_holds(theta: CoordinateForm) -> bool:
    """``d theta + theta ^ theta = 0`` for a matrix-valued 1-form."""
    cs = theta.components
    n = len(cs)
    for i in range(n):
        for j in range(i + 1, n):
            dij = [[diff(a, theta.coords[i]) for a in row] for row in cs[j]]
            dji = [[diff(a, theta.coords[j]) for a in row] for row in cs[i]]
            pij = la.matmul(cs[i], cs[j])
            pji = la.matmul(cs[j], cs[i])
            total = [[a - b + c - d for a, b, c, d in zip(r1, r2, r3, r4)]
                     for r1, r2, r3, r4 in zip(dij, dji, pij, pji)]
            if not la.is_zero_matrix(total):
                return False
    return True


def _flat(m):
    return [x for row in m for x in row]


def decompose_in_basis(form: CoordinateForm, realization: Sequence[la.Matrix]) -> CoordinateForm:
    """Coefficients of each realization matrix in every component of ``form``."""
    cols = la.transpose([_flat(m) for m in realization])
    out = []
    for i, m in enumerate(form.components):
        sol = la.solve_affine(cols, _flat(m), len(realization))
        if sol is None:
            raise GaugeError(f"dx{i + 1} component lies outside the model algebra")
        if sol.free_dim:
            raise GaugeError("realization matrices are linearly dependent")
        out.append(list(sol.particular))
    return CoordinateForm(out, form.coords)


def fels_renner_wang(W: WangMap) -> la.Matrix:
    """The Wang map written on the Fels-Renner basis ``v_j`` of its pair."""
    T = basis_change(W.pair.id)
    return la.matmul(W.W, la.inverse(T))


def gauge_potential(W_fr: la.Matrix, coefficients: CoordinateForm) -> CoordinateForm:
    """h-valued potential ``W(sigma^-1 d sigma)`` from Fels-Renner coefficients."""
    ncols = len(W_fr[0]) if W_fr else 0
    if any(len(c) != ncols for c in coefficients.components):
        raise GaugeError("Wang map and coefficients use different bases")
    return CoordinateForm([la.matvec(W_fr, c) for c in coefficients.components], coefficients.coords)


def potential_curvature(omega: CoordinateForm, h: LieAlgebra) -> Dict[tuple, List[Scalar]]:
    """Nonzero ``(d omega + 1/2 [omega, omega])_{ij}`` for i < j (0-based coordinate indices)."""
    cs = omega.components
    out = {}
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            dval = [diff(b, omega.coords[i]) - diff(a, omega.coords[j]) for a, b in zip(cs[i], cs[j])]
            br = h.bracket(cs[i], cs[j])
            val = [x + y for x, y in zip(dval, br)]
            if any(not is_zero(x) for x in val):
                out[(i, j)] = val
    return out


def _scalar_form_text(coeffs, coords) -> str:
    terms = []
    for c, x in zip(coeffs, coords):
        if is_zero(c):
            continue
        d = "d" + x
        if c == ONE:
            terms.append(d)
        elif c == -ONE:
            terms.append("-" + d)
        else:
            t = to_text(c)
            body = t[1:] if t.startswith("-") else t
            if any(ch in body for ch in "+-/") and not body.replace("/", "").replace("^", "").replace("*", "").isalnum():
                t = f"({t})"
            terms.append(f"{t}*{d}")
    if not terms:
        return "0"
    text = " + ".join(terms)
    return text.replace("+ -", "- ")


def form_text(omega: CoordinateForm, h: Optional[LieAlgebra] = None) -> str:
    """Readable text of a scalar or h-valued coordinate form, e.g. ``(x2*dx1 - x1*dx2) (x) f1``."""
    cs = omega.components
    if not cs or not isinstance(cs[0], list):
        return _scalar_form_text(cs, omega.coords)
    dim = len(cs[0])
    names = h.names if h is not None else [f"f{a + 1}" for a in range(dim)]
    parts = []
    for a in range(dim):
        coeffs = [c[a] for c in cs]
        if all(is_zero(x) for x in coeffs):
            continue
        parts.append(f"({_scalar_form_text(coeffs, omega.coords)}) (x) {names[a]}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# A5 fixtures
# ---------------------------------------------------------------------------

def _embed(hmat, sl2):
    """The pair (h-matrix, X) as ``hmat + diag(0, X, 0)``."""
    m = [[scalar(x) for x in row] for row in hmat]
    for i in range(2):
        for j in range(2):
            m[i + 1][j + 1] = m[i + 1][j + 1] + scalar(sl2[i][j])
    return m


def a5_tangent_fixtures() -> List[la.Matrix]:
    """Left-translated tangents ``g'_i(0)`` of the A5 section, embedded as 4x4 matrices."""
    doc = _read_gauge_doc("A5")
    return [_embed(t["h"], t["sl2"]) for t in doc["tangents"]]


@dataclass
class FixtureReport:
    passed: bool
    coefficients: List[List[Scalar]] = field(default_factory=list)
    potential: List[List[Scalar]] = field(default_factory=list)
    message: str = ""


def a5_fixture_check(W_fr: la.Matrix, fixtures: Optional[List[la.Matrix]] = None) -> FixtureReport:
    """Decompose each tangent in the A5 realization and check that ``W`` kills it."""
    fixtures = a5_tangent_fixtures() if fixtures is None else fixtures
    algebra = fels_renner("A5")
    form = CoordinateForm(list(fixtures), COORDS[:len(fixtures)])
    try:
        coeffs = decompose_in_basis(form, algebra.realization)
    except GaugeError as exc:
        return FixtureReport(False, message=str(exc))
    pot = gauge_potential(W_fr, coeffs)
    ok = pot.is_zero()
    msg = "potential vanishes (pure gauge)" if ok else "nonzero potential"
    return FixtureReport(ok, coeffs.components, pot.components, msg)


def a5_invariants_check() -> List[tuple]:
    """(generator, invariant) index pairs where a generator fails to kill an invariant."""
    doc = _read_gauge_doc("A5")
    invariants = [scalar(t) for t in doc["invariants"]]
    bad = []
    for gi, gen in enumerate(doc["generators"]):
        for ii, inv in enumerate(invariants):
            total = ZERO
            for name, coef in gen.items():
                total = total + scalar(coef) * diff(inv, name)
            if not is_zero(total):
                bad.append((gi, ii))
    return bad
