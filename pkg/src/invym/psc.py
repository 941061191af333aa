"""Symmetric-criticality verdicts for invariant Yang-Mills connections.

PSC1 asks for nonzero top-degree relative cohomology ``H^q(g, k)`` with trivial
coefficients.  PSC2 asks that the scalar product on h-valued 1-forms be
nondegenerate on the k-invariant ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Optional

from . import exactla as la
from .connection import WangMap
from .field import ZERO, Scalar, evaluate, is_zero
from .forms import Frame, HValuedForm, curvature, d_w, inner_product, lie_derivative, twisted_lie_derivative
from .invmetric import MetricOnS
from .liealg import BundleHomomorphism, HomogeneousPair, LieAlgebra

__all__ = [
    "Psc1Report",
    "Psc2Report",
    "PscVerdict",
    "psc1",
    "psc2",
    "psc_verdict",
    "reduced_lagrangian",
    "invariant_chains",
    "fixed_subspace",
    "fixed_subspace_nondegenerate",
    "designated_homomorphism",
    "DESIGNATED_IMAGES",
]

# Default isotropy homomorphisms into su(2); pairs not listed use the trivial one.
DESIGNATED_IMAGES = {
    "A5": {"e5": [1, 0, 0]},
    "B3": {"e6": [1, 0, 0]},
    "a43": {"e1": [1, 0, 0]},
    "s2_sym": {"e3": [1, 0, 0]},
    "sl2r_sym": {"e3": [1, 0, 0]},
}

_SCALARS = LieAlgebra.from_brackets(["1"], {}, name="R")


@dataclass
class Psc1Report:
    q: int
    dim_z: int
    dim_b: int

    @property
    def dim_h(self) -> int:
        return self.dim_z - self.dim_b

    @property
    def verdict(self) -> bool:
        return self.dim_h != 0


@dataclass
class Psc2Report:
    basis: List[HValuedForm]
    gram: la.Matrix
    rank: int
    witness_ranks: List[int] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def verdict(self) -> bool:
        return self.rank == self.dim

    @property
    def witnesses_agree(self) -> bool:
        return all(r == self.rank for r in self.witness_ranks)


@dataclass
class PscVerdict:
    psc1_report: Psc1Report
    psc2_report: Psc2Report

    @property
    def psc1(self) -> bool:
        return self.psc1_report.verdict

    @property
    def psc2(self) -> bool:
        return self.psc2_report.verdict

    @property
    def psc(self) -> bool:
        return self.psc1 and self.psc2

    def __iter__(self) -> Iterator[bool]:
        return iter((self.psc1, self.psc2, self.psc))


def _form_basis(frame, h, p):
    return [(a, idx) for idx in combinations(range(frame.n), p) for a in range(h.dim)]


def _coords(phi: HValuedForm, basis) -> List[Scalar]:
    return [phi.component(a, idx) for a, idx in basis]


def _from_coords(frame, h, p, basis, vec) -> HValuedForm:
    return HValuedForm(frame, h, p, {key: x for key, x in zip(basis, vec) if not is_zero(x)})


def _operator_rows(ops, frame, h, p):
    """Stack the matrices of linear maps on p-forms (each op maps a form to a form)."""
    basis = _form_basis(frame, h, p)
    rows = []
    for op in ops:
        cols = [_coords(op(HValuedForm.basis_form(frame, h, idx, a)), basis) for a, idx in basis]
        rows.extend(la.transpose(cols) if cols else [])
    return basis, rows


def invariant_chains(pair: HomogeneousPair, p: int) -> List[HValuedForm]:
    """Basis of k-invariant scalar p-chains on s (k-semibasic by construction)."""
    frame = Frame.of_complement(pair)
    ops = [lambda phi, r=r: lie_derivative(r, phi) for r in pair.rho_s]
    basis, rows = _operator_rows(ops, frame, _SCALARS, p)
    kernel = la.nullspace(rows, len(basis))
    return [_from_coords(frame, _SCALARS, p, basis, v) for v in kernel]


def psc1(pair: HomogeneousPair) -> Psc1Report:
    """Top-degree relative cohomology ``dim H^q(g, k)`` with trivial coefficients."""
    q = pair.dim_s
    frame = Frame.of_complement(pair)
    top = _form_basis(frame, _SCALARS, q)
    z = invariant_chains(pair, q)
    z_vecs = [_coords(phi, top) for phi in z]
    b_vecs = [_coords(d_w(phi), top) for phi in invariant_chains(pair, q - 1)] if q else []
    dim_z = la.rank(z_vecs) if z_vecs else 0
    dim_b = la.rank(b_vecs) if b_vecs else 0
    if dim_b and la.rank(z_vecs + b_vecs) != dim_z:
        raise AssertionError("exact chains are not contained in the invariant closed chains")
    return Psc1Report(q, dim_z, dim_b)


def _witness_points(metric: MetricOnS, count: int, rng: random.Random) -> List[Dict[str, Fraction]]:
    if not metric.names:
        return []
    out = []
    for _ in range(100 * count):
        point = {p: Fraction(rng.randint(-7, 7) or 1, rng.randint(1, 3)) for p in metric.names}
        if evaluate(metric.det, point) != 0:
            out.append(point)
        if len(out) == count:
            break
    return out


def psc2(pair: HomogeneousPair, hom: BundleHomomorphism, metric: MetricOnS, m: la.Matrix,
         witnesses: int = 3, rng: Optional[random.Random] = None) -> Psc2Report:
    """Rank of the scalar product restricted to k-invariant h-valued 1-forms."""
    frame = Frame.of_complement(pair)
    h = hom.h
    ops = []
    for t in range(pair.dim_k):
        kvec = pair.proj_k(pair.k_vector(t))
        ops.append(lambda phi, kv=kvec: twisted_lie_derivative(pair, kv, phi, hom.lambda_star))
    basis, rows = _operator_rows(ops, frame, h, 1)
    kernel = la.nullspace(rows, len(basis))
    forms = [_from_coords(frame, h, 1, basis, v) for v in kernel]
    gram = [[inner_product(u, v, metric, m) for v in forms] for u in forms]
    rank = la.rank(gram) if forms else 0
    ranks = []
    if forms:
        for point in _witness_points(metric, witnesses, rng or random.Random(0)):
            ranks.append(la.rank(la.evaluate_matrix(gram, point)))
    return Psc2Report(forms, gram, rank, ranks)


def fixed_subspace(pair: HomogeneousPair) -> List[List[Scalar]]:
    """Vectors of s annihilated by every ``rho_s(x)``."""
    rows = [row for r in pair.rho_s for row in r]
    return la.nullspace(rows, pair.dim_s)


def fixed_subspace_nondegenerate(pair: HomogeneousPair, mu: la.Matrix) -> bool:
    """Whether ``mu`` restricted to the fixed subspace ``s^K`` is nondegenerate."""
    vecs = fixed_subspace(pair)
    if not vecs:
        return True
    gram = [[sum((u[i] * mu[i][j] * v[j] for i in range(len(u)) for j in range(len(v))), ZERO)
             for v in vecs] for u in vecs]
    return la.rank(gram) == len(vecs)


def reduced_lagrangian(W: WangMap, metric: MetricOnS, m: la.Matrix) -> Scalar:
    """``<F_W, F_W>`` for the curvature of an invariant connection."""
    F = curvature(W.pair, W.h, W.W)
    return inner_product(F, F, metric, m)


def designated_homomorphism(pair: HomogeneousPair, h: LieAlgebra) -> BundleHomomorphism:
    """The default isotropy homomorphism for ``pair`` (trivial unless listed)."""
    images = DESIGNATED_IMAGES.get(pair.id, {})
    names = [pair.g.names[i] for i in pair.k_indices]
    hom = BundleHomomorphism.from_images(pair, h, {names.index(k): v for k, v in images.items()})
    if not hom.verified:
        raise AssertionError(f"designated map for {pair.id} is not a homomorphism")
    return hom


def psc_verdict(pair: HomogeneousPair, hom: BundleHomomorphism, metric: MetricOnS, m: la.Matrix) -> PscVerdict:
    return PscVerdict(psc1(pair), psc2(pair, hom, metric, m))
