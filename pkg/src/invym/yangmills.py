"""Reduced Yang-Mills equations for invariant connections."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

from . import exactla as la
from .connection import InvariantComplement, WangMap, adapted_pair
from .field import ZERO, Scalar, is_zero, to_text
from .forms import Frame, HValuedForm, codifferential, curvature, raised_constants
from .invmetric import MetricOnS
from .liealg import BundleHomomorphism, HomogeneousPair, LieError

__all__ = [
    "YmReport",
    "ym_residual",
    "ym_residual_formula",
    "canonical_ym_lhs",
    "constant_tables",
]


@dataclass
class YmReport:
    """Residual ``delta_W F_W`` as an h-valued 1-form on s."""

    residual: HValuedForm
    curvature: HValuedForm

    @property
    def is_yang_mills(self) -> bool:
        return self.residual.is_zero()

    def component(self, c: int, alpha: int) -> Scalar:
        return self.residual.component(c, (alpha,))

    def texts(self) -> Dict[str, str]:
        """Nonzero components keyed like ``f1_2`` (h vector, s index; 1-based)."""
        h = self.residual.h
        out = {}
        for (c, idx), v in sorted(self.residual.comps.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            out[f"{h.names[c]}_{idx[0] + 1}"] = to_text(v)
        return out


def ym_residual_formula(F: HValuedForm, W_s: la.Matrix, metric: MetricOnS) -> HValuedForm:
    """Expanded reduced equations.

    ``(delta F)^c_a = -F^c_{a t} C^{t s}_s - 1/2 F^c_{t s} C^{t s}_a - W^{a' t} F^b_{t a} r_{a' b}^c``
    """
    frame, h = F.frame, F.h
    n = frame.n
    C = raised_constants(frame, metric)
    trace = [ZERO] * n  # C^{t s}_s
    for t in range(n):
        acc = ZERO
        for s in range(n):
            if not is_zero(C[t][s][s]):
                acc = acc + C[t][s][s]
        trace[t] = acc
    mi = metric.mu_inv
    w_up = [[ZERO] * n for _ in range(h.dim)]
    for a in range(h.dim):
        for t in range(n):
            acc = ZERO
            for r in range(n):
                if not is_zero(W_s[a][r]) and not is_zero(mi[r][t]):
                    acc = acc + W_s[a][r] * mi[r][t]
            w_up[a][t] = acc
    out = {}
    half = Fraction(1, 2)
    for al in range(n):
        total = [ZERO] * h.dim
        for t in range(n):
            if not is_zero(trace[t]):
                val = F.value((al, t))
                total = [x - v * trace[t] for x, v in zip(total, val)]
            for s in range(n):
                if not is_zero(C[t][s][al]):
                    val = F.value((t, s))
                    total = [x - half * v * C[t][s][al] for x, v in zip(total, val)]
            wt = [w_up[a][t] for a in range(h.dim)]
            if any(not is_zero(x) for x in wt):
                br = h.bracket(wt, F.value((t, al)))
                total = [x - b for x, b in zip(total, br)]
        for c, v in enumerate(total):
            if not is_zero(v):
                out[(c, (al,))] = v
    return HValuedForm(frame, h, 1, out)


def ym_residual(W: WangMap, metric: MetricOnS) -> YmReport:
    """``delta_W F_W``, computed by the expanded formula and by the general codifferential."""
    F = curvature(W.pair, W.h, W.W)
    W_s = W.s_matrix()
    direct = ym_residual_formula(F, W_s, metric)
    general = codifferential(F, W_s, metric)
    if not direct.equals(general):
        raise AssertionError("expanded Yang-Mills residual disagrees with the codifferential")
    return YmReport(direct, F)


def canonical_ym_lhs(pair: HomogeneousPair, hom: BundleHomomorphism, complement: InvariantComplement,
                     metric: MetricOnS) -> List[List[Scalar]]:
    """``lambda^c_g (2 c_{a t}^g C^{t s}_s + c_{t s}^g C^{t s}_a)`` as a dim h x dim s array.

    Brackets are taken in a basis adapted to ``complement``; the array vanishes
    iff the canonical connection is Yang-Mills.
    """
    kernel = hom.kernel()
    from .connection import complement_condition_holds

    if not complement_condition_holds(pair, complement, kernel or []):
        raise LieError("complement does not certify lambda-reductivity")
    ap = adapted_pair(pair, complement)
    frame = Frame.of_complement(ap)
    n = frame.n
    C = raised_constants(frame, metric)
    trace = [sum((C[t][s][s] for s in range(n)), ZERO) for t in range(n)]
    h = hom.h

    def k_part(a, b):
        return ap.proj_k(ap.g.basis_bracket(ap.s_indices[a], ap.s_indices[b]))

    out = [[ZERO] * n for _ in range(h.dim)]
    for al in range(n):
        kvec = [ZERO] * ap.dim_k
        for t in range(n):
            if not is_zero(trace[t]):
                kp = k_part(al, t)
                kvec = [x + 2 * y * trace[t] for x, y in zip(kvec, kp)]
            for s in range(n):
                if not is_zero(C[t][s][al]):
                    kp = k_part(t, s)
                    kvec = [x + y * C[t][s][al] for x, y in zip(kvec, kp)]
        lam = hom.apply(kvec)
        for c in range(h.dim):
            out[c][al] = lam[c]
    return out


def constant_tables(pair: HomogeneousPair, metric: MetricOnS):
    """Nonzero lower ``c_{ab}^g`` (a<b) and raised ``C^{ab}_g`` (a<b) on s, 1-based keys."""
    frame = Frame.of_complement(pair)
    n = frame.n
    C = raised_constants(frame, metric)
    lower, upper = {}, {}
    for a in range(n):
        for b in range(a + 1, n):
            for g in range(n):
                if not is_zero(frame.c[a][b][g]):
                    lower[(a + 1, b + 1, g + 1)] = frame.c[a][b][g]
                if not is_zero(C[a][b][g]):
                    upper[(a + 1, b + 1, g + 1)] = C[a][b][g]
    return lower, upper
