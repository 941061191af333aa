"""K-invariant metrics on the complement s and their volume data."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional

from . import exactla as la
from .field import ZERO, RatFunc, Scalar, diff, evaluate, is_zero, scalar, var, variables
from .liealg import HomogeneousPair

__all__ = [
    "MetricFamily",
    "MetricOnS",
    "MetricError",
    "invariant_metric_family",
    "metric_instance",
    "symbolic_metric",
    "rational_sqrt",
    "square_witnesses",
    "default_metric",
]


class MetricError(ValueError):
    """Degenerate metric or unusable witness."""


@dataclass
class MetricFamily:
    """Affine family ``sum_i p_i * basis[i]`` of invariant symmetric matrices."""

    basis: List[la.Matrix]
    names: List[str]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def member(self, values: Optional[Dict[str, Scalar]] = None) -> la.Matrix:
        """Family member at ``values``; missing names stay symbolic."""
        values = values or {}
        n = len(self.basis[0]) if self.basis else 0
        out = la.zeros(n, n)
        for name, b in zip(self.names, self.basis):
            coeff = scalar(values[name]) if name in values else var(name)
            for i in range(n):
                for j in range(n):
                    if not is_zero(b[i][j]):
                        out[i][j] = out[i][j] + coeff * b[i][j]
        return out


def _sym_index(n):
    idx = {}
    for i in range(n):
        for j in range(i, n):
            idx[(i, j)] = len(idx)
    return idx


def _family_basis(pair: HomogeneousPair) -> List[la.Matrix]:
    n = pair.dim_s
    idx = _sym_index(n)
    rows = []
    for rho in pair.rho_s:
        # (rho^T mu + mu rho)_{ij} = sum_k rho[k][i] mu[k][j] + mu[i][k] rho[k][j]
        for i in range(n):
            for j in range(i, n):
                row = [ZERO] * len(idx)
                for k in range(n):
                    if not is_zero(rho[k][i]):
                        key = idx[(min(k, j), max(k, j))]
                        row[key] = row[key] + rho[k][i]
                    if not is_zero(rho[k][j]):
                        key = idx[(min(i, k), max(i, k))]
                        row[key] = row[key] + rho[k][j]
                if any(not is_zero(x) for x in row):
                    rows.append(row)
    basis = la.nullspace(rows, len(idx)) if rows else la.nullspace([], len(idx))
    out = []
    for vec in basis:
        m = la.zeros(n, n)
        for (i, j), p in idx.items():
            m[i][j] = vec[p]
            m[j][i] = vec[p]
        out.append(m)
    return out


def _pattern_coefficients(pattern):
    names = sorted({v for row in pattern for x in row for v in variables(x)})
    parts = []
    for name in names:
        parts.append([[diff(x, name) for x in row] for row in pattern])
    return names, parts


def _flatten(m):
    return [x for row in m for x in row]


def invariant_metric_family(pair: HomogeneousPair) -> MetricFamily:
    """All symmetric ``mu`` with ``rho(x)^T mu + mu rho(x) = 0`` for every k generator.

    When the pair carries a metric pattern spanning the same space, the
    pattern's parameter names and matrices are used so that symbolic results
    read in the customary a, b, c, d.
    """
    basis = _family_basis(pair)
    if pair.metric_pattern is not None:
        names, parts = _pattern_coefficients(pair.metric_pattern)
        if len(parts) == len(basis) and _same_span(basis, parts):
            return MetricFamily(parts, names)
    return MetricFamily(basis, [f"m{i + 1}" for i in range(len(basis))])


def _same_span(basis, parts) -> bool:
    if not basis:
        return not parts
    cols = la.transpose([_flatten(b) for b in basis])
    for p in parts:
        if la.solve_affine(cols, _flatten(p)) is None:
            return False
    return la.rank([_flatten(p) for p in parts]) == len(parts)


def symbolic_metric(pair: HomogeneousPair) -> la.Matrix:
    fam = invariant_metric_family(pair)
    return fam.member()


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _monomial_sqrt(value: Scalar, sign: int):
    """sqrt(sign*value) when it is c*monomial with square c and even exponents."""
    if isinstance(value, Fraction):
        return rational_sqrt(sign * value)
    if len(value.num) != 1 or len(value.den) != 1:
        return None
    (mn, cn), = value.num.items()
    (md, cd), = value.den.items()
    if any(e % 2 for _, e in mn) or any(e % 2 for _, e in md):
        return None
    c = rational_sqrt(Fraction(sign * cn, cd))
    if c is None:
        return None
    root = RatFunc.make({tuple((v, e // 2) for v, e in mn): 1}, {tuple((v, e // 2) for v, e in md): 1})
    return c * root


@dataclass
class MetricOnS:
    """An invariant metric on s with inverse, determinant and sign data.

    ``det_sign`` is the sign of ``det`` at the witness, so ``|det| = det_sign * det``
    on the witness's region.  ``parity`` is the number of negative signs in the
    signature.  ``sqrt_abs_det`` is present only when ``|det|`` has an exact root
    in the working field; ``sqrt_note`` records the sign assumptions it needs.
    """

    mu: la.Matrix
    mu_inv: la.Matrix
    det: Scalar
    parity: int
    det_sign: int
    witness: Dict[str, Fraction]
    sqrt_abs_det: Optional[Scalar] = None
    sqrt_note: str = ""
    names: List[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.mu)

    @property
    def parity_sign(self) -> int:
        return -1 if self.parity % 2 else 1

    @property
    def abs_det(self) -> Scalar:
        return self.det if self.det_sign > 0 else -self.det

    def at(self, assignment) -> "MetricOnS":
        """Numeric instance at a rational point of the parameters."""
        mu = la.evaluate_matrix(self.mu, assignment)
        return metric_instance(mu, {})


def _default_witness(params, det, limit=6):
    if not params:
        return {}
    trial = {p: Fraction(1) for p in params}
    if not is_zero(evaluate(det, trial)):
        return trial
    rng = random.Random(0)
    for _ in range(200):
        trial = {p: Fraction(rng.randint(-limit, limit) or 1) for p in params}
        if not is_zero(evaluate(det, trial)):
            return trial
    raise MetricError("no nondegenerate witness found")


def metric_instance(mu, witness: Optional[Dict[str, object]] = None, sqrt_abs_det: Optional[Scalar] = None) -> MetricOnS:
    """Exact inverse, determinant and signature parity of a (possibly symbolic) metric."""
    mu = [[scalar(x) for x in row] for row in mu]
    params = sorted({v for row in mu for x in row for v in variables(x)})
    inv, d = la.invert_symmetric(mu)
    if witness:
        witness = {k: Fraction(v) for k, v in witness.items()}
        missing = set(params) - set(witness)
        if missing:
            raise MetricError(f"witness lacks {sorted(missing)}")
    else:
        witness = _default_witness(params, d)
    num_mu = la.evaluate_matrix(mu, witness)
    dval = la.det(num_mu)
    if dval == 0:
        raise MetricError("metric is degenerate at the witness")
    pos, neg = la.signature(num_mu)
    sign = 1 if dval > 0 else -1
    if sign != (-1) ** neg:
        raise AssertionError("signature parity disagrees with det sign")
    note = ""
    if sqrt_abs_det is None:
        sqrt_abs_det = _monomial_sqrt(d, sign)
        if sqrt_abs_det is not None and not isinstance(sqrt_abs_det, Fraction):
            if evaluate(sqrt_abs_det, witness) < 0:
                sqrt_abs_det = -sqrt_abs_det
            if not _even_monomial(sqrt_abs_det):
                note = f"valid where {sqrt_abs_det} > 0 (as at the witness)"
    else:
        sqrt_abs_det = scalar(sqrt_abs_det)
        sq = sqrt_abs_det * sqrt_abs_det
        if not is_zero(sq - sign * d):
            raise MetricError("supplied square root does not square to |det|")
    return MetricOnS(mu, inv, d, neg, sign, witness, sqrt_abs_det, note, params)


def _even_monomial(x) -> bool:
    return all(e % 2 == 0 for poly in (x.num, x.den) for m in poly for _, e in m)


def default_metric(pair: HomogeneousPair) -> MetricOnS:
    """The pair's stored metric pattern, or the general invariant family member."""
    if pair.metric_pattern is not None and pair.metric_is_invariant(pair.metric_pattern):
        return metric_instance(pair.metric_pattern)
    return metric_instance(symbolic_metric(pair))


def square_witnesses(mu, count: int, rng: random.Random, span: int = 5) -> List[Dict[str, Fraction]]:
    """Rational parameter points where |det mu| is a nonzero rational square.

    Solves for one parameter in which det is linear when needed; metrics whose
    determinant is ``c * monomial`` with non-square ``c`` admit no such point and
    yield an empty list.
    """
    mu = [[scalar(x) for x in row] for row in mu]
    params = sorted({v for row in mu for x in row for v in variables(x)})
    d = la.det(mu)
    out = []
    linear = [p for p in params if _degree_in(d, p) == 1]
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        point = {p: _rand_q(rng, span) for p in params}
        val = evaluate(d, point) if params else Fraction(d)
        if val != 0 and rational_sqrt(abs(val)) is not None:
            out.append(point)
            continue
        if linear:
            p = linear[0]
            # det = u*p + w  ->  choose p with det = +-t^2
            others = {q: point[q] for q in params if q != p}
            u = evaluate(diff(d, p), others)
            if u == 0:
                continue
            w = evaluate(d, {**others, p: Fraction(0)})
            t = _rand_q(rng, span)
            target = t * t * rng.choice((1, -1))
            point = {**others, p: (target - w) / u}
            if evaluate(d, point) != 0:
                out.append(point)
    return out


def _degree_in(x, name):
    if not isinstance(x, RatFunc):
        return 0
    if any(v == name for m in x.den for v, _ in m):
        return -1
    return max((e for m in x.num for v, e in m if v == name), default=0)


def _rand_q(rng, span):
    while True:
        num = rng.randint(-span, span)
        den = rng.randint(1, 3)
        if num:
            return Fraction(num, den)
