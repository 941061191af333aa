"""h-valued antisymmetric chains and their covariant calculus.

A form of degree k on a frame ``e_1..e_n`` is stored by its components
``phi^a_{b1..bk}`` for strictly increasing index tuples.  Components are those
of the antisymmetric tensor ``phi = phi_{b1..bk} e^b1 (x) ... (x) e^bk``, so
``phi(e_b1, ..., e_bk) = phi_{b1..bk}``.  Wedge and graded commutator use the
``1/(p! q!)`` shuffle normalisation, which gives ``e^1 ^ e^2 = e^1 (x) e^2 - e^2 (x) e^1``.

The frame is either the complement s of a homogeneous pair, with structure
constants projected to s, or a whole Lie algebra g.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import exactla as la
from .field import ONE, ZERO, Scalar, evaluate, is_zero, scalar, subs, to_text
from .liealg import HomogeneousPair, LieAlgebra

__all__ = [
    "Frame",
    "HValuedForm",
    "FormError",
    "perm_sign",
    "graded_commutator",
    "d_w",
    "curvature",
    "curvature_structure",
    "curvature_full",
    "connection_form",
    "restrict",
    "interior",
    "lie_derivative",
    "twisted_lie_derivative",
    "raise_indices",
    "raised_constants",
    "hodge_star",
    "hodge_star_unscaled",
    "codifferential",
    "codifferential_star",
    "inner_product",
    "wedge_pairing",
    "is_ad_invariant",
]


class FormError(ValueError):
    """Incompatible forms or missing metric data."""


@dataclass(frozen=True)
class Frame:
    """A basis with bracket coefficients ``c[i][j][k]`` used by d and L."""

    n: int
    c: tuple
    names: tuple

    @classmethod
    def of_complement(cls, pair: HomogeneousPair) -> "Frame":
        cs = pair.s_constants()
        names = tuple(pair.g.names[i] for i in pair.s_indices)
        return cls(pair.dim_s, _freeze(cs), names)

    @classmethod
    def of_algebra(cls, g: LieAlgebra) -> "Frame":
        return cls(g.dim, _freeze(g.c), tuple(g.names))


def _freeze(c):
    return tuple(tuple(tuple(row) for row in plane) for plane in c)


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 when an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class HValuedForm:
    """An h-valued k-chain on a frame, keyed by (h index, increasing tuple)."""

    __slots__ = ("frame", "h", "degree", "comps")

    def __init__(self, frame: Frame, h: LieAlgebra, degree: int, comps: Optional[Dict] = None):
        if degree < 0:
            raise FormError("negative degree")
        self.frame = frame
        self.h = h
        self.degree = degree
        self.comps = {}
        for (a, idx), v in (comps or {}).items():
            v = scalar(v)
            if is_zero(v):
                continue
            s = perm_sign(idx)
            if s == 0:
                continue
            key = (a, tuple(sorted(idx)))
            val = self.comps.get(key, ZERO) + (v if s > 0 else -v)
            if is_zero(val):
                self.comps.pop(key, None)
            else:
                self.comps[key] = val

    # -- construction helpers ---------------------------------------------
    @classmethod
    def zero(cls, frame, h, degree):
        return cls(frame, h, degree)

    @classmethod
    def basis_form(cls, frame, h, idx: Sequence[int], a: int, coeff=ONE):
        """``coeff * e^{i1} ^ ... ^ e^{ik} (x) f_a`` (0-based indices)."""
        return cls(frame, h, len(idx), {(a, tuple(idx)): coeff})

    def like(self, degree, comps):
        return HValuedForm(self.frame, self.h, degree, comps)

    # -- access -------------------------------------------------------------
    def component(self, a: int, idx: Sequence[int]) -> Scalar:
        s = perm_sign(idx)
        if s == 0:
            return ZERO
        v = self.comps.get((a, tuple(sorted(idx))), ZERO)
        return v if s > 0 else -v

    def value(self, idx: Sequence[int]) -> List[Scalar]:
        """The h-vector phi(e_i1, ..., e_ik)."""
        return [self.component(a, idx) for a in range(self.h.dim)]

    def index_tuples(self) -> Iterable[Tuple[int, ...]]:
        return combinations(range(self.frame.n), self.degree)

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other):
        if other.frame != self.frame or other.h is not self.h and other.h.c != self.h.c:
            raise FormError("forms live on different frames or algebras")

    def __add__(self, other: "HValuedForm"):
        self._check(other)
        if other.degree != self.degree:
            raise FormError("cannot add forms of different degree")
        comps = dict(self.comps)
        for k, v in other.comps.items():
            val = comps.get(k, ZERO) + v
            if is_zero(val):
                comps.pop(k, None)
            else:
                comps[k] = val
        out = self.like(self.degree, {})
        out.comps = comps
        return out

    def __neg__(self):
        out = self.like(self.degree, {})
        out.comps = {k: -v for k, v in self.comps.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HValuedForm":
        c = scalar(c)
        if is_zero(c):
            return self.like(self.degree, {})
        out = self.like(self.degree, {})
        out.comps = {k: c * v for k, v in self.comps.items()}
        return out

    def is_zero(self) -> bool:
        return not self.comps

    def equals(self, other) -> bool:
        return (self - other).is_zero()

    def map_scalars(self, fn) -> "HValuedForm":
        return self.like(self.degree, {k: fn(v) for k, v in self.comps.items()})

    def evaluate(self, assignment) -> "HValuedForm":
        return self.map_scalars(lambda v: evaluate(v, assignment))

    def subs(self, mapping) -> "HValuedForm":
        return self.map_scalars(lambda v: subs(v, mapping))

    def serialize(self) -> List[list]:
        """Rows ``[h index, [frame indices], scalar text]``, all 1-based."""
        return [[a + 1, [i + 1 for i in idx], to_text(v)] for (a, idx), v in sorted(self.comps.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    def __repr__(self):
        terms = ", ".join(f"{self.h.names[a]}_{''.join(str(i + 1) for i in idx)}: {to_text(v)}" for (a, idx), v in sorted(self.comps.items()))
        return f"HValuedForm(deg={self.degree}, {{{terms}}})"


def _shuffles(idx, p):
    """Split ``idx`` into (J, K) with |J| = p, yielding the shuffle sign."""
    for pos in combinations(range(len(idx)), p):
        rest = [i for i in range(len(idx)) if i not in pos]
        sign = perm_sign(list(pos) + rest)
        yield sign, tuple(idx[i] for i in pos), tuple(idx[i] for i in rest)


def graded_commutator(phi: HValuedForm, psi: HValuedForm) -> HValuedForm:
    """``[phi, psi]`` with the h bracket applied to the values."""
    phi._check(psi)
    p, q = phi.degree, psi.degree
    n = phi.frame.n
    deg = p + q
    out = {}
    if deg > n:
        return phi.like(deg, {})
    h = phi.h
    for idx in combinations(range(n), deg):
        total = [ZERO] * h.dim
        for sign, J, K in _shuffles(idx, p):
            u = phi.value(J)
            if all(is_zero(x) for x in u):
                continue
            v = psi.value(K)
            if all(is_zero(x) for x in v):
                continue
            br = h.bracket(u, v)
            total = [t + sign * b for t, b in zip(total, br)]
        for a, t in enumerate(total):
            if not is_zero(t):
                out[(a, idx)] = t
    return phi.like(deg, out)


def _w_column(W, alpha):
    return [row[alpha] for row in W]


def d_w(phi: HValuedForm, W: Optional[la.Matrix] = None) -> HValuedForm:
    """Exterior covariant derivative on the frame.

    ``W`` is the dim(h) x n matrix of connection components on the frame, or
    None for the trivial-coefficient differential.
    """
    frame, h = phi.frame, phi.h
    k = phi.degree
    n = frame.n
    c = frame.c
    out = {}
    if k + 1 > n:
        return phi.like(k + 1, {})
    for idx in combinations(range(n), k + 1):
        total = [ZERO] * h.dim
        if W is not None:
            for i in range(k + 1):
                w = _w_column(W, idx[i])
                if all(is_zero(x) for x in w):
                    continue
                rest = idx[:i] + idx[i + 1:]
                val = phi.value(rest)
                if all(is_zero(x) for x in val):
                    continue
                br = h.bracket(w, val)
                sign = 1 if i % 2 == 0 else -1
                total = [t + sign * b for t, b in zip(total, br)]
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                coeffs = c[idx[i]][idx[j]]
                rest = idx[:i] + idx[i + 1:j] + idx[j + 1:]
                sign = 1 if (i + j) % 2 == 0 else -1
                for alpha, cf in enumerate(coeffs):
                    if is_zero(cf):
                        continue
                    val = phi.value((alpha,) + rest)
                    for a in range(h.dim):
                        if not is_zero(val[a]):
                            total[a] = total[a] + sign * cf * val[a]
        for a, t in enumerate(total):
            if not is_zero(t):
                out[(a, idx)] = t
    return phi.like(k + 1, out)


def curvature(pair: HomogeneousPair, h: LieAlgebra, W_full: la.Matrix) -> HValuedForm:
    """``F(s_a, s_b) = [W s_a, W s_b] - W [s_a, s_b]`` on the complement frame.

    ``W_full`` is the dim(h) x dim(g) matrix of the Wang map on all of g.
    """
    frame = Frame.of_complement(pair)
    out = {}
    for al, be in combinations(range(pair.dim_s), 2):
        sa, sb = pair.s_indices[al], pair.s_indices[be]
        wa, wb = _w_column(W_full, sa), _w_column(W_full, sb)
        val = h.bracket(wa, wb)
        brk = pair.g.basis_bracket(sa, sb)
        wbr = la.matvec(W_full, brk)
        for a in range(h.dim):
            v = val[a] - wbr[a]
            if not is_zero(v):
                out[(a, (al, be))] = v
    return HValuedForm(frame, h, 2, out)


def connection_form(frame: Frame, h: LieAlgebra, W: la.Matrix) -> HValuedForm:
    """The h-valued 1-form whose value on e_i is column i of ``W``."""
    return HValuedForm(frame, h, 1, {(a, (i,)): W[a][i] for a in range(h.dim) for i in range(frame.n)})


def curvature_full(g: LieAlgebra, h: LieAlgebra, W_full: la.Matrix) -> HValuedForm:
    """``dW + 1/2 [W, W]`` on the frame of the whole algebra g."""
    frame = Frame.of_algebra(g)
    w = connection_form(frame, h, W_full)
    return d_w(w) + graded_commutator(w, w).scale(Fraction(1, 2))


def curvature_structure(pair: HomogeneousPair, h: LieAlgebra, W_full: la.Matrix) -> HValuedForm:
    """Curvature via the structure equation on g, restricted to the complement."""
    F = curvature_full(pair.g, h, W_full)
    return restrict(F, pair.s_indices, Frame.of_complement(pair))


def restrict(phi: HValuedForm, indices: Sequence[int], frame: Optional[Frame] = None) -> HValuedForm:
    """Components of ``phi`` on the sub-basis ``indices``, renumbered 0..m-1."""
    pos = {g: i for i, g in enumerate(indices)}
    out = {}
    for (a, idx), v in phi.comps.items():
        if all(i in pos for i in idx):
            out[(a, tuple(pos[i] for i in idx))] = v
    if frame is None:
        frame = Frame(len(indices), (), tuple(phi.frame.names[i] for i in indices))
    return HValuedForm(frame, phi.h, phi.degree, out)


def interior(x: Sequence[Scalar], phi: HValuedForm) -> HValuedForm:
    """``(i_x phi)(y2..yk) = phi(x, y2, ..., yk)``."""
    k = phi.degree
    if k == 0:
        return phi.like(0, {})
    out = {}
    for idx in combinations(range(phi.frame.n), k - 1):
        for a in range(phi.h.dim):
            total = ZERO
            for i, xi in enumerate(x):
                if is_zero(xi):
                    continue
                v = phi.component(a, (i,) + idx)
                if not is_zero(v):
                    total = total + xi * v
            if not is_zero(total):
                out[(a, idx)] = total
    return phi.like(k - 1, out)


def lie_derivative(action: la.Matrix, phi: HValuedForm, y: Optional[Sequence[Scalar]] = None) -> HValuedForm:
    """``L phi + [y, phi]`` where ``action`` is the matrix of ad(x) on the frame.

    ``(L phi)(e_b1..e_bk) = -sum_i phi(.., action e_bi, ..)``; column j of
    ``action`` is the image of e_j.
    """
    k = phi.degree
    n = phi.frame.n
    out = {}
    for idx in combinations(range(n), k):
        for a in range(phi.h.dim):
            total = ZERO
            for i in range(k):
                col = idx[i]
                for g in range(n):
                    coef = action[g][col]
                    if is_zero(coef):
                        continue
                    v = phi.component(a, idx[:i] + (g,) + idx[i + 1:])
                    if not is_zero(v):
                        total = total - coef * v
            if not is_zero(total):
                out[(a, idx)] = total
    result = phi.like(k, out)
    if y is not None and any(not is_zero(t) for t in y):
        result = result + graded_commutator(HValuedForm(phi.frame, phi.h, 0, {(a, ()): t for a, t in enumerate(y)}), phi)
    return result


def twisted_lie_derivative(pair: HomogeneousPair, kvec: Sequence[Scalar], phi: HValuedForm, lambda_star: la.Matrix) -> HValuedForm:
    """``L_x phi + [lambda_*(x), phi]`` for x in k, acting on s-frame forms."""
    n = pair.dim_s
    action = la.zeros(n, n)
    for t, coef in enumerate(kvec):
        if is_zero(coef):
            continue
        for i in range(n):
            for j in range(n):
                if not is_zero(pair.rho_s[t][i][j]):
                    action[i][j] = action[i][j] + coef * pair.rho_s[t][i][j]
    y = la.matvec(lambda_star, kvec)
    return lie_derivative(action, phi, y)


# ---------------------------------------------------------------------------
# metric operations
# ---------------------------------------------------------------------------

def _minor(m, rows, cols):
    return la.det([[m[r][c] for c in cols] for r in rows])


def raise_indices(phi: HValuedForm, mu_inv: la.Matrix) -> Dict[Tuple[int, Tuple[int, ...]], Scalar]:
    """All-upper components ``phi^{a B}`` for increasing B, via minors of mu_inv."""
    k = phi.degree
    n = phi.frame.n
    by_idx: Dict[Tuple[int, ...], Dict[int, Scalar]] = {}
    for (a, idx), v in phi.comps.items():
        by_idx.setdefault(idx, {})[a] = v
    minors = {}
    out = {}
    for B in combinations(range(n), k):
        for C, vals in by_idx.items():
            key = (B, C)
            if key not in minors:
                minors[key] = _minor(mu_inv, B, C) if k else ONE
            mnr = minors[key]
            if is_zero(mnr):
                continue
            for a, v in vals.items():
                out[(a, B)] = out.get((a, B), ZERO) + mnr * v
    return {k2: v for k2, v in out.items() if not is_zero(v)}


def hodge_star_unscaled(phi: HValuedForm, metric) -> HValuedForm:
    """Hodge star without the ``|det mu|^(1/2)`` factor."""
    n = phi.frame.n
    k = phi.degree
    up = raise_indices(phi, metric.mu_inv)
    out = {}
    for (a, B), v in up.items():
        A = tuple(i for i in range(n) if i not in B)
        out[(a, A)] = perm_sign(B + A) * v
    return phi.like(n - k, out)


def hodge_star(phi: HValuedForm, metric) -> HValuedForm:
    """``(*phi)_A = |mu|^(1/2) phi^{B} eps_{B A}`` with ``eps_{12..n} = 1``."""
    if metric.sqrt_abs_det is None:
        raise FormError("Hodge star needs an exact square root of |det mu|; use hodge_star_unscaled")
    return hodge_star_unscaled(phi, metric).scale(metric.sqrt_abs_det)


def raised_constants(frame: Frame, metric):
    """``C^{ab}_g = mu^{ar} mu^{bs} mu_{gl} c_{rs}^l`` on the frame."""
    n = frame.n
    mu, mi = metric.mu, metric.mu_inv
    c = frame.c
    # lower the result index first: c_{rs g} = c_{rs}^l mu_{lg}
    low = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for r in range(n):
        for s in range(n):
            for l in range(n):
                cf = c[r][s][l]
                if is_zero(cf):
                    continue
                for g in range(n):
                    if not is_zero(mu[l][g]):
                        low[r][s][g] = low[r][s][g] + cf * mu[l][g]
    # raise r then s
    half = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for r in range(n):
            if is_zero(mi[a][r]):
                continue
            for s in range(n):
                for g in range(n):
                    if not is_zero(low[r][s][g]):
                        half[a][s][g] = half[a][s][g] + mi[a][r] * low[r][s][g]
    out = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for s in range(n):
                if is_zero(mi[b][s]):
                    continue
                for g in range(n):
                    if not is_zero(half[a][s][g]):
                        out[a][b][g] = out[a][b][g] + mi[b][s] * half[a][s][g]
    return out


def codifferential(phi: HValuedForm, W: Optional[la.Matrix], metric) -> HValuedForm:
    """Codifferential by the component formula (no square roots).

    ``(delta phi)^c_{s1..s(k-1)} = ((-1)^(k+1) (k+1)/2) phi^c_[s1..sk C^{sk s(k+1)}_s(k+1)]
    - W^{a t} phi^b_{t s1..} r_ab^c`` where the bracket antisymmetrises the k+1
    lower slots with unit weight, the last two slots contract with the two
    upper indices of C, and ``W^{a t} = W^a_r mu^{r t}``.
    """
    k = phi.degree
    if k < 1:
        raise FormError("codifferential needs degree >= 1")
    frame, h = phi.frame, phi.h
    n = frame.n
    C = raised_constants(frame, metric)
    pref = Fraction((-1) ** (k + 1), 2)
    out = {}
    for sig in combinations(range(n), k - 1):
        total = [ZERO] * h.dim
        # first term: sum over contracted pairs (t, u) and the slot j moved to C
        for t in range(n):
            for u in range(n):
                y = sig + (t, u)
                for j in range(k + 1):
                    cf = C[t][u][y[j]]
                    if is_zero(cf):
                        continue
                    rest = y[:j] + y[j + 1:]
                    sign = 1 if (k + 1 - (j + 1)) % 2 == 0 else -1
                    val = phi.value(rest)
                    for a in range(h.dim):
                        if not is_zero(val[a]):
                            total[a] = total[a] + pref * sign * cf * val[a]
        # second term
        if W is not None:
            mi = metric.mu_inv
            for t in range(n):
                wt = [ZERO] * h.dim
                for a in range(h.dim):
                    acc = ZERO
                    for r in range(n):
                        if not is_zero(W[a][r]) and not is_zero(mi[r][t]):
                            acc = acc + W[a][r] * mi[r][t]
                    wt[a] = acc
                if all(is_zero(x) for x in wt):
                    continue
                val = phi.value((t,) + sig)
                if all(is_zero(x) for x in val):
                    continue
                br = h.bracket(wt, val)
                total = [x - b for x, b in zip(total, br)]
        for a, v in enumerate(total):
            if not is_zero(v):
                out[(a, sig)] = v
    return phi.like(k - 1, out)


def codifferential_star(phi: HValuedForm, W: Optional[la.Matrix], metric) -> HValuedForm:
    """``-(-1)^mu (-1)^(n(k+1)) * d_W *`` with the two |mu|^(1/2) factors combined."""
    k = phi.degree
    n = phi.frame.n
    s1 = hodge_star_unscaled(phi, metric)
    s2 = hodge_star_unscaled(d_w(s1, W), metric)
    sign = -metric.parity_sign * (-1) ** (n * (k + 1))
    return s2.scale(sign * metric.abs_det)


def inner_product(phi: HValuedForm, psi: HValuedForm, metric, m: la.Matrix) -> Scalar:
    """``(1/k!) phi^a_{B} psi^{b B} m_ab`` summed over all orderings."""
    if phi.degree != psi.degree:
        raise FormError("inner product of forms of different degree")
    up = raise_indices(psi, metric.mu_inv)
    total = ZERO
    for (a, B), v in phi.comps.items():
        for b in range(phi.h.dim):
            w = up.get((b, B))
            if w is None or is_zero(m[a][b]):
                continue
            total = total + v * w * m[a][b]
    return total


def wedge_pairing(phi: HValuedForm, chi: HValuedForm, m: la.Matrix) -> Scalar:
    """Coefficient of ``e^1 ^ ... ^ e^n`` in ``m(phi ^ chi)`` for complementary degrees."""
    n = phi.frame.n
    if phi.degree + chi.degree != n:
        raise FormError("wedge pairing needs complementary degrees")
    total = ZERO
    for A in combinations(range(n), phi.degree):
        Ac = tuple(i for i in range(n) if i not in A)
        sign = perm_sign(A + Ac)
        for a in range(phi.h.dim):
            u = phi.component(a, A)
            if is_zero(u):
                continue
            for b in range(phi.h.dim):
                if is_zero(m[a][b]):
                    continue
                v = chi.component(b, Ac)
                if not is_zero(v):
                    total = total + sign * u * v * m[a][b]
    return total


def is_ad_invariant(h: LieAlgebra, m: la.Matrix) -> bool:
    """``m([x,y],z) + m(y,[x,z]) = 0`` on basis triples."""
    for x in range(h.dim):
        adx = h.ad(h.basis(x))
        lhs = la.matmul(la.transpose(adx), m)
        rhs = la.matmul(m, adx)
        if not la.is_zero_matrix([[p + q for p, q in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]):
            return False
    return True
