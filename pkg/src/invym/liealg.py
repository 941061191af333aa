"""Lie algebras by structure constants, homogeneous pairs and homomorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import exactla as la
from .field import ONE, ZERO, Scalar, is_zero, scalar

__all__ = [
    "LieAlgebra",
    "HomogeneousPair",
    "BundleHomomorphism",
    "LieError",
    "change_basis",
    "check_jacobi",
    "ad",
]


class LieError(ValueError):
    """Inconsistent Lie algebraic data."""


def _vec(n, i):
    v = [ZERO] * n
    v[i] = ONE
    return v


class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants.

    ``c[i][j][k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.  An optional
    matrix realization assigns a square matrix to each basis vector.
    """

    def __init__(self, names: Sequence[str], c, realization=None, name: str = ""):
        self.names = list(names)
        self.dim = len(self.names)
        self.c = c
        self.realization = realization
        self.name = name

    @classmethod
    def from_brackets(cls, names, brackets, realization=None, name=""):
        """Build from ``{(i, j): {k: coeff}}`` with 0-based indices, i != j."""
        n = len(names)
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        seen = set()
        for (i, j), terms in brackets.items():
            if i == j:
                raise LieError(f"[e{i + 1}, e{i + 1}] must vanish")
            if frozenset((i, j)) in seen:
                raise LieError(f"bracket ({i + 1},{j + 1}) given twice")
            seen.add(frozenset((i, j)))
            for k, v in terms.items():
                v = scalar(v)
                c[i][j][k] = v
                c[j][i][k] = -v
        return cls(names, c, realization, name)

    def nonzero_brackets(self):
        """List of ``(i, j, {k: coeff})`` for i < j with a nonzero bracket."""
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                terms = {k: v for k, v in enumerate(self.c[i][j]) if not is_zero(v)}
                if terms:
                    out.append((i, j, terms))
        return out

    def bracket(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> List[Scalar]:
        n = self.dim
        out = [ZERO] * n
        for i in range(n):
            if is_zero(x[i]):
                continue
            for j in range(n):
                if is_zero(y[j]) or i == j:
                    continue
                coef = x[i] * y[j]
                row = self.c[i][j]
                for k in range(n):
                    if not is_zero(row[k]):
                        out[k] = out[k] + coef * row[k]
        return out

    def basis_bracket(self, i: int, j: int) -> List[Scalar]:
        return list(self.c[i][j])

    def ad(self, x: Sequence[Scalar]) -> la.Matrix:
        """Matrix of ``y -> [x, y]``; column j is ``[x, e_j]``."""
        n = self.dim
        cols = [self.bracket(x, _vec(n, j)) for j in range(n)]
        return la.transpose(cols)

    def basis(self, i: int) -> List[Scalar]:
        return _vec(self.dim, i)

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(
            is_zero(self.c[i][j][k] + self.c[j][i][k])
            for i in range(n) for j in range(n) for k in range(n)
        )

    def check_jacobi(self) -> List[Tuple[int, int, int]]:
        return check_jacobi(self)

    def verify_realization(self) -> bool:
        """True when matrix commutators reproduce the structure constants."""
        if self.realization is None:
            return True
        mats = self.realization
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                comm = _sub(la.matmul(mats[i], mats[j]), la.matmul(mats[j], mats[i]))
                expect = _combine(mats, self.c[i][j])
                if not la.matrices_equal(comm, expect):
                    return False
        return True

    def __repr__(self):
        label = self.name or "LieAlgebra"
        return f"<{label} dim={self.dim}>"


def _sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _combine(mats, coeffs):
    rows = len(mats[0])
    cols = len(mats[0][0])
    out = la.zeros(rows, cols)
    for m, c in zip(mats, coeffs):
        if is_zero(c):
            continue
        for r in range(rows):
            for s in range(cols):
                if not is_zero(m[r][s]):
                    out[r][s] = out[r][s] + c * m[r][s]
    return out


def ad(L: LieAlgebra, x) -> la.Matrix:
    return L.ad(x)


def check_jacobi(L: LieAlgebra) -> List[Tuple[int, int, int]]:
    """Triples i<j<k where the Jacobi identity fails (empty when it holds)."""
    n = L.dim
    bad = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ei, ej, ek = L.basis(i), L.basis(j), L.basis(k)
                t1 = L.bracket(ei, L.bracket(ej, ek))
                t2 = L.bracket(ej, L.bracket(ek, ei))
                t3 = L.bracket(ek, L.bracket(ei, ej))
                if any(not is_zero(a + b + c) for a, b, c in zip(t1, t2, t3)):
                    bad.append((i, j, k))
    return bad


def change_basis(L: LieAlgebra, T: la.Matrix, names=None) -> LieAlgebra:
    """Structure constants in the basis whose i-th vector is column i of ``T``.

    ``T`` holds old-basis coordinates, so ``e'_i = sum_j T[j][i] e_j``.
    """
    n = L.dim
    if la.is_zero_matrix(T) or len(T) != n:
        raise LieError("basis change must be a square invertible matrix")
    try:
        Tinv = la.inverse(T)
    except la.LinAlgError as exc:
        raise LieError("basis change is singular") from exc
    cols = [[T[r][i] for r in range(n)] for i in range(n)]
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            coords = la.matvec(Tinv, L.bracket(cols[i], cols[j]))
            c[i][j] = coords
            c[j][i] = [-x for x in coords]
    realization = None
    if L.realization is not None:
        realization = [_combine(L.realization, col) for col in cols]
    return LieAlgebra(names or [f"e{i + 1}" for i in range(n)], c, realization, L.name)


@dataclass
class HomogeneousPair:
    """A Lie algebra ``g`` split as ``k + s`` along coordinate index sets.

    ``rho_s[t]`` is the matrix of ``proj_s . ad(k_t)`` restricted to ``s``,
    where ``k_t`` is the t-th generator of ``k``.
    """

    g: LieAlgebra
    k_indices: List[int]
    s_indices: List[int]
    rho_s: Optional[List[la.Matrix]] = None
    metric_pattern: Optional[la.Matrix] = None
    metric_det: Optional[Scalar] = None
    id: str = ""
    notes: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        n = self.g.dim
        if sorted(self.k_indices + self.s_indices) != list(range(n)):
            raise LieError("k and s index sets must partition the basis")
        if self.rho_s is None:
            self.rho_s = self.compute_rho_s()

    @property
    def dim_k(self) -> int:
        return len(self.k_indices)

    @property
    def dim_s(self) -> int:
        return len(self.s_indices)

    def proj_k(self, v) -> List[Scalar]:
        return [v[i] for i in self.k_indices]

    def proj_s(self, v) -> List[Scalar]:
        return [v[i] for i in self.s_indices]

    def k_vector(self, t: int) -> List[Scalar]:
        return self.g.basis(self.k_indices[t])

    def s_vector(self, a: int) -> List[Scalar]:
        return self.g.basis(self.s_indices[a])

    def bracket_basis(self, i: int, j: int) -> List[Scalar]:
        return self.g.basis_bracket(i, j)

    def compute_rho_s(self) -> List[la.Matrix]:
        out = []
        for ki in self.k_indices:
            m = la.zeros(self.dim_s, self.dim_s)
            for col, sj in enumerate(self.s_indices):
                image = self.proj_s(self.g.basis_bracket(ki, sj))
                for row in range(self.dim_s):
                    m[row][col] = image[row]
            out.append(m)
        return out

    def verify_rho(self) -> bool:
        return all(la.matrices_equal(a, b) for a, b in zip(self.rho_s, self.compute_rho_s()))

    def k_is_subalgebra(self) -> bool:
        for a in self.k_indices:
            for b in self.k_indices:
                if any(not is_zero(x) for x in self.proj_s(self.g.basis_bracket(a, b))):
                    return False
        return True

    def k_bracket(self, t: int, u: int) -> List[Scalar]:
        """Coordinates (in the k basis) of [k_t, k_u]."""
        return self.proj_k(self.g.basis_bracket(self.k_indices[t], self.k_indices[u]))

    def s_constants(self):
        """``cs[a][b][c]``: coefficient of s_c in proj_s [s_a, s_b]."""
        m = self.dim_s
        out = [[[ZERO] * m for _ in range(m)] for _ in range(m)]
        for a, sa in enumerate(self.s_indices):
            for b, sb in enumerate(self.s_indices):
                out[a][b] = self.proj_s(self.g.basis_bracket(sa, sb))
        return out

    def metric_is_invariant(self, mu) -> bool:
        for r in self.rho_s:
            lhs = la.matmul(la.transpose(r), mu)
            rhs = la.matmul(mu, r)
            if not la.is_zero_matrix([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(lhs, rhs)]):
                return False
        return True

    def __repr__(self):
        return f"<HomogeneousPair {self.id or self.g.name} dim g={self.g.dim} dim k={self.dim_k}>"


@dataclass
class BundleHomomorphism:
    """Infinitesimal isotropy homomorphism ``lambda_* : k -> h``.

    ``lambda_star`` has one column per k generator, written in the h basis.
    """

    pair: HomogeneousPair
    h: LieAlgebra
    lambda_star: la.Matrix
    verified: bool = False

    def __post_init__(self):
        if len(self.lambda_star) != self.h.dim or any(len(r) != self.pair.dim_k for r in self.lambda_star):
            raise LieError("lambda_star must be dim h x dim k")
        self.verified = self.is_homomorphism()

    @classmethod
    def trivial(cls, pair, h):
        return cls(pair, h, la.zeros(h.dim, pair.dim_k))

    @classmethod
    def from_images(cls, pair, h, images: Dict[int, Sequence]):
        """``images`` maps a k-generator position to its image vector in h."""
        m = la.zeros(h.dim, pair.dim_k)
        for t, vec in images.items():
            for a, x in enumerate(vec):
                m[a][t] = scalar(x)
        return cls(pair, h, m)

    def image(self, t: int) -> List[Scalar]:
        return [row[t] for row in self.lambda_star]

    def apply(self, kvec) -> List[Scalar]:
        return la.matvec(self.lambda_star, kvec)

    def is_trivial(self) -> bool:
        return la.is_zero_matrix(self.lambda_star)

    def is_homomorphism(self) -> bool:
        p = self.pair
        for t in range(p.dim_k):
            for u in range(t + 1, p.dim_k):
                lhs = self.apply(p.k_bracket(t, u))
                rhs = self.h.bracket(self.image(t), self.image(u))
                if any(not is_zero(x - y) for x, y in zip(lhs, rhs)):
                    return False
        return True

    def kernel(self) -> List[List[Scalar]]:
        """Basis of ker lambda_* in k coordinates."""
        return la.nullspace(self.lambda_star, self.pair.dim_k)
