"""Wang maps (invariant connections), reductivity tests and canonical connections."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence

from . import exactla as la
from .field import ONE, ZERO, Scalar, is_zero, scalar, var
from .liealg import BundleHomomorphism, HomogeneousPair, LieAlgebra, LieError, change_basis

__all__ = [
    "WangMap",
    "WangSolutionSpace",
    "InvariantComplement",
    "FeasibilityReport",
    "solve_wang",
    "nontrivial_bundle_feasible",
    "sample_homomorphisms",
    "find_invariant_complement",
    "canonical_wang",
    "adapted_pair",
]


@dataclass
class WangMap:
    """A linear map W : g -> h stored as a dim(h) x dim(g) matrix."""

    pair: HomogeneousPair
    hom: BundleHomomorphism
    W: la.Matrix

    @property
    def h(self) -> LieAlgebra:
        return self.hom.h

    def column(self, i: int) -> List[Scalar]:
        return [row[i] for row in self.W]

    def apply(self, v: Sequence[Scalar]) -> List[Scalar]:
        return la.matvec(self.W, v)

    def s_matrix(self) -> la.Matrix:
        """Components W^a_alpha on the complement basis."""
        return [[row[i] for i in self.pair.s_indices] for row in self.W]

    def restricts_to_lambda(self) -> bool:
        for t, ki in enumerate(self.pair.k_indices):
            if any(not is_zero(x - y) for x, y in zip(self.column(ki), self.hom.image(t))):
                return False
        return True

    def equivariance_defects(self) -> List[tuple]:
        """(k generator, basis index) pairs where [lambda(x), W v] != W [x, v]."""
        bad = []
        g = self.pair.g
        for t, ki in enumerate(self.pair.k_indices):
            lam = self.hom.image(t)
            for j in range(g.dim):
                lhs = self.h.bracket(lam, self.column(j))
                rhs = self.apply(g.basis_bracket(ki, j))
                if any(not is_zero(x - y) for x, y in zip(lhs, rhs)):
                    bad.append((t, j))
        return bad

    def verify(self) -> bool:
        return self.restricts_to_lambda() and not self.equivariance_defects()

    def substitute(self, mapping) -> "WangMap":
        from .field import subs

        return WangMap(self.pair, self.hom, [[subs(x, mapping) for x in row] for row in self.W])


@dataclass
class WangSolutionSpace:
    """Affine space of Wang maps extending a fixed lambda_*.

    Unknown ``a * dim_s + alpha`` is W^a_alpha.  ``affine`` is None when no
    Wang map exists.
    """

    pair: HomogeneousPair
    hom: BundleHomomorphism
    affine: Optional[la.AffineSpace]

    @property
    def is_empty(self) -> bool:
        return self.affine is None

    @property
    def dim(self) -> Optional[int]:
        return None if self.affine is None else self.affine.free_dim

    def _to_map(self, vec) -> WangMap:
        p, h = self.pair, self.hom.h
        W = la.zeros(h.dim, p.g.dim)
        for t, ki in enumerate(p.k_indices):
            for a in range(h.dim):
                W[a][ki] = self.hom.lambda_star[a][t]
        for a in range(h.dim):
            for al, si in enumerate(p.s_indices):
                W[a][si] = vec[a * p.dim_s + al]
        return WangMap(p, self.hom, W)

    def point(self, coeffs: Sequence[Scalar]) -> WangMap:
        if self.affine is None:
            raise LieError("no Wang maps exist for this homomorphism")
        return self._to_map(self.affine.point([scalar(c) for c in coeffs]))

    def particular(self) -> WangMap:
        return self.point([ZERO] * self.dim)

    def general(self, prefix: str = "t") -> WangMap:
        """Symbolic member with free coefficients ``t1, t2, ...``."""
        return self.point([var(f"{prefix}{i + 1}") for i in range(self.dim)])

    def parameter_names(self, prefix: str = "t") -> List[str]:
        return [f"{prefix}{i + 1}" for i in range(self.dim or 0)]

    def component_names(self) -> List[str]:
        """Name each free coefficient ``W<a>_<alpha>`` after the component it equals.

        Falls back to ``t<i>`` for a direction with no such component.
        """
        if self.affine is None:
            return []
        dirs = self.affine.directions
        ns = self.pair.dim_s
        names = []
        for i, d in enumerate(dirs):
            name = f"t{i + 1}"
            for col, x in enumerate(d):
                if x == ONE and is_zero(self.affine.particular[col]) and all(
                        is_zero(o[col]) for j, o in enumerate(dirs) if j != i):
                    name = f"W{col // ns + 1}_{col % ns + 1}"
                    break
            names.append(name)
        return names

    def general_named(self) -> WangMap:
        """Symbolic member whose free coefficients are named by :meth:`component_names`."""
        return self.point([var(n) for n in self.component_names()])

    def sample(self, rng: random.Random, span: int = 4) -> WangMap:
        coeffs = [Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(self.dim)]
        return self.point(coeffs)

    def vanishing_subspace(self) -> List[List[Scalar]]:
        """Basis (in g coordinates) of the s-vectors killed by every solution."""
        if self.affine is None:
            return []
        p, h = self.pair, self.hom.h
        rows = []
        vecs = [self.affine.particular] + list(self.affine.directions)
        for vec in vecs:
            for a in range(h.dim):
                rows.append([vec[a * p.dim_s + al] for al in range(p.dim_s)])
        ker = la.nullspace(rows, p.dim_s)
        out = []
        for v in ker:
            full = [ZERO] * p.g.dim
            for al, si in enumerate(p.s_indices):
                full[si] = v[al]
            out.append(full)
        return out


def solve_wang(pair: HomogeneousPair, hom: BundleHomomorphism) -> WangSolutionSpace:
    """All W : g -> h with W|_k = lambda_* and [lambda_*(x), W v] = W [x, v]."""
    if not hom.is_homomorphism():
        raise LieError("lambda_* is not a Lie algebra homomorphism")
    h = hom.h
    ns, nh = pair.dim_s, h.dim
    nunk = nh * ns
    rows, rhs = [], []
    for t, ki in enumerate(pair.k_indices):
        lam = hom.image(t)
        # ad(lambda(x)) on h: column b is [lam, f_b]
        adl = h.ad(lam)
        rho = pair.rho_s[t]
        for j, sj in enumerate(pair.s_indices):
            brk = pair.g.basis_bracket(ki, sj)
            target = hom.apply(pair.proj_k(brk))
            for c in range(nh):
                row = [ZERO] * nunk
                for b in range(nh):
                    if not is_zero(adl[c][b]):
                        row[b * ns + j] = row[b * ns + j] + adl[c][b]
                for al in range(ns):
                    if not is_zero(rho[al][j]):
                        row[c * ns + al] = row[c * ns + al] - rho[al][j]
                rows.append(row)
                rhs.append(target[c])
    affine = la.solve_affine(rows, rhs, nunk) if rows else la.solve_affine([], [], nunk)
    return WangSolutionSpace(pair, hom, affine)


# ---------------------------------------------------------------------------
# sampling of homomorphisms
# ---------------------------------------------------------------------------

GRID = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2))


def sample_homomorphisms(pair: HomogeneousPair, h: LieAlgebra, rng: random.Random, extra: int = 5) -> List[BundleHomomorphism]:
    """Nonzero lambda_* with image in the line through the first h basis vector.

    For su(2) every abelian image is conjugate into <f1>, so this covers all
    candidates up to conjugation and scale choices.  Each nonempty set of k
    generators is sent to c * f1 for c in a fixed grid plus ``extra`` random
    rationals; non-homomorphisms are discarded.
    """
    values = list(GRID)
    while len(values) < len(GRID) + extra:
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        if q and q not in values:
            values.append(q)
    out = []
    f1 = [ONE] + [ZERO] * (h.dim - 1)
    for size in range(1, pair.dim_k + 1):
        for subset in combinations(range(pair.dim_k), size):
            for v in values:
                images = {t: [v * x for x in f1] for t in subset}
                hom = BundleHomomorphism.from_images(pair, h, images)
                if hom.verified:
                    out.append(hom)
    return out


@dataclass
class FeasibilityReport:
    pair_id: str
    tried: int
    feasible: List[tuple] = field(default_factory=list)  # (hom, dim)
    infeasible: List[BundleHomomorphism] = field(default_factory=list)

    @property
    def any_feasible(self) -> bool:
        return bool(self.feasible)


def nontrivial_bundle_feasible(pair: HomogeneousPair, h: LieAlgebra, rng: Optional[random.Random] = None) -> FeasibilityReport:
    """Solve the Wang equations for every sampled nonzero lambda_*."""
    rng = rng or random.Random(0)
    homs = sample_homomorphisms(pair, h, rng)
    report = FeasibilityReport(pair.id, len(homs))
    for hom in homs:
        space = solve_wang(pair, hom)
        if space.is_empty:
            report.infeasible.append(hom)
        else:
            report.feasible.append((hom, space.dim))
    return report


# ---------------------------------------------------------------------------
# invariant complements and canonical connections
# ---------------------------------------------------------------------------

@dataclass
class InvariantComplement:
    """A complement ``{v + phi(v) : v in s0}`` with ``Ad(k)`` mapping it into k0 + itself.

    ``phi`` is dim(k) x dim(s), in k coordinates; ``basis`` holds the
    complement vectors in g coordinates.
    """

    pair: HomogeneousPair
    k0: List[List[Scalar]]
    phi: la.Matrix
    basis: List[List[Scalar]]


def _k_ad(pair: HomogeneousPair, t: int) -> la.Matrix:
    """Matrix of ad(k_t) restricted to k, in k coordinates."""
    m = la.zeros(pair.dim_k, pair.dim_k)
    for u in range(pair.dim_k):
        col = pair.k_bracket(t, u)
        for r in range(pair.dim_k):
            m[r][u] = col[r]
    return m


def _normalize_k0(pair, k0) -> List[List[Scalar]]:
    if k0 is None:
        return []
    vecs = []
    for item in k0:
        if isinstance(item, int):
            v = [ZERO] * pair.dim_k
            v[item] = ONE
        else:
            v = [scalar(x) for x in item]
        vecs.append(v)
    if vecs and la.rank(vecs) < len(vecs):
        vecs = la.column_space(la.transpose(vecs))
    return vecs


def _is_ideal(pair, k0) -> bool:
    if not k0:
        return True
    span = la.transpose(k0)
    for t in range(pair.dim_k):
        adk = _k_ad(pair, t)
        for v in k0:
            w = la.matvec(adk, v)
            if la.solve_affine(span, w) is None:
                return False
    return True


def find_invariant_complement(pair: HomogeneousPair, k0=None) -> Optional[InvariantComplement]:
    """Look for a complement certifying k0-reductivity (k0 = 0: plain reductivity).

    ``k0`` is a list of k-generator positions or of vectors in k coordinates and
    must span an ideal of k.  Returns None when no complement exists.
    """
    k0 = _normalize_k0(pair, k0)
    if not _is_ideal(pair, k0):
        raise LieError("k0 is not an ideal of k")
    nk, ns = pair.dim_k, pair.dim_s
    # annihilator of k0 inside k*
    ann = la.nullspace(k0, nk) if k0 else [[ONE if i == j else ZERO for i in range(nk)] for j in range(nk)]
    nunk = nk * ns
    rows, rhs = [], []
    for t, ki in enumerate(pair.k_indices):
        adk = _k_ad(pair, t)
        rho = pair.rho_s[t]
        for al, sa in enumerate(pair.s_indices):
            const = pair.proj_k(pair.g.basis_bracket(ki, sa))
            # expr_r = const_r + sum_u adk[r][u] phi[u][al] - sum_b rho[b][al] phi[r][b]
            for y in ann:
                row = [ZERO] * nunk
                rhs_val = ZERO
                for r in range(nk):
                    if is_zero(y[r]):
                        continue
                    rhs_val = rhs_val - y[r] * const[r]
                    for u in range(nk):
                        if not is_zero(adk[r][u]):
                            row[u * ns + al] = row[u * ns + al] + y[r] * adk[r][u]
                    for b in range(ns):
                        if not is_zero(rho[b][al]):
                            row[r * ns + b] = row[r * ns + b] - y[r] * rho[b][al]
                rows.append(row)
                rhs.append(rhs_val)
    sol = la.solve_affine(rows, rhs, nunk)
    if sol is None:
        return None
    vec = sol.particular
    phi = [[vec[u * ns + al] for al in range(ns)] for u in range(nk)]
    basis = []
    for al, sa in enumerate(pair.s_indices):
        v = [ZERO] * pair.g.dim
        v[sa] = ONE
        for u, ku in enumerate(pair.k_indices):
            v[ku] = v[ku] + phi[u][al]
        basis.append(v)
    return InvariantComplement(pair, k0, phi, basis)


def complement_condition_holds(pair: HomogeneousPair, comp: InvariantComplement, k0=None) -> bool:
    """Check ``proj_k [x, v + phi v] - phi(proj_s [x, v]) in k0`` directly."""
    k0 = _normalize_k0(pair, k0 if k0 is not None else comp.k0)
    span = la.transpose(k0) if k0 else None
    for t, ki in enumerate(pair.k_indices):
        for al, vec in enumerate(comp.basis):
            brk = pair.g.bracket(pair.g.basis(ki), vec)
            ks = pair.proj_k(brk)
            ss = pair.proj_s(brk)
            corr = la.matvec(comp.phi, ss)
            diff = [x - y for x, y in zip(ks, corr)]
            if all(is_zero(x) for x in diff):
                continue
            if span is None or la.solve_affine(span, diff) is None:
                return False
    return True


def canonical_wang(pair: HomogeneousPair, hom: BundleHomomorphism, complement: InvariantComplement) -> WangMap:
    """The connection equal to lambda_* on k and zero on the complement."""
    kernel = hom.kernel()
    if not complement_condition_holds(pair, complement, kernel or []):
        raise LieError("complement does not certify lambda-reductivity")
    h = hom.h
    W = la.zeros(h.dim, pair.g.dim)
    for t, ki in enumerate(pair.k_indices):
        for a in range(h.dim):
            W[a][ki] = hom.lambda_star[a][t]
    for al, sa in enumerate(pair.s_indices):
        lam_phi = hom.apply([row[al] for row in complement.phi])
        for a in range(h.dim):
            W[a][sa] = -lam_phi[a]
    wm = WangMap(pair, hom, W)
    if not wm.verify():
        raise AssertionError("canonical connection failed the Wang condition")
    return wm


def adapted_pair(pair: HomogeneousPair, complement: InvariantComplement) -> HomogeneousPair:
    """The same pair written in a basis whose s-vectors span ``complement``.

    k-generators keep their positions; each s position holds the matching
    complement vector.
    """
    n = pair.g.dim
    T = la.zeros(n, n)
    for ki in pair.k_indices:
        T[ki][ki] = ONE
    for al, sa in enumerate(pair.s_indices):
        for r in range(n):
            T[r][sa] = complement.basis[al][r]
    g2 = change_basis(pair.g, T, names=list(pair.g.names))
    return HomogeneousPair(g2, list(pair.k_indices), list(pair.s_indices), None, None, None,
                           id=pair.id, notes=dict(pair.notes, complement="invariant"))
