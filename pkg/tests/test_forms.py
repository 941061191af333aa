import random
from fractions import Fraction

import pytest

from invym import catalog
from invym.connection import solve_wang
from invym.field import ZERO
from invym.forms import (
    FormError,
    Frame,
    HValuedForm,
    codifferential,
    codifferential_star,
    curvature,
    curvature_structure,
    d_w,
    graded_commutator,
    hodge_star,
    hodge_star_unscaled,
    inner_product,
    is_ad_invariant,
    perm_sign,
    wedge_pairing,
)
from invym.invmetric import metric_instance, square_witnesses, symbolic_metric
from invym.psc import designated_homomorphism

from conftest import random_form

NO_SQUARE = {"A4", "A5", "B2"}
SQUARE_PAIRS = [c for c in catalog.PAIR_IDS if c not in NO_SQUARE]


def _setup(cid, su2):
    p = catalog.load_pair(cid)
    return p, Frame.of_complement(p), solve_wang(p, designated_homomorphism(p, su2))


def test_perm_sign():
    assert perm_sign([0, 1, 2]) == 1
    assert perm_sign([1, 0, 2]) == -1
    assert perm_sign([2, 0, 1]) == 1


def test_unit_gram_is_ad_invariant(su2, gram):
    assert is_ad_invariant(su2, gram)
    skew = [[ZERO] * 3 for _ in range(3)]
    skew[0][0] = Fraction(1)
    assert not is_ad_invariant(su2, skew)


def test_d_squared_zero_on_algebra(su2, rng):
    for cid in catalog.ALL_IDS:
        g = catalog.load_algebra(cid)
        frame = Frame.of_algebra(g)
        for k in range(min(3, g.dim - 1)):
            phi = random_form(frame, su2, k, rng)
            assert d_w(d_w(phi)).is_zero(), cid


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_bianchi_and_d_squared(cid, su2):
    """d_W F = 0 and d_W d_W phi = [F, phi] at 13 random Wang points per pair (104 in all)."""
    rng = random.Random(100 + catalog.PAIR_IDS.index(cid))
    p, frame, space = _setup(cid, su2)
    for i in range(13):
        W = space.sample(rng)
        assert W.verify()
        F = curvature(p, su2, W.W)
        Ws = W.s_matrix()
        assert d_w(F, Ws).is_zero()
        k = i % 3
        phi = random_form(frame, su2, k, rng)
        assert d_w(d_w(phi, Ws), Ws).equals(graded_commutator(F, phi))


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_curvature_routes_agree(cid, su2, rng):
    p, frame, space = _setup(cid, su2)
    W = space.sample(rng)
    assert curvature(p, su2, W.W).equals(curvature_structure(p, su2, W.W))


def test_curvature_vanishes_for_homomorphism(su2):
    # A5: the unique Wang map is a Lie algebra homomorphism
    p, frame, space = _setup("A5", su2)
    assert curvature(p, su2, space.particular().W).is_zero()


@pytest.mark.parametrize("cid", SQUARE_PAIRS)
def test_star_star_at_square_witnesses(cid, su2):
    p = catalog.load_pair(cid)
    frame = Frame.of_complement(p)
    M = metric_instance(symbolic_metric(p))
    rng = random.Random(7)
    ws = square_witnesses(M.mu, 20, rng)
    assert len(ws) == 20
    n = 4
    for w in ws:
        Mw = M.at(w)
        assert Mw.sqrt_abs_det is not None
        for k in range(n + 1):
            phi = random_form(frame, su2, k, rng)
            ss = hodge_star(hodge_star(phi, Mw), Mw)
            assert ss.equals(phi.scale((-1) ** (k * (n - k)) * Mw.parity_sign)), (cid, w, k)


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_star_star_symbolic_factored(cid, su2, rng):
    """S(S phi) |det| = (-1)^(k(n-k)) (-1)^mu phi, also where |det| has no rational root."""
    p = catalog.load_pair(cid)
    frame = Frame.of_complement(p)
    M = metric_instance(symbolic_metric(p))
    for k in range(5):
        phi = random_form(frame, su2, k, rng)
        ss = hodge_star_unscaled(hodge_star_unscaled(phi, M), M).scale(M.abs_det)
        assert ss.equals(phi.scale((-1) ** (k * (4 - k)) * M.parity_sign))


@pytest.mark.parametrize("cid", NO_SQUARE)
def test_hodge_star_needs_root(cid, su2, rng):
    p = catalog.load_pair(cid)
    M = metric_instance(symbolic_metric(p))
    phi = random_form(Frame.of_complement(p), su2, 1, rng)
    with pytest.raises(FormError):
        hodge_star(phi, M)


@pytest.mark.parametrize("cid", SQUARE_PAIRS)
def test_codifferential_routes_at_witnesses(cid, su2):
    p, frame, space = _setup(cid, su2)
    M = metric_instance(symbolic_metric(p))
    rng = random.Random(11)
    ws = square_witnesses(M.mu, 20, rng)
    for i, w in enumerate(ws):
        Mw = M.at(w)
        W = space.sample(rng)
        Ws = W.s_matrix()
        for k in (1, 2, 3, 4):
            phi = random_form(frame, su2, k, rng)
            assert codifferential(phi, Ws, Mw).equals(codifferential_star(phi, Ws, Mw)), (cid, k)
        F = curvature(p, su2, W.W)
        assert codifferential(F, Ws, Mw).equals(codifferential_star(F, Ws, Mw))


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_codifferential_routes_symbolic(cid, su2):
    p, frame, space = _setup(cid, su2)
    M = metric_instance(symbolic_metric(p))
    W = space.general()
    F = curvature(p, su2, W.W)
    assert codifferential(F, W.s_matrix(), M).equals(codifferential_star(F, W.s_matrix(), M))


def test_codifferential_rejects_functions(su2, rng):
    p = catalog.load_pair("B3")
    M = metric_instance(symbolic_metric(p))
    with pytest.raises(FormError):
        codifferential(random_form(Frame.of_complement(p), su2, 0, rng), None, M)


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_inner_product_symmetric_and_wedge(cid, su2, gram, rng):
    p = catalog.load_pair(cid)
    frame = Frame.of_complement(p)
    M = metric_instance(symbolic_metric(p))
    for k in range(5):
        phi = random_form(frame, su2, k, rng)
        psi = random_form(frame, su2, k, rng)
        ip = inner_product(phi, psi, M, gram)
        assert ip == inner_product(psi, phi, M, gram)
        # phi ^ *psi = <phi, psi> vol, with the root of |det| divided out
        assert wedge_pairing(phi, hodge_star_unscaled(psi, M), gram) == ip


def test_inner_product_degree_mismatch(su2, gram, rng):
    p = catalog.load_pair("B3")
    frame = Frame.of_complement(p)
    M = metric_instance(symbolic_metric(p))
    with pytest.raises(FormError):
        inner_product(random_form(frame, su2, 1, rng), random_form(frame, su2, 2, rng), M, gram)


def test_form_algebra_basics(su2):
    frame = Frame.of_complement(catalog.load_pair("B3"))
    e = HValuedForm.basis_form(frame, su2, (0, 1), 0)
    assert e.component(0, (1, 0)) == -1
    assert e.scale(0).is_zero()
    assert (e + e).equals(e.scale(2))
