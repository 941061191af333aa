import random

import pytest

from invym import catalog
from invym import exactla as la
from invym.connection import (
    InvariantComplement,
    canonical_wang,
    complement_condition_holds,
    find_invariant_complement,
    nontrivial_bundle_feasible,
    sample_homomorphisms,
    solve_wang,
)
from invym.field import ONE, ZERO, is_zero, parse
from invym.liealg import BundleHomomorphism, LieError
from invym.psc import designated_homomorphism

# Kernels and images of ad(x) on g for the isotropy generators, as spans.
AD_SPANS = {
    ("A1", "e5"): (["e3", "e5"], ["e1", "e3", "e5"]),
    ("A2", "e5"): (["e1", "e5"], ["e1", "e2", "e5"]),
    ("A3", "e5"): (["e1", "e5"], ["e1", "e2", "e5"]),
    ("A4", "e5"): (["e3", "e5", "e6"], ["e1", "e3-e5", "e6"]),
    ("A4", "e6"): (["e3", "e5", "e6"], ["e3", "e4", "e6"]),
    ("A5", "e5"): (["e1", "e4", "e5"], ["e2", "e3", "e6", "e7"]),
    ("A5", "e6"): (["e3", "e6", "e7"], ["e1-e5", "e3", "e6", "e7"]),
    ("A5", "e7"): (["2*e1-e5", "e3", "e6", "e7"], ["e3", "e4", "e7"]),
    ("B1", "e5"): (["e4", "e5"], ["e1", "e4", "e5"]),
    ("B2", "e5"): (["e4", "e5", "e6"], ["e1", "e4+e5", "e6"]),
    ("B2", "e6"): (["e4", "e5", "e6"], ["e3", "e4", "e6"]),
    ("B3", "e5"): (["e4", "e5", "e6"], ["e1", "e4", "e5"]),
    ("B3", "e6"): (["e3", "e4", "e5", "e6"], ["e3", "e4"]),
}

# Common kernel of all invariant connections on the trivial bundle, and the
# dimension of the solution space.
TRIVIAL_BUNDLE = {
    "A1": (["e1", "e3", "e5"], 6),
    "A2": (["e1", "e2", "e5"], 6),
    "A3": (["e1", "e2", "e5"], 6),
    "A4": (["e1", "e3", "e4", "e5", "e6"], 3),
    "A5": (["e1", "e2", "e3", "e4", "e5", "e6", "e7"], 0),
    "B1": (["e1", "e4", "e5"], 6),
    "B2": (["e1", "e3", "e4", "e5", "e6"], 3),
    "B3": (["e1", "e3", "e4", "e5", "e6"], 3),
}


def vec(text, names):
    """Coordinates of a linear combination such as ``2*e1-e5``."""
    from invym.field import diff
    expr = parse(text)
    return [diff(expr, n) for n in names]


def same_span(a, b):
    if not a or not b:
        return not a and not b
    return la.rank(a) == la.rank(b) == la.rank(a + b)


def common_kernel(space):
    """Vectors of g killed by every Wang map in the space."""
    rows = []
    for W in [space.particular()] + [space.point([ONE if i == j else ZERO for i in range(space.dim)])
                                     for j in range(space.dim)]:
        rows.extend(W.W)
    return la.nullspace(rows, space.pair.g.dim)


@pytest.mark.parametrize("key", sorted(AD_SPANS))
def test_ad_kernels_and_images(key):
    cid, x = key
    g = catalog.load_algebra(cid)
    A = g.ad(g.basis(g.names.index(x)))
    ker, im = AD_SPANS[key]
    assert same_span(la.nullspace(A, g.dim), [vec(t, g.names) for t in ker])
    assert same_span(la.column_space(A), [vec(t, g.names) for t in im])


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_trivial_bundle_pattern(cid, su2):
    p = catalog.load_pair(cid)
    space = solve_wang(p, BundleHomomorphism.trivial(p, su2))
    zero_on, dim = TRIVIAL_BUNDLE[cid]
    assert space.dim == dim
    assert same_span(common_kernel(space), [vec(t, p.g.names) for t in zero_on])


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_solutions_verify(cid, su2, rng):
    p = catalog.load_pair(cid)
    space = solve_wang(p, designated_homomorphism(p, su2))
    for _ in range(5):
        W = space.sample(rng)
        assert W.restricts_to_lambda()
        assert W.equivariance_defects() == []
    assert space.general().verify()


def test_a5_unique_connection(su2):
    p = catalog.load_pair("A5")
    space = solve_wang(p, designated_homomorphism(p, su2))
    assert space.dim == 0
    kernel = la.nullspace(space.particular().W, 7)
    expect = [vec(t, p.g.names) for t in ["e1-e5", "e2", "e3", "e4", "e6", "e7"]]
    assert same_span(kernel, expect)


def test_b3_family(su2):
    p = catalog.load_pair("B3")
    hom = designated_homomorphism(p, su2)
    space = solve_wang(p, hom)
    # dimension of the centralizer of f1 in su(2)
    assert space.dim == len(la.nullspace(su2.ad(hom.image(1)), 3)) == 1
    W = space.general()
    e2 = W.column(1)
    assert all(is_zero(x) for x in su2.bracket(hom.image(1), e2))
    assert not all(is_zero(x) for x in e2)
    assert same_span(common_kernel(space), [vec(t, p.g.names) for t in ["e1", "e3", "e4", "e5"]])


def test_wang_rejects_non_homomorphism(su2):
    p = catalog.load_pair("A4")
    bad = BundleHomomorphism.from_images(p, su2, {0: [1, 0, 0], 1: [0, 1, 0]})
    with pytest.raises(LieError):
        solve_wang(p, bad)


@pytest.mark.parametrize("cid,images", [("A4", {0: [1, 0, 0]}), ("B2", {1: [1, 0, 0]})])
def test_designated_infeasible(cid, images, su2):
    p = catalog.load_pair(cid)
    assert solve_wang(p, BundleHomomorphism.from_images(p, su2, images)).is_empty


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_nontrivial_feasibility(cid, su2):
    rep = nontrivial_bundle_feasible(catalog.load_pair(cid), su2, random.Random(5))
    assert rep.tried >= 10
    assert rep.any_feasible == (cid in ("A5", "B3"))


def test_sampler_candidates_are_homomorphisms(su2):
    p = catalog.load_pair("A5")
    homs = sample_homomorphisms(p, su2, random.Random(1))
    assert len(homs) >= 10
    assert all(h.is_homomorphism() and not h.is_trivial() for h in homs)


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_equivariance_lemma(cid, su2):
    """If v is in im(ad x) and ker(ad x) then lambda(x) = 0 or W(v) = 0."""
    p = catalog.load_pair(cid)
    rng = random.Random(9)
    rep = nontrivial_bundle_feasible(p, su2, rng)
    homs = [BundleHomomorphism.trivial(p, su2)] + [h for h, _ in rep.feasible]
    for hom in homs:
        space = solve_wang(p, hom)
        for t, ki in enumerate(p.k_indices):
            A = p.g.ad(p.g.basis(ki))
            im = la.column_space(A)
            ker = la.nullspace(A, p.g.dim)
            if not im or not ker:
                continue
            # intersection of the two spans
            coeffs = la.nullspace(la.transpose(im + [[-x for x in v] for v in ker]), len(im) + len(ker))
            both = [[sum((c[i] * im[i][r] for i in range(len(im))), ZERO) for r in range(p.g.dim)] for c in coeffs]
            if all(is_zero(x) for x in hom.image(t)):
                continue
            for _ in range(3):
                W = space.sample(rng)
                for v in both:
                    assert all(is_zero(x) for x in W.apply(v))


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_catalog_pairs_not_reductive(cid):
    assert find_invariant_complement(catalog.load_pair(cid)) is None


def test_a5_lambda_reductive(su2):
    p = catalog.load_pair("A5")
    comp = find_invariant_complement(p, [1, 2])
    assert comp is not None
    expect = [vec(t, p.g.names) for t in ["e1-e5", "e2", "e3", "e4"]]
    assert same_span(comp.basis, expect)
    hom = designated_homomorphism(p, su2)
    W = canonical_wang(p, hom, comp)
    assert la.matrices_equal(W.W, solve_wang(p, hom).particular().W)


def test_b3_canonical_member(su2):
    p = catalog.load_pair("B3")
    hom = designated_homomorphism(p, su2)
    comp = find_invariant_complement(p, hom.kernel())
    expect = [vec(t, p.g.names) for t in ["e1", "e2", "e3", "e4"]]
    assert same_span(comp.basis, expect)
    W = canonical_wang(p, hom, comp)
    assert all(is_zero(x) for x in W.column(1))
    assert W.verify()


def test_a43_reductive_complement():
    p = catalog.load_pair("a43")
    comp = find_invariant_complement(p)
    assert same_span(comp.basis, [vec(t, p.g.names) for t in ["e2", "e3", "e4"]])


def test_trivial_canonical_is_zero(su2):
    p = catalog.load_pair("a43")
    comp = find_invariant_complement(p)
    W = canonical_wang(p, BundleHomomorphism.trivial(p, su2), comp)
    assert la.is_zero_matrix(W.W)


def test_k0_must_be_ideal():
    p = catalog.load_pair("A5")
    # e5 alone: [e5, e6] has an e6 part, so <e5> is not an ideal of k
    with pytest.raises(LieError):
        find_invariant_complement(p, [0])


def test_canonical_rejects_bad_complement(su2):
    p = catalog.load_pair("A5")
    hom = designated_homomorphism(p, su2)
    # the catalog complement <e1, e2, e3, e4> is not lambda-reductive
    plain = InvariantComplement(p, [], la.zeros(p.dim_k, p.dim_s), [p.g.basis(i) for i in p.s_indices])
    assert not complement_condition_holds(p, plain, hom.kernel())
    with pytest.raises(LieError):
        canonical_wang(p, hom, plain)


def test_wang_component_names(su2):
    p = catalog.load_pair("A4")
    space = solve_wang(p, BundleHomomorphism.trivial(p, su2))
    assert space.component_names() == ["W1_2", "W2_2", "W3_2"]
