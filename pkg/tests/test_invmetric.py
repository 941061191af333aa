import random
from fractions import Fraction

import pytest

from invym import catalog
from invym import exactla as la
from invym.field import evaluate, parse, to_text
from invym.invmetric import (
    MetricError,
    default_metric,
    invariant_metric_family,
    metric_instance,
    rational_sqrt,
    square_witnesses,
    symbolic_metric,
)

FAMILY_DIMS = dict(zip(catalog.PAIR_IDS, (4, 4, 4, 2, 1, 4, 2, 2)))

DETS = {
    "A1": "a^3*(a + 2*d)",
    "A2": "-a^3*d",
    "A3": "-a^3*b",
    "A4": "-2*a^4",
    "A5": "-2*a^4",
    "B1": "a^4",
    "B2": "2*a^4",
    "B3": "a^4",
}

# determinant is a non-square constant times a^4
NO_SQUARE = {"A4", "A5", "B2"}


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_family_dimension(cid):
    assert invariant_metric_family(catalog.load_pair(cid)).dim == FAMILY_DIMS[cid]


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_family_members_invariant(cid):
    p = catalog.load_pair(cid)
    fam = invariant_metric_family(p)
    assert p.metric_is_invariant(symbolic_metric(p))
    for b in fam.basis:
        assert p.metric_is_invariant(b)


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_determinant_expression(cid):
    p = catalog.load_pair(cid)
    assert la.det(symbolic_metric(p)) == parse(DETS[cid])
    assert p.metric_det == parse(DETS[cid])


def test_non_invariant_metric_rejected():
    p = catalog.load_pair("A4")
    assert not p.metric_is_invariant(la.identity(4))


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_square_witnesses(cid):
    p = catalog.load_pair(cid)
    mu = symbolic_metric(p)
    ws = square_witnesses(mu, 5, random.Random(3))
    if cid in NO_SQUARE:
        assert ws == []
        return
    assert len(ws) == 5
    d = la.det(mu)
    for w in ws:
        v = evaluate(d, w)
        assert v != 0 and rational_sqrt(abs(v)) is not None


@pytest.mark.parametrize("cid", catalog.PAIR_IDS)
def test_metric_instance_inverse_and_parity(cid):
    M = metric_instance(symbolic_metric(catalog.load_pair(cid)))
    assert la.matrices_equal(la.matmul(M.mu, M.mu_inv), la.identity(4))
    num = la.evaluate_matrix(M.mu, M.witness)
    pos, neg = la.signature(num)
    assert M.parity == neg
    assert evaluate(M.abs_det, M.witness) > 0


def test_sqrt_for_monomial_det():
    M = metric_instance(symbolic_metric(catalog.load_pair("B3")))
    assert to_text(M.sqrt_abs_det) == "a^2"
    M = metric_instance(symbolic_metric(catalog.load_pair("A4")))
    assert M.sqrt_abs_det is None


def test_metric_errors():
    with pytest.raises(MetricError):
        metric_instance([["a", "0"], ["0", "a"]], {"b": 1})
    with pytest.raises(MetricError):
        metric_instance([["a", "0"], ["0", "a - 1"]], {"a": 1})
    with pytest.raises(la.LinAlgError):
        metric_instance([["1", "2"], ["3", "4"]])
    with pytest.raises(MetricError):
        metric_instance([["1", "0"], ["0", "2"]], sqrt_abs_det=Fraction(3))


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None


def test_default_metric_uses_pattern_when_invariant():
    p = catalog.load_pair("a43")
    M = default_metric(p)
    assert M.dim == 3
