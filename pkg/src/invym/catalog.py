"""Loader for the shipped catalog of Lie algebras and homogeneous pairs.

Each algebra lives in one JSON document under ``data/catalog``.  Set the
``INVYM_CATALOG_DIR`` environment variable to read documents from another
directory instead.  Indices in the documents are 1-based.
"""

from __future__ import annotations

import json
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

from . import exactla as la
from .field import scalar, subs
from .liealg import HomogeneousPair, LieAlgebra, LieError, change_basis

__all__ = [
    "PAIR_IDS",
    "AUX_IDS",
    "ALL_IDS",
    "load",
    "load_pair",
    "load_algebra",
    "load_document",
    "fels_renner",
    "basis_change",
    "unit_gram",
    "CatalogError",
]

# The eight non-reductive pairs in table order, then auxiliary entries.
PAIR_IDS = ("A1", "A2", "A3", "A4", "A5", "B1", "B2", "B3")
AUX_IDS = ("su2", "a43", "s2_sym", "sl2r_sym")
ALL_IDS = PAIR_IDS + AUX_IDS

ENV_VAR = "INVYM_CATALOG_DIR"


class CatalogError(LieError):
    """Unknown catalog id or malformed catalog document."""


def _catalog_dir() -> Optional[Path]:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else None


def load_document(cid: str) -> dict:
    if cid not in ALL_IDS:
        raise CatalogError(f"unknown catalog id {cid!r}; known: {', '.join(ALL_IDS)}")
    override = _catalog_dir()
    if override is not None:
        text = (override / f"{cid}.json").read_text()
    else:
        text = resources.files("invym").joinpath("data", "catalog", f"{cid}.json").read_text()
    return json.loads(text)


def _subst_params(text, params):
    value = scalar(text)
    return subs(value, params) if params else value


def _brackets(entries, params):
    out = {}
    for i, j, terms in entries:
        out[(i - 1, j - 1)] = {k - 1: _subst_params(v, params) for k, v in terms}
    return out


def _matrix(rows, params=None):
    return [[_subst_params(x, params) for x in row] for row in rows]


def _params(doc, overrides):
    params = {}
    for name, default in doc.get("parameters", {}).items():
        value = overrides.get(name)
        params[name] = scalar(default if value is None else value)
    unknown = set(overrides) - set(params)
    unknown = {k for k in unknown if overrides[k] is not None}
    if unknown:
        raise CatalogError(f"{doc['id']} takes no parameter(s) {sorted(unknown)}")
    return params


def load_algebra(cid: str, **overrides) -> LieAlgebra:
    doc = load_document(cid)
    params = _params(doc, overrides)
    realization = None
    if "realization" in doc:
        realization = [_matrix(m, params) for m in doc["realization"]]
    return LieAlgebra.from_brackets(doc["basis"], _brackets(doc["brackets"], params), realization, name=cid)


def load_pair(cid: str, **overrides) -> HomogeneousPair:
    doc = load_document(cid)
    if "k" not in doc:
        raise CatalogError(f"{cid} is a Lie algebra, not a homogeneous pair")
    params = _params(doc, overrides)
    g = load_algebra(cid, **overrides)
    rho = [_matrix(m, params) for m in doc["rho_s"]] if "rho_s" in doc else None
    metric = _matrix(doc["metric"], params) if "metric" in doc else None
    det = _subst_params(doc["metric_det"], params) if "metric_det" in doc else None
    notes = dict(doc.get("notes", {}))
    notes.update({f"param:{k}": str(v) for k, v in params.items()})
    return HomogeneousPair(
        g=g,
        k_indices=[i - 1 for i in doc["k"]],
        s_indices=[i - 1 for i in doc["s"]],
        rho_s=rho,
        metric_pattern=metric,
        metric_det=det,
        id=cid,
        notes=notes,
    )


def load(cid: str, **overrides):
    """A :class:`HomogeneousPair` for pair ids, a :class:`LieAlgebra` otherwise."""
    doc = load_document(cid)
    return load_pair(cid, **overrides) if "k" in doc else load_algebra(cid, **overrides)


def basis_change(cid: str):
    """Matrix whose column i gives adapted vector e_i in the Fels-Renner basis."""
    doc = load_document(cid)
    fr = doc.get("fels_renner")
    if fr is None:
        raise CatalogError(f"{cid} has no Fels-Renner data")
    n = len(doc["basis"])
    T = la.zeros(n, n)
    for i, terms in enumerate(fr["basis_change"]):
        for v, coeff in terms:
            T[v - 1][i] = scalar(coeff)
    return T


def fels_renner(cid: str, **overrides) -> LieAlgebra:
    """The algebra written in the Fels-Renner basis v1..vn (with realization if shipped)."""
    doc = load_document(cid)
    fr = doc.get("fels_renner")
    if fr is None:
        raise CatalogError(f"{cid} has no Fels-Renner data")
    params = _params(doc, overrides)
    names = [f"v{i + 1}" for i in range(len(doc["basis"]))]
    realization = None
    if "realization" in fr:
        realization = [_matrix(m, params) for m in fr["realization"]]
    return LieAlgebra.from_brackets(names, _brackets(fr["brackets"], params), realization, name=f"{cid}/FR")


def adapted_from_fels_renner(cid: str, **overrides) -> LieAlgebra:
    return change_basis(fels_renner(cid, **overrides), basis_change(cid))


def unit_gram(h: LieAlgebra):
    """Default ad-invariant inner product on h: the identity Gram matrix."""
    return la.identity(h.dim)


@lru_cache(maxsize=None)
def _cached_pair(cid, items):
    return load_pair(cid, **dict(items))


def cached_pair(cid: str, **overrides) -> HomogeneousPair:
    """Memoised :func:`load_pair`; callers must not mutate the result."""
    return _cached_pair(cid, tuple(sorted((k, str(v)) for k, v in overrides.items() if v is not None)))
