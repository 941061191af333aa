"""Command-line interface: ``invym {catalog,wang,ym,psc,gauge}``.

Exit codes: 0 success, 2 infeasible or negative verdict, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import Dict, List, Optional, Sequence

from . import catalog
from . import exactla as la
from .connection import find_invariant_complement, solve_wang
from .field import FieldError, diff, is_zero, parse, scalar, to_text, variables
from .gauge import (
    a5_fixture_check,
    decompose_in_basis,
    fels_renner_wang,
    form_text,
    gauge_potential,
    load_model,
    maurer_cartan_pullback,
)
from .invmetric import default_metric, metric_instance, symbolic_metric
from .liealg import BundleHomomorphism, LieError
from .psc import designated_homomorphism, psc_verdict
from .yangmills import canonical_ym_lhs, constant_tables, ym_residual

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


class UsageError(ValueError):
    """Bad command-line input."""


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def parse_assignments(text: Optional[str]) -> Dict[str, str]:
    """``"a=1,d=-2"`` -> ``{"a": "1", "d": "-2"}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        name, value = (s.strip() for s in item.split("=", 1))
        out[name] = value
    return out


def parse_h_vector(text: str, h) -> List:
    """A linear combination such as ``2*f1 - f3/2`` as a coordinate vector of h."""
    expr = parse(text)
    coeffs = [diff(expr, name) for name in h.names]
    rest = expr - sum((c * parse(name) for c, name in zip(coeffs, h.names)), scalar(0))
    if not is_zero(rest) or any(set(h.names) & variables(c) for c in coeffs):
        raise UsageError(f"{text!r} is not a linear combination of {', '.join(h.names)}")
    return coeffs


def parse_lambda(text: str, pair, h) -> BundleHomomorphism:
    """``"e5=f1,e6=2*f1+f2"``; k generators left out map to 0."""
    names = [pair.g.names[i] for i in pair.k_indices]
    images = {}
    for gen, rhs in parse_assignments(text).items():
        if gen not in names:
            raise UsageError(f"{gen} is not a generator of k = <{', '.join(names)}>")
        images[names.index(gen)] = parse_h_vector(rhs, h)
    hom = BundleHomomorphism.from_images(pair, h, images)
    if not hom.verified:
        raise UsageError("lambda is not a Lie algebra homomorphism k -> h")
    return hom


def _homomorphism(args, pair, h) -> BundleHomomorphism:
    if args.lam is None:
        return designated_homomorphism(pair, h)
    if args.lam.strip() in ("", "0", "trivial"):
        return BundleHomomorphism.trivial(pair, h)
    return parse_lambda(args.lam, pair, h)


def _pair_overrides(args):
    return {k: v for k, v in (("alpha", getattr(args, "alpha", None)), ("eps", getattr(args, "eps", None)))
            if v is not None}


def _load_pair(cid, args):
    doc = catalog.load_document(cid)
    params = doc.get("parameters", {})
    overrides = {k: v for k, v in _pair_overrides(args).items() if k in params}
    return catalog.load_pair(cid, **overrides)


def _metric(pair, args):
    witness = parse_assignments(getattr(args, "witness", None)) or None
    if pair.id in catalog.PAIR_IDS:
        return metric_instance(symbolic_metric(pair), witness)
    if witness:
        return metric_instance(default_metric(pair).mu, witness)
    return default_metric(pair)


def _text_matrix(m):
    return [[to_text(x) for x in row] for row in m]


def _vec_text(v, names):
    terms = []
    for x, n in zip(v, names):
        if is_zero(x):
            continue
        t = to_text(x)
        if t == "1":
            terms.append(n)
        elif t == "-1":
            terms.append("-" + n)
        else:
            terms.append(f"({t})*{n}" if any(ch in t[1:] for ch in "+-/") else f"{t}*{n}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

class Report:
    """A titled table plus free-form fields; rendered as markdown, json or csv."""

    def __init__(self, title: str, columns: Sequence[str], rows: List[Dict], fields: Optional[Dict] = None):
        self.title = title
        self.columns = list(columns)
        self.rows = rows
        self.fields = fields or {}

    def as_dict(self):
        return {"title": self.title, "columns": self.columns, "rows": self.rows, **self.fields}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2)
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({c: _cell(row.get(c, "")) for c in self.columns})
            return buf.getvalue().rstrip("\n")
        lines = [f"## {self.title}", ""]
        for key, value in self.fields.items():
            lines.append(f"- {key}: {_cell(value)}")
        if self.fields:
            lines.append("")
        if self.columns:
            lines.append("| " + " | ".join(self.columns) + " |")
            lines.append("|" + "---|" * len(self.columns))
            for row in self.rows:
                lines.append("| " + " | ".join(_cell(row.get(c, "")) for c in self.columns) + " |")
        return "\n".join(lines).rstrip()


def _cell(v):
    if isinstance(v, bool):
        return "✓" if v else "✗"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_catalog(args):
    if args.action == "list":
        rows = []
        for cid in catalog.ALL_IDS:
            doc = catalog.load_document(cid)
            rows.append({
                "id": cid,
                "kind": doc["kind"],
                "algebra": doc.get("algebra", ""),
                "dim": doc["dimension"],
                "k": ",".join(doc["basis"][i - 1] for i in doc.get("k", [])),
                "s": ",".join(doc["basis"][i - 1] for i in doc.get("s", [])),
            })
        return Report("Catalog", ["id", "kind", "algebra", "dim", "k", "s"], rows), EXIT_OK
    if not args.id:
        raise UsageError("catalog show needs an id")
    doc = catalog.load_document(args.id)
    g = catalog.load_algebra(args.id, **{k: v for k, v in _pair_overrides(args).items()
                                         if k in doc.get("parameters", {})})
    rows = [{"bracket": f"[{g.names[i]},{g.names[j]}]", "value": _vec_text(g.c[i][j], g.names)}
            for i, j, _ in g.nonzero_brackets()]
    fields = {"algebra": doc.get("algebra", ""), "basis": g.names}
    if doc.get("parameters"):
        fields["parameters"] = {k: str(v) for k, v in (_pair_overrides(args) or doc["parameters"]).items()
                                if k in doc["parameters"]}
    if "k" in doc:
        pair = _load_pair(args.id, args)
        fields["k"] = [g.names[i] for i in pair.k_indices]
        fields["s"] = [g.names[i] for i in pair.s_indices]
        fields["rho_s"] = [_text_matrix(r) for r in pair.rho_s]
        if pair.metric_pattern is not None:
            fields["metric"] = _text_matrix(pair.metric_pattern)
        if pair.metric_det is not None:
            fields["metric_det"] = to_text(pair.metric_det)
        if "signatures" in doc:
            fields["signatures"] = doc["signatures"]
    if "fels_renner" in doc:
        fields["fels_renner_brackets"] = doc["fels_renner"]["brackets_source"]
    for key, value in doc.get("notes", {}).items():
        fields[f"note:{key}"] = value
    return Report(f"{args.id}", ["bracket", "value"], rows, fields), EXIT_OK


def _lambda_text(hom):
    p = hom.pair
    parts = [f"{p.g.names[ki]}={_vec_text(hom.image(t), hom.h.names)}"
             for t, ki in enumerate(p.k_indices) if any(not is_zero(x) for x in hom.image(t))]
    return ",".join(parts) if parts else "trivial"


def cmd_wang(args):
    h = catalog.load_algebra(args.h)
    pair = _load_pair(args.id, args)
    hom = _homomorphism(args, pair, h)
    space = solve_wang(pair, hom)
    fields = {"pair": pair.id, "lambda": _lambda_text(hom), "feasible": not space.is_empty}
    if space.is_empty:
        return Report(f"Wang maps for {pair.id}", [], [], fields), EXIT_NEGATIVE
    W = space.general_named()
    fields["dimension"] = space.dim
    fields["parameters"] = space.component_names()
    fields["vanishes_on"] = [_vec_text(v, pair.g.names) for v in space.vanishing_subspace()]
    rows = [{"vector": pair.g.names[i], "W": _vec_text(W.column(i), h.names)} for i in range(pair.g.dim)]
    return Report(f"Wang maps for {pair.id}", ["vector", "W"], rows, fields), EXIT_OK


def cmd_ym(args):
    h = catalog.load_algebra(args.h)
    pair = _load_pair(args.id, args)
    hom = _homomorphism(args, pair, h)
    metric = _metric(pair, args)
    if args.canonical:
        comp = find_invariant_complement(pair, hom.kernel())
        if comp is None:
            raise UsageError(f"{pair.id} is not lambda-reductive for this lambda")
        lhs = canonical_ym_lhs(pair, hom, comp, metric)
        rows = []
        for c in range(h.dim):
            for al in range(pair.dim_s):
                rows.append({"c": h.names[c], "alpha": pair.g.names[pair.s_indices[al]],
                             "value": to_text(lhs[c][al])})
        ok = all(is_zero(x) for row in lhs for x in row)
        fields = {"pair": pair.id, "lambda": _lambda_text(hom), "yang_mills": ok}
        return Report(f"Canonical connection criterion for {pair.id}", ["c", "alpha", "value"], rows, fields), \
            EXIT_OK if ok else EXIT_NEGATIVE
    space = solve_wang(pair, hom)
    if space.is_empty:
        return Report(f"Yang-Mills residual for {pair.id}", [], [],
                      {"pair": pair.id, "lambda": _lambda_text(hom), "feasible": False}), EXIT_NEGATIVE
    W = space.general_named()
    point = parse_assignments(args.point)
    if point:
        W = W.substitute(point)
    report = ym_residual(W, metric)
    rows = [{"component": f"{h.names[c]}_{idx[0] + 1}", "value": to_text(v)}
            for (c, idx), v in sorted(report.residual.comps.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    _, upper = constant_tables(pair, metric)
    fields = {
        "pair": pair.id,
        "lambda": _lambda_text(hom),
        "parameters": space.component_names(),
        "identically_zero": report.is_yang_mills,
        "raised_constants": {f"C^{a}{b}_{g}": to_text(v) for (a, b, g), v in upper.items()},
    }
    return Report(f"Yang-Mills residual for {pair.id}", ["component", "value"], rows, fields), \
        EXIT_OK if report.is_yang_mills else EXIT_NEGATIVE


def cmd_psc(args):
    if args.all:
        ids = list(catalog.PAIR_IDS)
    elif args.id:
        ids = [args.id]
    else:
        raise UsageError("psc needs an id or --all")
    h = catalog.load_algebra(args.h)
    m = catalog.unit_gram(h)
    rows = []
    notes = {}
    for cid in ids:
        pair = _load_pair(cid, args)
        hom = designated_homomorphism(pair, h) if args.all else _homomorphism(args, pair, h)
        verdict = psc_verdict(pair, hom, _metric(pair, args), m)
        r1, r2 = verdict.psc1_report, verdict.psc2_report
        rows.append({
            "pair": cid, "lambda": _lambda_text(hom),
            "dim_Z": r1.dim_z, "dim_B": r1.dim_b, "dim_H": r1.dim_h,
            "dim_VK": r2.dim, "gram_rank": r2.rank,
            "PSC1": verdict.psc1, "PSC2": verdict.psc2, "PSC": verdict.psc,
        })
        if verdict.psc and cid in catalog.PAIR_IDS:
            space = solve_wang(pair, hom)
            if space.dim == 0:
                notes[cid] = "unique invariant connection: a universal solution of every invariant Lagrangian"
    cols = ["pair", "lambda", "dim_Z", "dim_B", "dim_H", "dim_VK", "gram_rank", "PSC1", "PSC2", "PSC"]
    fields = {f"note:{k}": v for k, v in notes.items()}
    code = EXIT_OK if all(r["PSC"] for r in rows) else EXIT_NEGATIVE
    return Report("Symmetric criticality", cols, rows, fields), code


def cmd_gauge(args):
    h = catalog.load_algebra(args.h)
    pair = catalog.load_pair(args.id)
    hom = designated_homomorphism(pair, h)
    space = solve_wang(pair, hom)
    if args.id == "B3":
        y = parse_h_vector(args.y, h)
        W = space.particular()
        col = pair.g.names.index("e2")
        for a in range(h.dim):
            W.W[a][col] = y[a]
        if not W.verify():
            raise UsageError("y must commute with the image of lambda")
        model = load_model("B3")
        coeffs = decompose_in_basis(maurer_cartan_pullback(model), model.algebra.realization)
        omega = gauge_potential(fels_renner_wang(W), coeffs)
        text = form_text(omega, h)
        fields = {"pair": "B3", "chart": model.chart, "y": args.y, "potential": text}
        rows = [{"coordinate": f"d{x}", "value": _vec_text(c, h.names)} for x, c in zip(model.coords, omega.components)]
        return Report("Gauge potential for B3", ["coordinate", "value"], rows, fields), EXIT_OK
    if args.id == "A5":
        W = space.particular()
        result = a5_fixture_check(fels_renner_wang(W))
        text = "0 (pure gauge)" if result.passed else "nonzero"
        rows = [{"tangent": f"g'_{i + 1}", "W": _vec_text(v, h.names)} for i, v in enumerate(result.potential)]
        fields = {"pair": "A5", "potential": text, "check": result.message}
        return Report("Gauge potential for A5", ["tangent", "W"], rows, fields), \
            EXIT_OK if result.passed else EXIT_NEGATIVE
    raise UsageError("gauge potentials are available for B3 and A5")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("markdown", "json", "csv"), default="markdown")
    common.add_argument("--seed", type=int, default=0, help="seed for samplers")
    common.add_argument("--h", default="su2", help="structure algebra id (default su2)")
    common.add_argument("--alpha", help="A2 family parameter")
    common.add_argument("--eps", help="A3 sign parameter")

    with_lambda = argparse.ArgumentParser(add_help=False)
    with_lambda.add_argument("--lambda", dest="lam",
                             help="isotropy homomorphism, e.g. 'e5=f1,e6=2*f1+f2' or 'trivial'")
    with_lambda.add_argument("--witness", help="metric parameter point fixing sign data, e.g. 'a=1,b=2'")

    parser = argparse.ArgumentParser(prog="invym", description="Invariant Yang-Mills connections on homogeneous spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list or show catalog entries")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("id", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("wang", parents=[common, with_lambda], help="solve for invariant connections")
    p.add_argument("id")
    p.set_defaults(func=cmd_wang)

    p = sub.add_parser("ym", parents=[common, with_lambda], help="reduced Yang-Mills residual")
    p.add_argument("id")
    p.add_argument("--canonical", action="store_true", help="criterion for the canonical connection")
    p.add_argument("--point", help="values for the Wang-map parameters, e.g. 'W1_2=1'")
    p.set_defaults(func=cmd_ym)

    p = sub.add_parser("psc", parents=[common, with_lambda], help="symmetric-criticality verdicts")
    p.add_argument("id", nargs="?")
    p.add_argument("--all", action="store_true", help="sweep the eight catalog pairs")
    p.set_defaults(func=cmd_psc)

    p = sub.add_parser("gauge", parents=[common], help="local gauge potentials for B3 and A5")
    p.add_argument("id", choices=("B3", "A5"))
    p.add_argument("--y", default="f1", help="B3: element of h commuting with the image of lambda")
    p.set_defaults(func=cmd_gauge)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    try:
        report, code = args.func(args)
    except (UsageError, LieError, FieldError, la.LinAlgError, ValueError, ZeroDivisionError) as exc:
        print(f"invym: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(report.render(args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
