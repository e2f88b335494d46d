"""Batch command line over the library.

Exit codes: 0 success, 1 usage error, 2 mathematical rejection (reducible
modulus, degree mismatch, failed hypothesis...).  Output is line-oriented
``key=value``; ``--json`` switches to a single JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys

from .counting import (
    CurveConfiguration,
    CurveRecord,
    SigmaList,
    closed_form_anticanonical,
    enriched_count,
    fermat_cubic_model,
    kontsevich_Nd,
    pivot_cubic_model,
    sigma_trace,
    specialize,
    table1_value,
    validate_config,
)
from .degree import fiber_from_json, global_degree_at, local_degree
from .errors import MathRejection, ParseError
from .fields import CC, FiniteField, QQ, RR, Rationals, RealClosed, PAdic, make_extension, square_class
from .gw import FinitePlace, GWElement, LocalPlace, RealPlace
from .parsing import format_form, parse_element, parse_field, parse_form
from .picard import (
    BLOWUP,
    QUADRIC,
    DelPezzoModel,
    canonical_class,
    curve_degree,
    divisor,
    euler_char,
    hypothesis_failures,
    intersect,
    marked_points,
    minus_one_curves,
    node_count,
)
from .transfer import EtaleAlgebra, NodeRecord, disc_algebra, mass, trace_form, transfer_along


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _emit(results, as_json):
    if as_json:
        print(json.dumps(results))
        return
    for k, v in results.items():
        if isinstance(v, list):
            for item in v:
                print(f"{k}={item}")
        else:
            print(f"{k}={v}")


def _invariant_table(q):
    out = {"form": format_form(q), "rank": q.rank}
    F = q.owner
    if q.is_honest and q.rank > 0:
        out["disc"] = str(q.discriminant())
    try:
        out["signature"] = q.signature(RealPlace())
    except MathRejection:
        pass
    if isinstance(F, Rationals) and q.is_honest and q.rank > 0:
        from .fields import odd_primes_dividing

        primes = set()
        for entry in q.diagonal():
            primes |= odd_primes_dividing(entry.payload)
        out["hasse@real"] = q.hasse(RealPlace())
        out["hasse@2"] = q.hasse(FinitePlace(2))
        for p in sorted(primes):
            out[f"hasse@{p}"] = q.hasse(FinitePlace(p))
    if isinstance(F, PAdic) and q.is_honest and q.rank > 0:
        out[f"hasse@{F.p}"] = q.hasse(LocalPlace())
    return out


# ---------------------------------------------------------------------------
# literals above the grammar layer


def _parse_surface(text, base):
    if text in ("P2", "p2"):
        return DelPezzoModel(BLOWUP, base)
    if text in ("P1xP1", "p1xp1"):
        return DelPezzoModel(QUADRIC, base)
    if text == "fermat-cubic":
        return fermat_cubic_model(base)
    if text == "cubic-s0":
        return pivot_cubic_model(base)
    if text.lstrip().startswith("{"):
        return _surface_from_json(json.loads(text), base)
    raise MathRejection(f"unknown surface literal {text!r}")


def _surface_from_json(obj, base):
    kind = obj.get("kind")
    if kind not in (BLOWUP, QUADRIC):
        raise MathRejection(f"surface kind must be {BLOWUP!r} or {QUADRIC!r}")
    fields = tuple(parse_field(t) for t in obj.get("pointFields", []))
    euler = None
    if "euler" in obj:
        euler = parse_form(obj["euler"], base)
    r = obj.get("r")
    if fields and r is not None and sum(_deg(f, base) for f in fields) != r:
        raise MathRejection("surface r does not match its pointFields")
    return DelPezzoModel(
        kind,
        base,
        point_fields=fields,
        r_override=None if fields else r,
        external_euler=euler,
    )


def _deg(f, base):
    from .fields import relative_degree

    return relative_degree(f, base)


def _parse_divisor(text, model):
    text = text.strip()
    if text.startswith("["):
        body = text.strip("[]")
        parts = body.replace(";", ",").split(",")
        return divisor(model, [int(p) for p in parts if p.strip() != ""])
    if text in ("-K", "-K_S", "anticanonical"):
        K = canonical_class(model)
        return divisor(model, [-c for c in K.coefficients])
    if text.startswith("O(") and "x" in text and model.kind == QUADRIC:
        a, b = text.split("x")
        av = int(a[2:-1])
        bv = int(b[2:-1])
        return divisor(model, (av, bv))
    if text.startswith("O(") and text.endswith(")") and model.kind == BLOWUP:
        n = int(text[2:-1])
        return divisor(model, (n,) + (0,) * model.blowup_count)
    raise MathRejection(f"unknown divisor literal {text!r}")


def _parse_sigma(text, base_text):
    entries = [t.strip() for t in text.split(",") if t.strip()]
    fields = [parse_field(t) for t in entries]
    if base_text:
        base = parse_field(base_text)
    else:
        plain = {str(f) for f in fields if f.base is None}
        if len(plain) == 1:
            base = parse_field(plain.pop())
        elif not plain and all(str(f) == "C" for f in fields):
            base = RR
        else:
            raise MathRejection(
                "cannot infer the base field from sigma; pass --base"
            )
    return SigmaList(base, tuple(fields))


_TABLE_BY_NAME = {
    ("P2", "O(1)"): 1,
    ("P2", "O(2)"): 2,
    ("P2", "O(3)"): 3,
    ("P1xP1", "O(1)xO(d)"): 4,
    ("P1xP1", "O(2)xO(2)"): 5,
    ("fermat-cubic", "O(1)"): 6,
    ("cubic-s0", "O(1)"): 7,
}


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_gw(args):
    field = parse_field(args.field)
    if args.mode == "eq":
        q1 = parse_form(args.forms[0], field)
        q2 = parse_form(args.forms[1], field)
        eq = q1.equals(q2)
        if args.json:
            print(json.dumps({"equal": eq}))
        else:
            print("equal" if eq else "not equal")
        return 0
    if len(args.forms) != 1:
        raise _Usage("eval/inv take exactly one form")
    q = parse_form(args.forms[0], field)
    table = _invariant_table(q)
    if args.mode == "eval":
        _emit(table, args.json)
    else:
        table.pop("form")
        _emit(table, args.json)
    return 0


def _cmd_transfer(args):
    ext = parse_field(args.field)
    if ext.base is None:
        raise MathRejection(f"{ext} has no base field to transfer to")
    q = parse_form(args.form, ext)
    out = transfer_along(ext, ext.base, q)
    _emit({"field": str(ext.base), **_invariant_table(out)}, args.json)
    return 0


def _algebra_from_args(args):
    base = parse_field(args.base)
    factors = tuple(parse_field(t.strip()) for t in args.algebra.split(",") if t.strip())
    return EtaleAlgebra(base, factors)


def _cmd_traceform(args):
    algebra = _algebra_from_args(args)
    _emit(_invariant_table(trace_form(algebra)), args.json)
    return 0


def _cmd_disc(args):
    algebra = _algebra_from_args(args)
    _emit({"disc": str(disc_algebra(algebra))}, args.json)
    return 0


def _cmd_mass(args):
    base = parse_field(args.base)
    node_field = parse_field(args.node_field) if args.node_field else base
    if args.split:
        node = NodeRecord(base, node_field, None)
    else:
        if args.tangent is None:
            raise _Usage("pass --tangent <elem> or --split")
        elem = parse_element(args.tangent, node_field)
        node = NodeRecord(base, node_field, square_class(elem))
    _emit({"mass": format_form(mass(node))}, args.json)
    return 0


def _cmd_degree(args):
    with open(args.fiber) as fh:
        obj = json.load(fh)
    fiber = fiber_from_json(obj, parse_field, parse_element)
    out = global_degree_at(fiber)
    table = _invariant_table(out)
    table["points"] = len(fiber.points)
    _emit(table, args.json)
    return 0


def _cmd_picard(args):
    base = parse_field(args.base) if args.base else QQ
    model = _parse_surface(args.surface, base)
    table = {
        "kind": model.kind,
        "surface_degree": model.surface_degree,
        "K": str(canonical_class(model)),
    }
    if args.D:
        D = _parse_divisor(args.D, model)
        table["d"] = curve_degree(model, D)
        table["n"] = marked_points(model, D)
        table["delta"] = node_count(model, D)
    if args.minus_one:
        curves = minus_one_curves(model)
        table["minus_one_count"] = len(curves)
        table["minus_one"] = [str(c) for c in curves]
    _emit(table, args.json)
    return 0


def _cmd_hypcheck(args):
    base = parse_field(args.base) if args.base else QQ
    model = _parse_surface(args.surface, base)
    D = _parse_divisor(args.D, model)
    reasons = hypothesis_failures(model, D)
    if reasons:
        _emit({"hypothesis": "fail", "reason": reasons}, args.json)
        return 2
    _emit({"hypothesis": "pass"}, args.json)
    return 0


def _load_config(path):
    with open(path) as fh:
        obj = json.load(fh)
    base = parse_field(obj["base"])
    sigma = SigmaList(base, tuple(parse_field(t) for t in obj.get("sigma", [])))
    surface = None
    if "surface" in obj:
        surface = _surface_from_json(obj["surface"], base)
    div = None
    if "divisor" in obj:
        if surface is None:
            raise MathRejection("divisor given without a surface")
        div = divisor(surface, obj["divisor"])
    curves = []
    for c in obj.get("curves", []):
        cf = parse_field(c["field"])
        nodes = []
        for n in c.get("nodes", []):
            if n == "split":
                nodes.append(NodeRecord(cf, cf, None))
                continue
            nf = parse_field(n["field"])
            if n.get("split"):
                nodes.append(NodeRecord(cf, nf, None))
            else:
                elem = parse_element(n["D"], nf)
                nodes.append(NodeRecord(cf, nf, square_class(elem)))
        curves.append(CurveRecord(cf, tuple(nodes)))
    return CurveConfiguration(base, sigma, tuple(curves), surface, div)


def _cmd_count(args):
    config = _load_config(args.config)
    if not args.skip_validation:
        failures = validate_config(config)
        if failures:
            _emit({"valid": "false", "failure": failures}, args.json)
            return 2
    out = enriched_count(config)
    _emit(_invariant_table(out), args.json)
    return 0


def _cmd_closed_form(args):
    sigma = _parse_sigma(args.sigma, args.base)
    base = sigma.base
    key = (args.surface, args.D)
    if key in _TABLE_BY_NAME:
        value = table1_value(_TABLE_BY_NAME[key], sigma)
    else:
        model = _parse_surface(args.surface, base)
        D = _parse_divisor(args.D, model)
        minus_k = [-c for c in canonical_class(model).coefficients]
        if list(D.coefficients) != minus_k:
            raise MathRejection(
                "closed forms are available for table rows and D = -K_S only"
            )
        value = closed_form_anticanonical(model, sigma)
    table = _invariant_table(value)
    if args.specialize:
        spec = specialize(value, args.specialize)
        if args.specialize.upper() == "R":
            table["rank"], table["signature"] = spec
        else:
            table["rank"] = spec
    _emit(table, args.json)
    return 0


def _cmd_kontsevich(args):
    print(kontsevich_Nd(args.d))
    return 0


def _cmd_selftest(args):
    checks = []
    f5 = FiniteField(5)
    from .fields import make_extension

    sigma_sets = {
        2: [
            SigmaList(QQ, (QQ, QQ)),
            SigmaList(f5, (f5, f5)),
            SigmaList(RR, (RR, RR)),
        ],
        5: [
            SigmaList(QQ, (QQ,) * 3 + (make_extension(QQ, [-2, 0, 1]),)),
            SigmaList(f5, (f5,) * 3 + (FiniteField(5, 2),)),
            SigmaList(RR, (RR,) * 5),
        ],
        7: [
            SigmaList(QQ, (QQ,) * 5 + (make_extension(QQ, [-3, 0, 1]),)),
            SigmaList(f5, (f5,) * 7),
            SigmaList(RR, (RR,) * 5 + (CCext(),)),
        ],
        8: [
            SigmaList(QQ, (QQ,) * 6 + (make_extension(QQ, [-5, 0, 1]),)),
            SigmaList(f5, (f5,) * 6 + (FiniteField(5, 2),)),
            SigmaList(RR, (RR,) * 8),
        ],
    }
    ranks = {1: 1, 2: 1, 3: 12, 4: 1, 5: 10, 6: 12, 7: 12}
    needed_n = {1: 2, 2: 5, 3: 8, 4: 7, 5: 7, 6: 2, 7: 2}
    ok = True
    for row in range(1, 8):
        for sigma in sigma_sets[needed_n[row]]:
            value = table1_value(row, sigma)
            expected = ranks[row] if row not in (1, 2, 4) else 1
            got = value.rank
            passed = got == expected
            ok &= passed
            checks.append(
                f"{'ok' if passed else 'FAIL'} row {row} over {sigma.base}: rank {got}"
            )
    expected_nd = {1: 1, 2: 1, 3: 12, 4: 620, 5: 87304}
    for d, v in expected_nd.items():
        passed = kontsevich_Nd(d) == v
        ok &= passed
        checks.append(f"{'ok' if passed else 'FAIL'} kontsevich N_{d} = {v}")
    for line in checks:
        print(line)
    return 0 if ok else 2


def CCext():
    from .fields import CC

    return CC


# ---------------------------------------------------------------------------
# argument wiring


def build_parser():
    top = _Parser(prog="gwcount", description=__doc__)
    top.add_argument("--json", action="store_true", help="JSON output")
    sub = top.add_subparsers(dest="verb", required=True)

    gw = sub.add_parser("gw", help="evaluate, compare or classify diagonal forms")
    gw.add_argument("mode", choices=["eval", "eq", "inv"])
    gw.add_argument("--field", required=True)
    gw.add_argument("forms", nargs="+")
    gw.set_defaults(func=_cmd_gw)

    tr = sub.add_parser("transfer", help="transfer a form to the base field")
    tr.add_argument("--field", required=True, help="the extension field")
    tr.add_argument("form")
    tr.set_defaults(func=_cmd_transfer)

    tf = sub.add_parser("traceform", help="trace form of an etale algebra")
    tf.add_argument("--base", required=True)
    tf.add_argument("--algebra", required=True, help="comma-separated factors")
    tf.set_defaults(func=_cmd_traceform)

    dc = sub.add_parser("disc", help="discriminant of an etale algebra")
    dc.add_argument("--base", required=True)
    dc.add_argument("--algebra", required=True)
    dc.set_defaults(func=_cmd_disc)

    ms = sub.add_parser("mass", help="mass of a node")
    ms.add_argument("--base", required=True, help="the curve field k(u)")
    ms.add_argument("--node-field", help="k(p); defaults to the curve field")
    ms.add_argument("--tangent", help="tangent-direction element D(p)")
    ms.add_argument("--split", action="store_true")
    ms.set_defaults(func=_cmd_mass)

    dg = sub.add_parser("degree", help="degree from fiber data")
    dg.add_argument("--fiber", required=True, help="fiber JSON file")
    dg.set_defaults(func=_cmd_degree)

    pc = sub.add_parser("picard", help="lattice data of a del Pezzo surface")
    pc.add_argument("--surface", required=True)
    pc.add_argument("--D")
    pc.add_argument("--base")
    pc.add_argument("--minus-one", action="store_true")
    pc.set_defaults(func=_cmd_picard)

    hc = sub.add_parser("hypcheck", help="check the degree hypothesis")
    hc.add_argument("--surface", required=True)
    hc.add_argument("--D", required=True)
    hc.add_argument("--base")
    hc.set_defaults(func=_cmd_hypcheck)

    ct = sub.add_parser("count", help="enriched count of a configuration")
    ct.add_argument("--config", required=True)
    ct.add_argument("--skip-validation", action="store_true")
    ct.set_defaults(func=_cmd_count)

    cf = sub.add_parser("closed-form", help="closed-form counts")
    cf.add_argument("--surface", required=True)
    cf.add_argument("--D", required=True)
    cf.add_argument("--sigma", required=True)
    cf.add_argument("--base")
    cf.add_argument("--specialize", choices=["R", "C", "r", "c"])
    cf.set_defaults(func=_cmd_closed_form)

    kv = sub.add_parser("kontsevich", help="classical N_d")
    kv.add_argument("d", type=int)
    kv.set_defaults(func=_cmd_kontsevich)

    st = sub.add_parser("selftest", help="run built-in consistency checks")
    st.add_argument("what", nargs="?", default="table1")
    st.set_defaults(func=_cmd_selftest)

    return top


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except MathRejection as exc:
        print(f"rejected code={exc.code}: {exc.message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
