"""Command-line front end: parse inputs (dense JSON or the sparse E-notation
of the worked examples), dispatch to the library, emit canonical JSON
certificates or plain-text reports, and run the built-in fixture suite.

Exit codes: 0 success, 1 malformed input, 2 mathematical rejection (violated
precondition or failed lemma clause).
"""

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import deform, orbits, partitions, whitpair
from .errors import MathError, ParseError
from .exactq import QMatrix, rat_parse, rat_str

FIXTURE_ENV = "WHITFORGE_FIXTURE_DIR"


# ---------------------------------------------------------------------------
# sparse matrix notation: "E21+E43", "2E21 - 1/2 E43", "diag(3,1,-1,-3)"

_TERM_RE = re.compile(r"""
    (?P<sign>[+-])?\s*
    (?:
        (?P<diag>diag\(\s*(?P<dargs>[^()]*)\))
      | (?P<coef>\d+(?:/\d+)?)?\s*\*?\s*E(?P<i>\d)(?P<j>\d)
      | (?P<zero>0)
    )\s*""", re.X)


def parse_matrix_spec(spec, n=None):
    """Parse a matrix from dense JSON (list of lists) or E-notation text."""
    if isinstance(spec, QMatrix):
        return spec
    if isinstance(spec, list):
        return QMatrix.from_json(spec)
    text = str(spec).strip()
    if text.startswith("["):
        return QMatrix.from_json(json.loads(text))
    terms = []
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse matrix spec at ...{text[pos:]!r}")
        pos = m.end()
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("diag") is not None:
            vals = [rat_parse(x) for x in m.group("dargs").split(",") if x.strip()]
            terms.append(("diag", sign, vals))
        elif m.group("zero") is not None:
            terms.append(("zero", sign, None))
        else:
            coef = rat_parse(m.group("coef")) if m.group("coef") else Fraction(1)
            terms.append(("E", sign * coef, (int(m.group("i")), int(m.group("j")))))
    if not terms:
        raise ParseError(f"empty matrix spec {text!r}")
    size = n
    for kind, _, payload in terms:
        if kind == "diag":
            size = max(size or 0, len(payload))
        elif kind == "E":
            size = max(size or 0, *payload)
    if not size:
        raise ParseError(f"cannot infer size of {text!r}; pass n")
    out = QMatrix.zeros(size)
    for kind, coef, payload in terms:
        if kind == "diag":
            if len(payload) != size:
                raise ParseError(f"diag(...) length {len(payload)} != n = {size}")
            out = out + QMatrix.diag(payload).scale(coef)
        elif kind == "E":
            i, j = payload
            out = out + QMatrix.elementary(size, i, j, coef)
    return out


def parse_partition(text):
    try:
        return partitions.as_partition(
            int(x) for x in str(text).replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_composition(text):
    try:
        return partitions.as_composition(
            int(x) for x in str(text).replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _read_input(args):
    """Input document from --input path, '-' for stdin, or {} if absent."""
    src = getattr(args, "input", None)
    if not src:
        return {}
    raw = sys.stdin.read() if src == "-" else Path(src).read_text()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"input is not valid JSON: {exc}") from None


def _matrix_arg(args, doc, key, n=None, required=True):
    inline = getattr(args, key.replace("-", "_"), None)
    spec = inline if inline is not None else doc.get(key)
    if spec is None:
        if required:
            raise ParseError(f"missing matrix {key!r}")
        return None
    return parse_matrix_spec(spec, n=n or doc.get("n"))


def _build_pair(args, doc):
    n = doc.get("n")
    S = _matrix_arg(args, doc, "S", n=n)
    f = _matrix_arg(args, doc, "f", n=n or S.rows)
    if f.rows != S.rows:
        raise ParseError("S and f sizes differ")
    return whitpair.WhittakerPair(S.rows, S, f)


# ---------------------------------------------------------------------------
# handlers (each returns a JSON-able payload; MathError propagates)


def cmd_orbit_classify(args):
    doc = _read_input(args)
    N = _matrix_arg(args, doc, "matrix", n=getattr(args, "n", None) or doc.get("n"))
    lam = orbits.jordan_partition(N)
    cls = orbits.sl_class(N)
    return {"partition": list(lam), "sl_class": cls.to_json()}


def cmd_orbit_closure(args):
    eta = parse_composition(args.eta)
    gamma = parse_composition(args.gamma)
    return {"leq": partitions.closure_leq(eta, gamma)}


def cmd_classify(args):
    g = partitions.GroupType(args.group, args.field)
    lam = parse_partition(args.lam)
    return {"group": g.to_json(), "lambda": list(lam),
            **partitions.classify(g, lam).to_json()}


def cmd_pair_check(args):
    doc = _read_input(args)
    pair = _build_pair(args, doc)
    h, Z = whitpair.find_Z(pair)
    return {"valid": True,
            "S_is_neutral": orbits.is_neutral_pair(pair.S, pair.f),
            "h": h.to_json(), "Z": Z.to_json()}


def cmd_pair_chain(args):
    doc = _read_input(args)
    pair = _build_pair(args, doc)
    if args.t is not None:
        h, Z = whitpair.find_Z(pair)
        snap = whitpair.snapshot(h, Z, pair.f, rat_parse(args.t))
        return snap.to_json()
    return whitpair.chain(pair).to_json()


def cmd_quasi_criticals(args):
    doc = _read_input(args)
    pair = _build_pair(args, doc)
    h = _matrix_arg(args, doc, "h", n=pair.n, required=False)
    if h is None:
        h, _ = whitpair.find_Z(pair)
    vals, count = whitpair.quasi_criticals(pair.S, pair.f, h)
    return {"quasi_criticals": [rat_str(t) for t in vals],
            "in_invariant": count, "h": h.to_json()}


def cmd_model_data(args):
    doc = _read_input(args)
    pair = _build_pair(args, doc)
    fp = _matrix_arg(args, doc, "f_prime", n=pair.n, required=False)
    if fp is not None:
        data = whitpair.quasi_model_data(whitpair.WhittakerTriple(pair, fp))
    else:
        data = whitpair.model_data(pair)
    return {name: {"dim": sp.dim, "basis": sp.to_json()}
            for name, sp in sorted(data.items())}


def cmd_deform_gl(args):
    cert = deform.deform_gl(parse_partition(args.mu), parse_partition(args.lam))
    return cert.to_json()


def cmd_deform_sl(args):
    res = deform.deform_sl(parse_partition(args.mu), parse_partition(args.lam),
                           rat_parse(args.a), rat_parse(args.b))
    if isinstance(res, deform.ConditionNotMet):
        return MathRejection(res.to_json())
    return res.to_json()


def cmd_compar(args):
    return deform.compar_certificate(
        parse_partition(args.mu), parse_partition(args.lam)).to_json()


class MathRejection:
    """Wraps a payload that must be reported with exit code 2."""

    def __init__(self, payload):
        self.payload = payload


# ---------------------------------------------------------------------------
# fixtures


def fixture_dir():
    override = os.environ.get(FIXTURE_ENV)
    return Path(override) if override else Path(__file__).parent / "fixtures"


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _run_fixture(fx):
    kind = fx["kind"]
    inp = fx["input"]
    n = inp.get("n")
    if kind == "chain":
        pair = whitpair.WhittakerPair(
            n, parse_matrix_spec(inp["S"], n), parse_matrix_spec(inp["f"], n))
        cert = whitpair.chain(pair)
        bg = whitpair.bigrading(cert.h, cert.Z)
        weight_pairs = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                E = QMatrix.elementary(n, i, j)
                key = next((a, b) for (a, b), sp in bg.components.items()
                           if sp.member(E.flat()))
                weight_pairs[f"E{i}{j}"] = [rat_str(key[0]), rat_str(key[1])]
        return {
            "criticals": [rat_str(t) for t in cert.criticals],
            "lr_dims": [[s.l.dim, s.r.dim] for s in cert.snapshots],
            "l_at_second_node": cert.snapshots[1].l.to_json()
            if len(cert.snapshots) > 1 else [],
            "obstructions": [{"t": rat_str(o["t"]),
                              "space": o["space"].to_json(),
                              "dual": o["dual"].to_json()}
                             for o in cert.obstructions],
            "weight_pairs": weight_pairs,
        }
    if kind == "quasi":
        S = parse_matrix_spec(inp["S"], n)
        f = parse_matrix_spec(inp["f"], n)
        h = parse_matrix_spec(inp["h"], n)
        pair = whitpair.WhittakerPair(n, S, f)
        vals, count = whitpair.quasi_criticals(S, f, h)
        out = {"quasi_criticals": [rat_str(t) for t in vals],
               "min": rat_str(min(vals)), "in_invariant": count}
        if "probes" in inp:
            t0 = min(vals)
            St = h + (S - h).scale(t0)
            probes = {}
            for name, spec in inp["probes"].items():
                comps = whitpair.weight_components(St, parse_matrix_spec(spec, n))
                probes[name] = sorted(rat_str(r) for r in comps)
            out["probe_weights_at_min"] = probes
        return out
    if kind == "sl2":
        f = parse_matrix_spec(inp["f"], n)
        h = parse_matrix_spec(inp["h"], n)
        e = orbits.sl2_complete(f, h)
        out = {"e": e.to_json(),
               "triple_ok": (h.bracket(e) == e.scale(2)
                             and e.bracket(f) == h
                             and h.bracket(f) == f.scale(-2))}
        if "S_probe" in inp:
            Sp = parse_matrix_spec(inp["S_probe"], n)
            space = whitpair.graded_space(Sp, lambda r: r == 1)
            out["S_probe_weight1_dim"] = space.dim
        return out
    raise ParseError(f"unknown fixture kind {kind!r}")


def verify_fixtures(name_filter=None, out=None):
    """Run every embedded fixture; returns the number of failures."""
    out = out if out is not None else sys.stdout
    files = sorted(fixture_dir().glob("*.json"))
    if not files:
        print("no fixtures found", file=out)
        return 1
    failures = 0
    for path in files:
        fx = json.loads(path.read_text())
        if name_filter and name_filter not in fx["name"]:
            continue
        try:
            actual = _run_fixture(fx)
        except Exception as exc:   # a crash is a failure with a reason
            print(f"FAIL {fx['name']}: {type(exc).__name__}: {exc}", file=out)
            failures += 1
            continue
        got, want = canonical_json(actual), canonical_json(fx["expected"])
        if got == want:
            print(f"PASS {fx['name']}", file=out)
        else:
            failures += 1
            print(f"FAIL {fx['name']}", file=out)
            for key in sorted(set(fx["expected"]) | set(actual)):
                g = canonical_json(actual.get(key))
                w = canonical_json(fx["expected"].get(key))
                if g != w:
                    print(f"  {key}:\n    expected {w}\n    actual   {g}", file=out)
    return failures


def cmd_verify_fixtures(args):
    failures = verify_fixtures(args.filter)
    if failures:
        return MathRejection({"failures": failures})
    return {"failures": 0}


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _render_text(payload, out):
    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)):
                    print(f"{pad}{k}:", file=out)
                    walk(v, indent + 1)
                else:
                    print(f"{pad}{k}: {v}", file=out)
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    walk(v, indent + 1)
                else:
                    print(f"{pad}{v}", file=out)
        else:
            print(f"{pad}{obj}", file=out)
    walk(payload)


def build_parser():
    p = argparse.ArgumentParser(
        prog="whitforge",
        description="exact certificates for nilpotent orbits and Whittaker pairs")
    p.add_argument("--output", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("orbit-classify", cmd_orbit_classify,
             help="Jordan partition and SL class of a nilpotent matrix")
    sp.add_argument("--matrix")
    sp.add_argument("--n", type=int)
    sp.add_argument("input", nargs="?")

    sp = add("orbit-closure", cmd_orbit_closure,
             help="closure order on orbit compositions")
    sp.add_argument("--eta", required=True)
    sp.add_argument("--gamma", required=True)

    sp = add("classify", cmd_classify,
             help="special/admissible/quasi-admissible classification")
    sp.add_argument("--group", required=True, choices=partitions.GROUP_TAGS)
    sp.add_argument("--field", default="padic", choices=partitions.FIELD_FLAVORS)
    sp.add_argument("--lambda", dest="lam", required=True)

    for name, fn, with_t in (("pair-check", cmd_pair_check, False),
                             ("pair-chain", cmd_pair_chain, True),
                             ("quasi-criticals", cmd_quasi_criticals, False),
                             ("model-data", cmd_model_data, False)):
        sp = add(name, fn)
        sp.add_argument("--S")
        sp.add_argument("--f")
        sp.add_argument("--h")
        sp.add_argument("--f-prime")
        sp.add_argument("--n", type=int)
        if with_t:
            sp.add_argument("--t")
        sp.add_argument("input", nargs="?")

    sp = add("deform-gl", cmd_deform_gl, help="orbit-raising certificate")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--lambda", dest="lam", required=True)

    sp = add("deform-sl", cmd_deform_sl, help="SL orbit-raising certificate")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = add("compar", cmd_compar, help="orbit-comparison hypothesis certificate")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--lambda", dest="lam", required=True)

    sp = add("verify-fixtures", cmd_verify_fixtures,
             help="run the embedded worked-example fixtures")
    sp.add_argument("--filter")

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        result = args.fn(args)
    except ParseError as exc:
        print(json.dumps({"error": "ParseError", "message": str(exc)},
                         sort_keys=True), file=sys.stderr)
        return 1
    except MathError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                         sort_keys=True), file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, MathRejection):
        code, result = 2, result.payload
    if args.output == "json":
        print(canonical_json(result), file=out)
    else:
        _render_text(result, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
