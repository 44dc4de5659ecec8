"""Command-line front end.

Every subcommand is turned into a job {"command", "payload", "output_format"}
whose payload is validated against a JSON schema before any computation.
Exit codes: 0 for definite verdicts, 3 when a verdict is inconclusive, 1 for
input errors.
"""

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from importlib import resources

import jsonschema

from . import __version__

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 3

# -- schemas -------------------------------------------------------------------------------

RATIONAL = {"type": ["string", "integer"], "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}
FIELD_ELEM = {"anyOf": [RATIONAL, {"type": "array", "items": RATIONAL, "minItems": 1}]}
FIELD = {"anyOf": [{"const": "Q"},
                   {"type": "object", "required": ["min_poly"],
                    "properties": {"min_poly": {"type": "array", "items": {"type": "integer"},
                                                "minItems": 2}}}]}
GRAM = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": FIELD_ELEM}}
FORM = {"type": "object", "required": ["gram"],
        "properties": {"field": FIELD, "gram": GRAM}}
QUAT = {"type": "object", "required": ["beta", "gamma"],
        "properties": {"field": FIELD, "beta": FIELD_ELEM, "gamma": FIELD_ELEM}}
QUAT_ELEM = {"type": "array", "items": FIELD_ELEM, "minItems": 4, "maxItems": 4}
L_ELEM = {"anyOf": [FIELD_ELEM, {"type": "object", "required": ["u"],
                                 "properties": {"u": FIELD_ELEM, "v": FIELD_ELEM}}]}
CYCLIC = {"anyOf": [
    {"type": "object", "required": ["cyclic"],
     "properties": {"cyclic": {"type": "object", "required": ["q", "alpha"],
                               "properties": {"q": {"type": "integer"}, "alpha": RATIONAL}}}},
    {"type": "object", "required": ["quadratic"],
     "properties": {"quadratic": {"type": "object", "required": ["beta", "alpha"],
                                  "properties": {"field": FIELD, "beta": FIELD_ELEM,
                                                 "alpha": FIELD_ELEM}}}}]}
MATRIX4 = {"anyOf": [{"type": "string"},
                     {"type": "array", "minItems": 4, "maxItems": 4,
                      "items": {"anyOf": [RATIONAL, {"type": "object"}]}}]}
DESCRIPTOR = {"type": "object", "required": ["construction"],
              "properties": {"field": FIELD,
                             "construction": {"enum": ["SO-form", "SL-n-over-F", "SL-n-over-D",
                                                       "SU-over-L", "SU-over-D", "SL1-cyclic"]},
                             "gram": GRAM, "diagonal": {"type": "array", "items": FIELD_ELEM},
                             "n": {"type": "integer", "minimum": 1}, "algebra": {"type": "object"},
                             "beta": FIELD_ELEM, "tau": {"enum": ["tau_c", "tau_r"]},
                             "hermitian": {"type": "array"}}}
POS = {"type": "integer", "minimum": 1}


def _obj(required, **props):
    return {"type": "object", "required": list(required), "properties": props}


SCHEMAS = {
    "field places": _obj(["field"], field=FIELD),
    "form diag": _obj(["form"], form=FORM),
    "form witt": _obj(["form"], form=FORM),
    "form isotropic": _obj(["form"], form=FORM),
    "form qrank": _obj(["form"], form=FORM),
    "form signature": _obj(["form"], form=FORM, place={"type": "integer", "minimum": 0}),
    "quat mul": _obj(["algebra", "x", "y"], algebra=QUAT, x=QUAT_ELEM, y=QUAT_ELEM),
    "quat norm": _obj(["algebra", "x"], algebra=QUAT, x=QUAT_ELEM),
    "quat division": _obj(["algebra"], algebra=QUAT),
    "quat splits": _obj(["algebra"], algebra=QUAT, place={"type": "integer", "minimum": 0}),
    "quat embed": _obj(["algebra", "x"], algebra=QUAT, x=QUAT_ELEM),
    "quat hermdiag": _obj(["algebra", "gram"], algebra=QUAT, tau={"enum": ["tau_c", "tau_r"]},
                          gram={"type": "array", "items": {"type": "array", "items": QUAT_ELEM}}),
    "cyclic mul": _obj(["algebra", "x", "y"], algebra=CYCLIC,
                       x={"type": "array", "items": L_ELEM}, y={"type": "array", "items": L_ELEM}),
    "cyclic division": _obj(["algebra"], algebra=CYCLIC),
    "cyclic embed": _obj(["algebra", "x"], algebra=CYCLIC, x={"type": "array", "items": L_ELEM}),
    "cyclic criterion": _obj(["p", "q"], p=POS, q=POS),
    "lattice build": _obj(["desc"], desc=DESCRIPTOR),
    "lattice irreducible-so": _obj(["targets"], targets={
        "type": "array", "minItems": 1,
        "items": {"type": "array", "minItems": 2, "maxItems": 2,
                  "items": {"type": "integer", "minimum": 0}}}),
    "lattice sl3-noncocompact": _obj(["r"], r={"type": "integer", "minimum": 2}),
    "lattice sl3-cyclic": _obj(["q", "p"], q=POS, p=POS),
    "lattice tables": _obj(["label"], label={"type": "string"}),
    "sl2z reduce": _obj(["z"], z={"type": "string"}),
    "sl2z area": _obj([], tol={"type": "number", "exclusiveMinimum": 0}),
    "sl2z congruence": _obj(["n", "matrix"], n=POS, matrix={
        "type": "array", "minItems": 4, "maxItems": 4, "items": {"type": "integer"}}),
    "sl2z order-mod": _obj(["n"], n=POS),
    "sl2z torsion": _obj(["n"], n=POS, samples={"type": "integer", "minimum": 0},
                         seed={"type": "integer"}),
    "sl2z mahler": _obj(["form", "height"], form=FORM, height=POS),
    "pingpong certify": _obj(["g1"], g1=MATRIX4, g2=MATRIX4, g2_conj=MATRIX4, nmax=POS),
    "pingpong validate": _obj(["cert"], cert={"type": "object"}, maxlen=POS),
}


class InputError(Exception):
    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = violations or []


def validate(command, payload):
    if command not in SCHEMAS:
        raise InputError(f"unknown command {command!r}")
    validator = jsonschema.Draft7Validator(SCHEMAS[command])
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        raise InputError("schema violation", [
            {"path": "/" + "/".join(str(p) for p in e.absolute_path), "message": e.message}
            for e in errors])


# -- handlers ------------------------------------------------------------------------------

def _frac(x):
    from .arith import to_fraction
    return to_fraction(x)


def _fs(x):
    from .arith import fraction_str
    return fraction_str(Fraction(x))


def _form(desc):
    from .quadform import QuadraticForm
    return QuadraticForm.from_json(desc)


def _place(F, idx):
    if idx is None:
        return None
    reals = F.real_places()
    if idx >= len(reals):
        raise InputError(f"real place #{idx} does not exist")
    return reals[idx]


def h_field_places(p):
    from .numfield import field_from_json
    F = field_from_json(p["field"])
    r, s = F.signature()
    return {"degree": F.degree, "signature": [r, s],
            "irreducibility": getattr(F, "irreducibility", "rational field"),
            "assumed_irreducible": bool(getattr(F, "assumed_irreducible", False)),
            "places": [{"place": pl.to_json(), "approx": str(pl.approx())} for pl in F.places]}


def h_form_diag(p):
    from .quadform import _enc, diagonalize
    u, d = diagonalize(_form(p["form"]))
    return {"diagonal": [_enc(x) for x in d], "basis_change": [[_enc(x) for x in r] for r in u]}


def h_form_witt(p):
    from .quadform import witt_decompose
    form = _form(p["form"])
    w = witt_decompose(form)
    out = w.to_json()
    out["verdict"] = "decomposed"
    out["certificate"] = {"block_check": w.check(form)}
    return out


def h_form_isotropic(p):
    from .quadform import is_isotropic
    form = _form(p["form"])
    cert = is_isotropic(form)
    out = cert.to_json()
    if cert.verdict != "inconclusive":
        out.setdefault("certificate", {})["rechecked"] = cert.check(form)
    return out


def h_form_qrank(p):
    from .quadform import witt_decompose
    form = _form(p["form"])
    if not form.is_rational:
        raise InputError("qrank needs a form over Q")
    w = witt_decompose(form)
    return {"qrank": w.hyperbolic_count, "verdict": "decided",
            "certificate": {"witt": w.to_json()}}


def h_form_signature(p):
    from .quadform import signature_at
    form = _form(p["form"])
    pl = None if form.is_rational else _place(form.field, p.get("place", 0))
    return {"signature": list(signature_at(form, pl)),
            "place": pl.to_json() if pl else {"kind": "real", "index": 0}}


def _alg(d):
    from .quatalg import algebra_from_json
    return algebra_from_json(d)


def _qel(alg, v):
    from .quadform import _dec
    return alg.element([_dec(alg.base, t) for t in v])


def h_quat_mul(p):
    alg = _alg(p["algebra"])
    return {"product": (_qel(alg, p["x"]) * _qel(alg, p["y"])).to_json()}


def h_quat_norm(p):
    from .quadform import _enc
    from .quatalg import reduced_norm, reduced_trace
    alg = _alg(p["algebra"])
    x = _qel(alg, p["x"])
    return {"reduced_norm": _enc(reduced_norm(x)), "reduced_trace": _enc(reduced_trace(x))}


def h_quat_division(p):
    from .quatalg import is_division
    alg = _alg(p["algebra"])
    v = is_division(alg)
    out = v.to_json()
    if v.verdict != "inconclusive":
        out["certificate"]["rechecked"] = v.check(alg)
    return out


def h_quat_splits(p):
    from .quatalg import splits_at
    alg = _alg(p["algebra"])
    pl = _place(alg.base, p.get("place", 0))
    return {"splits": splits_at(alg, pl), "place": pl.to_json()}


def h_quat_embed(p):
    from .quatalg import embed_mat2
    alg = _alg(p["algebra"])
    m = embed_mat2(_qel(alg, p["x"]))
    return {"matrix": [[z.to_json() if hasattr(z, "to_json") else _fs(z) for z in r] for r in m]}


def h_quat_hermdiag(p):
    from .quatalg import HermitianFormOverD, hermitian_diag_over_D
    alg = _alg(p["algebra"])
    gram = [[_qel(alg, x) for x in r] for r in p["gram"]]
    hd = hermitian_diag_over_D(HermitianFormOverD(alg, gram, p.get("tau", "tau_c")))
    out = hd.to_json()
    for d in out["places"]:
        fam, params = d["label"]
        d["label"] = {"family": fam, "params": list(params)}
        if "signature" in d:
            d["signature"] = list(d["signature"])
    return out


def _cyclic(d):
    from .cyclicalg import CyclicAlgebra, cyclotomic_real_subfield
    from .numfield import QuadraticExtension, field_from_json
    from .quadform import _dec
    if "cyclic" in d:
        c = d["cyclic"]
        return CyclicAlgebra(cyclotomic_real_subfield(int(c["q"])), _frac(c["alpha"]))
    c = d["quadratic"]
    F = field_from_json(c.get("field", "Q"))
    return CyclicAlgebra(QuadraticExtension(F, _dec(F, c["beta"])), _dec(F, c["alpha"]))


def _cel(alg, xs):
    from .numfield import QuadraticExtension
    from .quadform import _dec
    ext = alg.ext
    out = []
    for x in xs:
        if isinstance(ext, QuadraticExtension):
            if isinstance(x, dict):
                out.append(ext(_dec(ext.base, x["u"]), _dec(ext.base, x.get("v", "0"))))
            else:
                out.append(ext.coerce(_dec(ext.base, x)))
        else:
            out.append(ext.coerce([_frac(t) for t in x] if isinstance(x, list) else _frac(x)))
    return alg(*out)


def h_cyclic_mul(p):
    alg = _cyclic(p["algebra"])
    return {"product": (_cel(alg, p["x"]) * _cel(alg, p["y"])).to_json()}


def h_cyclic_division(p):
    from .cyclicalg import is_division_cyclic
    alg = _cyclic(p["algebra"])
    v = is_division_cyclic(alg)
    out = v.to_json()
    if "certificate" in out:
        out["certificate"] = dict(out["certificate"], rechecked=v.check(alg))
    return out


def h_cyclic_embed(p):
    from .cyclicalg import embed_cyclic_matrix
    alg = _cyclic(p["algebra"])
    m = embed_cyclic_matrix(_cel(alg, p["x"]))
    return {"matrix": [[z.to_json() for z in r] for r in m]}


def h_cyclic_criterion(p):
    from .cyclicalg import prime_criterion
    try:
        return prime_criterion(int(p["p"]), int(p["q"]))
    except ValueError as e:
        raise InputError(str(e))


def h_lattice_build(p):
    from .latticekit import build_lattice
    return build_lattice(p["desc"]).to_json()


def h_lattice_irred(p):
    from .latticekit import irreducible_so_recipe
    return irreducible_so_recipe([tuple(t) for t in p["targets"]]).to_json()


def h_lattice_sl3(p):
    from .latticekit import sl3_noncocompact_family
    desc, rep = sl3_noncocompact_family(int(p["r"]))
    return dict(rep.to_json(), descriptor=desc.to_json())


def h_lattice_cyclic(p):
    from .latticekit import cocompact_sl3_cyclic
    desc, rep = cocompact_sl3_cyclic(int(p["q"]), int(p["p"]))
    return dict(rep.to_json(), descriptor=desc.to_json())


def h_lattice_tables(p):
    from .latticekit import GroupLabel, NotSimpleError, normalized_type, table_row
    row = table_row(GroupLabel.parse(p["label"]))
    try:
        row["normalized_type"] = "".join(str(x) for x in normalized_type(p["label"]))
    except NotSimpleError as e:
        row["normalized_type"] = None
        row["simple"] = str(e)
    return row


def h_sl2z_reduce(p):
    from .sl2z import reduce_to_fundamental
    return reduce_to_fundamental(p["z"]).to_json()


def h_sl2z_area(p):
    from .sl2z import fundamental_area
    return fundamental_area(p.get("tol", 1e-6)).to_json()


def h_sl2z_congruence(p):
    from .sl2z import congruence_member
    a, b, c, d = p["matrix"]
    if a * d - b * c != 1:
        raise InputError("matrix must have determinant 1")
    return {"member": congruence_member(((a, b), (c, d)), p["n"]), "level": p["n"]}


def h_sl2z_order(p):
    from .sl2z import sl2_mod_order
    return {"level": p["n"], "order": sl2_mod_order(p["n"])}


def h_sl2z_torsion(p):
    from .sl2z import torsion_free_check
    return torsion_free_check(p["n"], p.get("samples", 10000), p.get("seed", 0))


def h_sl2z_mahler(p):
    from .sl2z import mahler_min
    return mahler_min(_form(p["form"]), p["height"]).to_json()


def _mat4(x):
    from .pingpong import as_matrix
    from .surd import Surd
    if isinstance(x, str):
        return as_matrix(x)
    vals = [Surd.from_json(t) for t in x]
    return as_matrix([vals[:2], vals[2:]])


def h_pp_certify(p):
    from .pingpong import PingPongFailure, find_certificate, mat_inv, mat_mul
    g1 = _mat4(p["g1"])
    if "g2" in p:
        g2 = _mat4(p["g2"])
    elif "g2_conj" in p:
        h = _mat4(p["g2_conj"])
        g2 = mat_mul(mat_mul(h, g1), mat_inv(h))
    else:
        raise InputError("give g2 or g2_conj")
    try:
        cert = find_certificate(g1, g2, p.get("nmax", 20))
    except PingPongFailure as e:
        return {"verdict": "inconclusive", "inconclusive": True, "note": str(e),
                "diagnostics": e.diagnostics}
    return {"verdict": "free", "certificate": cert.to_json(), "n": cert.n}


def h_pp_validate(p):
    from .pingpong import PingPongCertificate, validate_words
    cert = PingPongCertificate.from_json(p["cert"])
    return validate_words(cert, p.get("maxlen", 6))


HANDLERS = {
    "field places": h_field_places,
    "form diag": h_form_diag, "form witt": h_form_witt, "form isotropic": h_form_isotropic,
    "form qrank": h_form_qrank, "form signature": h_form_signature,
    "quat mul": h_quat_mul, "quat norm": h_quat_norm, "quat division": h_quat_division,
    "quat splits": h_quat_splits, "quat embed": h_quat_embed, "quat hermdiag": h_quat_hermdiag,
    "cyclic mul": h_cyclic_mul, "cyclic division": h_cyclic_division,
    "cyclic embed": h_cyclic_embed, "cyclic criterion": h_cyclic_criterion,
    "lattice build": h_lattice_build, "lattice irreducible-so": h_lattice_irred,
    "lattice sl3-noncocompact": h_lattice_sl3, "lattice sl3-cyclic": h_lattice_cyclic,
    "lattice tables": h_lattice_tables,
    "sl2z reduce": h_sl2z_reduce, "sl2z area": h_sl2z_area, "sl2z congruence": h_sl2z_congruence,
    "sl2z order-mod": h_sl2z_order, "sl2z torsion": h_sl2z_torsion, "sl2z mahler": h_sl2z_mahler,
    "pingpong certify": h_pp_certify, "pingpong validate": h_pp_validate,
}
assert set(HANDLERS) == set(SCHEMAS)


# -- reports -------------------------------------------------------------------------------

def is_inconclusive(obj):
    if isinstance(obj, dict):
        if obj.get("inconclusive") is True or obj.get("verdict") == "inconclusive":
            return True
        v = obj.get("verdict")
        if isinstance(v, dict) and "inconclusive" in v.values():
            return True
        return any(is_inconclusive(v) for v in obj.values())
    if isinstance(obj, list):
        return any(is_inconclusive(v) for v in obj)
    return False


def verdicts_complete(obj):
    """Every mapping with a verdict also carries a certificate or an inconclusive marker."""
    if isinstance(obj, dict):
        if "verdict" in obj and "certificate" not in obj and "inconclusive" not in obj:
            return False
        return all(verdicts_complete(v) for v in obj.values())
    if isinstance(obj, list):
        return all(verdicts_complete(v) for v in obj)
    return True


def run(job, timing=False):
    """Execute a job; returns (report, exit_code)."""
    command = job.get("command")
    payload = job.get("payload", {})
    report = {"tool": "latticeforge", "version": __version__, "command": command,
              "input": payload}
    try:
        validate(command, payload)
        t0 = time.perf_counter()
        result = HANDLERS[command](payload)
        elapsed = time.perf_counter() - t0
    except InputError as e:
        report["error"] = {"kind": "input", "message": str(e), "violations": e.violations}
        return report, EXIT_INPUT
    except (ValueError, KeyError, TypeError, ZeroDivisionError, json.JSONDecodeError) as e:
        report["error"] = {"kind": "input", "message": f"{type(e).__name__}: {e}", "violations": []}
        return report, EXIT_INPUT
    report["result"] = result
    if timing:
        report["timing"] = {"seconds": round(elapsed, 6)}
    code = EXIT_INCONCLUSIVE if is_inconclusive(result) else EXIT_OK
    report["status"] = "inconclusive" if code == EXIT_INCONCLUSIVE else "definite"
    return report, code


def render(report, fmt="json"):
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False)
    lines = []

    def walk(x, indent, key=None):
        pad = "  " * indent
        head = f"{pad}{key}:" if key is not None else pad.rstrip()
        if isinstance(x, dict):
            if key is not None:
                lines.append(head)
            for k, v in x.items():
                walk(v, indent + (1 if key is not None else 0), k)
        elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
            lines.append(head)
            for i, v in enumerate(x):
                walk(v, indent + 1, f"[{i}]")
        else:
            val = json.dumps(x, ensure_ascii=False) if not isinstance(x, str) else x
            lines.append(f"{head} {val}" if key is not None else val)
    walk(report, 0)
    return "\n".join(lines)


# -- cookbook ------------------------------------------------------------------------------

COOKBOOK = {
    "irredinSOpq": [
        ("lattice irreducible-so", {"targets": [[2, 3], [1, 4], [1, 4], [0, 5]]}),
        ("lattice irreducible-so", {"targets": [[1, 2], [0, 3]]}),
    ],
    "sl2z": [
        ("sl2z reduce", {"z": "5+2i"}),
        ("sl2z reduce", {"z": "i/2"}),
        ("sl2z reduce", {"z": "1/2+sqrt(3)/2*i"}),
        ("sl2z area", {"tol": 1e-6}),
        ("sl2z congruence", {"n": 2, "matrix": [-1, 0, 0, -1]}),
        ("sl2z congruence", {"n": 3, "matrix": [-1, 0, 0, -1]}),
        ("sl2z order-mod", {"n": 2}),
        ("sl2z order-mod", {"n": 3}),
        ("sl2z torsion", {"n": 2}),
        ("sl2z torsion", {"n": 3, "samples": 2000}),
    ],
    "cyclic-q7": [
        ("cyclic criterion", {"p": p, "q": 7}) for p in (2, 3, 5, 13)
    ] + [
        ("cyclic division", {"algebra": {"cyclic": {"q": 7, "alpha": str(p)}}}) for p in (2, 3, 5, 13)
    ],
    "lattices": [
        ("lattice build", {"desc": {"field": {"min_poly": [-2, 0, 1]}, "construction": "SO-form",
                                    "diagonal": ["1", "1", ["0", "-1"]]}}),
        ("lattice build", {"desc": {"field": {"min_poly": [-2, 0, 1]},
                                    "construction": "SL-n-over-F", "n": 2}}),
        ("lattice build", {"desc": {"field": "Q", "construction": "SO-form",
                                    "diagonal": ["1", "1", "-1", "-1", "-1"]}}),
        ("lattice sl3-noncocompact", {"r": 2}),
        ("form qrank", {"form": {"gram": [["1", "0", "0", "0", "0"], ["0", "1", "0", "0", "0"],
                                          ["0", "0", "-1", "0", "0"], ["0", "0", "0", "-1", "0"],
                                          ["0", "0", "0", "0", "-1"]]}}),
    ],
    "quaternion": [
        ("quat division", {"algebra": {"beta": "-1", "gamma": "-1"}}),
        ("quat division", {"algebra": {"beta": "4", "gamma": "3"}}),
        ("quat division", {"algebra": {"beta": "2", "gamma": "3"}}),
    ],
}


def _golden_path(tag):
    return resources.files("latticeforge").joinpath("goldens", f"{tag}.json")


def cookbook_battery(tag):
    if tag not in COOKBOOK:
        raise InputError(f"unknown cookbook tag {tag!r}; choose from {sorted(COOKBOOK)}")
    out = []
    for command, payload in COOKBOOK[tag]:
        rep, code = run({"command": command, "payload": payload})
        out.append({"command": command, "payload": payload, "exit": code,
                    "result": rep.get("result", rep.get("error"))})
    return out


def diff_fields(a, b, path=""):
    if isinstance(a, dict) and isinstance(b, dict):
        out = []
        for k in sorted(set(a) | set(b), key=str):
            if k not in a or k not in b:
                out.append(f"{path}/{k}")
            else:
                out.extend(diff_fields(a[k], b[k], f"{path}/{k}"))
        return out
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return [path or "/"]
        out = []
        for i, (x, y) in enumerate(zip(a, b)):
            out.extend(diff_fields(x, y, f"{path}/{i}"))
        return out
    return [] if a == b else [path or "/"]


def cookbook(tag, update=False, golden_dir=None):
    """Run a battery and compare with the committed golden output."""
    results = cookbook_battery(tag)
    path = os.path.join(golden_dir, f"{tag}.json") if golden_dir else str(_golden_path(tag))
    if update:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
        return {"tag": tag, "verdict": "updated", "certificate": {"entries": len(results)}}, EXIT_OK
    try:
        with open(path, encoding="utf-8") as fh:
            golden = json.load(fh)
    except FileNotFoundError:
        return {"tag": tag, "verdict": "missing-golden", "inconclusive": True}, EXIT_INPUT
    diffs = diff_fields(golden, json.loads(json.dumps(results)))
    report = {"tag": tag, "entries": len(results),
              "verdict": "match" if not diffs else "diff",
              "certificate": {"divergent_fields": diffs}}
    return report, EXIT_OK if not diffs else EXIT_INPUT


# -- argument parsing ----------------------------------------------------------------------

def _load(arg):
    """JSON from a file path, '-' for stdin, or an inline JSON document."""
    if arg == "-":
        return json.load(sys.stdin)
    s = arg.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    with open(arg, encoding="utf-8") as fh:
        return json.load(fh)


def _ints(text):
    return [int(x) for x in text.split(",")]


def _targets(text):
    return [[int(x) for x in part.split(",")] for part in text.split(";") if part.strip()]


def _poly(text):
    return [int(x) for x in text.split(",")]


def build_parser():
    ap = argparse.ArgumentParser(prog="latticeforge",
                                 description="Exact constructions of arithmetic lattices.")
    ap.add_argument("--version", action="version", version=f"latticeforge {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing")
    groups = ap.add_subparsers(dest="group", required=True)

    def cmd(group, name, build):
        sp = group.add_parser(name, parents=[common])
        build(sp)
        return sp

    g = groups.add_parser("field").add_subparsers(dest="cmd", required=True)
    cmd(g, "places", lambda s: s.add_argument("--poly", required=True, type=_poly,
                                              help="min poly coefficients, lowest first"))

    g = groups.add_parser("form").add_subparsers(dest="cmd", required=True)
    for name in ("diag", "witt", "isotropic", "qrank"):
        cmd(g, name, lambda s: s.add_argument("--form", required=True))
    cmd(g, "signature", lambda s: (s.add_argument("--form", required=True),
                                   s.add_argument("--place", type=int, default=0)))

    g = groups.add_parser("quat").add_subparsers(dest="cmd", required=True)
    cmd(g, "mul", lambda s: (s.add_argument("--algebra", required=True),
                             s.add_argument("--x", required=True), s.add_argument("--y", required=True)))
    cmd(g, "norm", lambda s: (s.add_argument("--algebra", required=True),
                              s.add_argument("--x", required=True)))
    cmd(g, "division", lambda s: s.add_argument("--algebra", required=True))
    cmd(g, "splits", lambda s: (s.add_argument("--algebra", required=True),
                                s.add_argument("--place", type=int, default=0)))
    cmd(g, "embed", lambda s: (s.add_argument("--algebra", required=True),
                               s.add_argument("--x", required=True)))
    cmd(g, "hermdiag", lambda s: (s.add_argument("--algebra", required=True),
                                  s.add_argument("--gram", required=True),
                                  s.add_argument("--tau", choices=("tau_c", "tau_r"), default="tau_c")))

    g = groups.add_parser("cyclic").add_subparsers(dest="cmd", required=True)
    cmd(g, "mul", lambda s: (s.add_argument("--algebra", required=True),
                             s.add_argument("--x", required=True), s.add_argument("--y", required=True)))
    cmd(g, "division", lambda s: s.add_argument("--algebra", required=True))
    cmd(g, "embed", lambda s: (s.add_argument("--algebra", required=True),
                               s.add_argument("--x", required=True)))
    cmd(g, "criterion", lambda s: (s.add_argument("--p", type=int, required=True),
                                   s.add_argument("--q", type=int, required=True)))

    g = groups.add_parser("lattice").add_subparsers(dest="cmd", required=True)
    cmd(g, "build", lambda s: s.add_argument("--desc", required=True))
    cmd(g, "irreducible-so", lambda s: s.add_argument("--targets", required=True, type=_targets))
    cmd(g, "sl3-noncocompact", lambda s: s.add_argument("--r", type=int, required=True))
    cmd(g, "sl3-cyclic", lambda s: (s.add_argument("--q", type=int, required=True),
                                    s.add_argument("--p", type=int, required=True)))
    cmd(g, "tables", lambda s: s.add_argument("--label", required=True))

    g = groups.add_parser("sl2z").add_subparsers(dest="cmd", required=True)
    cmd(g, "reduce", lambda s: s.add_argument("--z", required=True))
    cmd(g, "area", lambda s: s.add_argument("--tol", type=float, default=1e-6))
    cmd(g, "congruence", lambda s: (s.add_argument("--n", type=int, required=True),
                                    s.add_argument("--matrix", type=_ints, required=True)))
    cmd(g, "order-mod", lambda s: s.add_argument("--n", type=int, required=True))
    cmd(g, "torsion", lambda s: (s.add_argument("--n", type=int, required=True),
                                 s.add_argument("--samples", type=int, default=10000),
                                 s.add_argument("--seed", type=int, default=0)))
    cmd(g, "mahler", lambda s: (s.add_argument("--form", required=True),
                                s.add_argument("--height", type=int, default=30)))

    g = groups.add_parser("pingpong").add_subparsers(dest="cmd", required=True)
    cmd(g, "certify", lambda s: (s.add_argument("--g1", required=True), s.add_argument("--g2"),
                                 s.add_argument("--g2-conj", dest="g2_conj"),
                                 s.add_argument("--nmax", type=int, default=20)))
    cmd(g, "validate", lambda s: (s.add_argument("--cert", required=True),
                                  s.add_argument("--maxlen", type=int, default=6)))

    sp = groups.add_parser("run", parents=[common], help="execute a JSON job file")
    sp.add_argument("--job", required=True)
    sp = groups.add_parser("cookbook", parents=[common], help="run a golden example battery")
    sp.add_argument("tag", choices=sorted(COOKBOOK))
    sp.add_argument("--update", action="store_true", help="rewrite the golden file")
    return ap


_FILE_ARGS = {"form", "algebra", "desc", "cert", "gram", "x", "y"}
_SKIP = {"group", "cmd", "output", "timing"}


def payload_from_args(ns):
    payload = {}
    for k, v in vars(ns).items():
        if k in _SKIP or v is None:
            continue
        if k in _FILE_ARGS and isinstance(v, str):
            v = _load(v)
            if k == "cert" and isinstance(v, dict) and "certificate" in v and "g1" not in v:
                v = v["certificate"]
        if k == "poly":
            k, v = "field", {"min_poly": v}
        payload[k] = v
    return payload


def main(argv=None):
    ns = build_parser().parse_args(argv)
    fmt = ns.output
    if ns.group == "cookbook":
        report, code = cookbook(ns.tag, update=ns.update)
    elif ns.group == "run":
        try:
            job = _load(ns.job)
        except (OSError, json.JSONDecodeError) as e:
            report, code = {"error": {"kind": "input", "message": str(e)}}, EXIT_INPUT
        else:
            fmt = job.get("output_format", fmt)
            report, code = run(job, timing=ns.timing)
    else:
        command = f"{ns.group} {ns.cmd}"
        try:
            payload = payload_from_args(ns)
        except (OSError, json.JSONDecodeError) as e:
            report = {"tool": "latticeforge", "version": __version__, "command": command,
                      "error": {"kind": "input", "message": f"{type(e).__name__}: {e}",
                                "violations": []}}
            code = EXIT_INPUT
        else:
            report, code = run({"command": command, "payload": payload}, timing=ns.timing)
    print(render(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
