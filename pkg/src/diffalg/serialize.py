"""JSON encodings of algebra elements, module vectors and series.

Scalars are strings "p/q" (or "p").  Half-integer indices are stored doubled.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .diffop import DiffOp
from .fock import BOSONIC, FERMIONIC, bose_monomial, ferm_monomial
from .glinf import InfMat
from .matliealg import GlHatElem
from .numkernel import QSeries, scalar, scalar_str


class SchemaError(ValueError):
    pass


def dumps(obj) -> str:
    """Compact deterministic JSON."""
    return json.dumps(obj, separators=(",", ":"))


def parse_scalar(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"scalar must be a string or integer, got {x!r}")
    try:
        return scalar(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad scalar {x!r}") from exc


def _int(d: dict, key: str) -> int:
    v = d.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"field {key!r} must be an integer")
    return v


def _terms(d) -> list:
    if not isinstance(d, dict):
        raise SchemaError("expected a JSON object")
    t = d.get("terms", [])
    if not isinstance(t, list) or not all(isinstance(x, dict) for x in t):
        raise SchemaError("'terms' must be a list of objects")
    return t


# ---------------------------------------------------------------- algebra elements


def diffop_to_json(a: DiffOp) -> dict:
    return {"terms": [{"m": m, "r": r, "c": scalar_str(c)} for (m, r), c in sorted(a.terms.items())]}


def diffop_from_json(d: dict) -> DiffOp:
    out: dict = {}
    for t in _terms(d):
        key = (_int(t, "m"), _int(t, "r"))
        out[key] = out.get(key, Fraction(0)) + parse_scalar(t.get("c", "1"))
    try:
        return DiffOp(out)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def glhat_to_json(x: GlHatElem, with_n: bool = True) -> dict:
    out = {"n": x.n} if with_n else {}
    out["kappa"] = scalar_str(x.kappa)
    out["terms"] = [
        {"i": i, "j": j, "m": m, "r": r, "c": scalar_str(c)} for (i, j, m, r), c in sorted(x.terms.items())
    ]
    return out


def glhat_from_json(d: dict, n: int | None = None) -> GlHatElem:
    terms = _terms(d)
    if "n" in d:
        n = _int(d, "n")
    if n is None:
        raise SchemaError("matrix size 'n' missing")
    out: dict = {}
    for t in terms:
        key = (_int(t, "i"), _int(t, "j"), _int(t, "m"), _int(t, "r"))
        out[key] = out.get(key, Fraction(0)) + parse_scalar(t.get("c", "1"))
    try:
        return GlHatElem(n, out, parse_scalar(d.get("kappa", "0")))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def infmat_to_json(x: InfMat) -> dict:
    return {
        "kappa0": scalar_str(x.kappa0),
        "terms": [{"l2": l2, "k2": k2, "c": scalar_str(c)} for (l2, k2), c in sorted(x.terms.items())],
    }


def infmat_from_json(d: dict) -> InfMat:
    out: dict = {}
    for t in _terms(d):
        key = (_int(t, "l2"), _int(t, "k2"))
        out[key] = out.get(key, Fraction(0)) + parse_scalar(t.get("c", "1"))
    try:
        return InfMat(out, parse_scalar(d.get("kappa0", "0")))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# ---------------------------------------------------------------- vectors


def fock_to_json(module, v: dict) -> dict:
    terms = []
    for mono, c in sorted(v.items()):
        if module is FERMIONIC:
            terms.append({"bars": list(mono[0]), "thetas": list(mono[1]), "c": scalar_str(c)})
        else:
            terms.append({"xbars": [list(p) for p in mono[0]], "xs": [list(p) for p in mono[1]], "c": scalar_str(c)})
    return {"space": module.tag, "terms": terms}


def _odd_negative(xs) -> tuple:
    if not isinstance(xs, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in xs):
        raise SchemaError("index lists must hold integers")
    if any(x >= 0 or x % 2 == 0 for x in xs):
        raise SchemaError("variable indices must be negative odd (doubled half-integers)")
    return tuple(xs)


def fock_from_json(d: dict):
    """Returns (module, vector dict)."""
    space = d.get("space") if isinstance(d, dict) else None
    out: dict = {}
    if space == "fermionic":
        module = FERMIONIC
        for t in _terms(d):
            bars, thetas = _odd_negative(t.get("bars", [])), _odd_negative(t.get("thetas", []))
            if len(set(bars)) != len(bars) or len(set(thetas)) != len(thetas):
                raise SchemaError("repeated fermionic variable")
            for m, c in ferm_monomial(sorted(thetas), sorted(bars)).terms:
                sign = _perm_sign(bars) * _perm_sign(thetas)
                out[m] = out.get(m, Fraction(0)) + c * sign * parse_scalar(t.get("c", "1"))
    elif space == "bosonic":
        module = BOSONIC
        for t in _terms(d):
            blocks = []
            for key in ("xbars", "xs"):
                pairs = t.get(key, [])
                if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
                    raise SchemaError(f"{key!r} must be a list of [index, exponent] pairs")
                idx = _odd_negative([p[0] for p in pairs])
                exps = [p[1] for p in pairs]
                if not all(isinstance(e, int) and e > 0 for e in exps):
                    raise SchemaError("exponents must be positive integers")
                acc: dict = {}
                for i, e in zip(idx, exps):
                    acc[i] = acc.get(i, 0) + e
                blocks.append(acc)
            for m, c in bose_monomial(xs=blocks[1], xbars=blocks[0]).terms:
                out[m] = out.get(m, Fraction(0)) + c * parse_scalar(t.get("c", "1"))
    else:
        raise SchemaError("'space' must be 'fermionic' or 'bosonic'")
    return module, {k: v for k, v in out.items() if v}


def _perm_sign(xs) -> int:
    """Sign of the permutation sorting xs."""
    s = 1
    xs = list(xs)
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            if xs[a] > xs[b]:
                s = -s
    return s


def vac_to_json(v: dict) -> dict:
    return {"terms": [{"mono": [list(g) for g in mono], "c": scalar_str(c)} for mono, c in sorted(v.items())]}


def vac_from_json(d: dict) -> dict:
    out: dict = {}
    for t in _terms(d):
        mono = t.get("mono", [])
        if not isinstance(mono, list) or not all(isinstance(g, list) and len(g) == 5 for g in mono):
            raise SchemaError("'mono' must be a list of 5-integer generator ids")
        key = tuple(tuple(int(x) for x in g) for g in mono)
        if list(key) != sorted(key):
            raise SchemaError("PBW monomials must list generator ids in increasing order")
        out[key] = out.get(key, Fraction(0)) + parse_scalar(t.get("c", "1"))
    return {k: v for k, v in out.items() if v}


def qseries_to_json(q: QSeries) -> list[str]:
    return [scalar_str(c) for c in q.coeffs]
