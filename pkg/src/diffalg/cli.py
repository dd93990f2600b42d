"""Command-line driver.

Exit codes: 0 success or pass, 1 mathematical failure or mismatch, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

from . import checks
from .fock import BOSONIC, FERMIONIC, act_infmat
from .glinf import STANDARD, AlphaCocycle, BetaCocycle, ibracket
from .matliealg import EllConfig, ghbracket
from .numkernel import scalar, scalar_str
from .repmap import sigma_apply
from .serialize import (
    SchemaError,
    dumps,
    fock_from_json,
    fock_to_json,
    glhat_from_json,
    glhat_to_json,
    infmat_from_json,
    infmat_to_json,
    qseries_to_json,
    vac_from_json,
    vac_to_json,
)
from .vacuum import VacuumModule, character, closed_character


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    variant: str = "gl"
    n: int = 2
    ell: list[int] | None = None
    eps: int = 0
    chi: str = "1"
    iota: str = "1/3"
    order: int = 8
    window: int = 2
    depth: int | None = None
    count: int = 200
    pairs: int = 50
    probes: int = 10
    seed: int = 0
    format: str = "json"
    max_order: int = 16
    strict: bool = True

    def ell_config(self) -> EllConfig:
        return EllConfig.make(self.n, self.ell, self.eps, self.variant, self.strict)

    def chi_value(self) -> Fraction:
        return scalar(self.chi)

    def iota_value(self) -> Fraction:
        return scalar(self.iota)

    def int_chi(self) -> int:
        c = self.chi_value()
        if c.denominator != 1:
            raise UsageError("chi must be an integer here")
        return int(c)


_FIELDS = {f.name for f in fields(RunConfig)}


def _ell_arg(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("ell must be a comma-separated list of integers") from exc


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--format", choices=("json", "table"), default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--max-order", dest="max_order", type=int, default=S)
    p.add_argument("--config", type=Path, default=S, help="JSON file with RunConfig fields")
    p.add_argument("--variant", choices=("gl", "o", "sp"), default=S)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--ell", type=_ell_arg, default=S, help="comma-separated column shifts")
    p.add_argument("--eps", type=int, choices=(0, 1), default=S)
    p.add_argument("--chi", default=S)
    p.add_argument("--iota", default=S)
    p.add_argument("--order", type=int, default=S)
    p.add_argument("--window", type=int, default=S)
    p.add_argument("--depth", type=int, default=S)
    p.add_argument("--count", type=int, default=S)
    p.add_argument("--pairs", type=int, default=S)
    p.add_argument("--probes", type=int, default=S)
    p.add_argument("--no-strict", dest="strict", action="store_false", default=S, help="allow column shifts of either parity")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="diffalg", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bracket", parents=[common], help="bracket of two elements given as JSON")
    b.add_argument("x", help="JSON file, '-' for stdin, or an inline JSON object")
    b.add_argument("y")
    b.add_argument("--algebra", choices=("gl", "inf"), default="gl")
    b.add_argument("--cocycle", choices=("standard", "alpha", "beta"), default="standard")
    b.add_argument("--shifts", type=_ell_arg, default=None, help="integer vector for the alpha/beta cocycles")

    sub.add_parser("character", parents=[common], help="enumerated and closed-form vacuum characters")

    a = sub.add_parser("act", parents=[common], help="act with an element on a module vector")
    a.add_argument("--element", required=True)
    a.add_argument("--vector", default=None, help="defaults to the vacuum (or 1)")
    a.add_argument("--module", choices=("fermionic", "bosonic", "vacuum"), default="fermionic")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", nargs="?", choices=checks.SUITE_NAMES)
    v.add_argument("--list", action="store_true")

    sub.add_parser("list-basis", parents=[common], help="generators of the negative part by degree")
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    path = getattr(ns, "config", None)
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(data) - _FIELDS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        for k, val in data.items():
            setattr(cfg, k, val)
    for k in _FIELDS:
        if hasattr(ns, k):
            setattr(cfg, k, getattr(ns, k))
    cfg.chi, cfg.iota = str(cfg.chi), str(cfg.iota)
    try:
        scalar(cfg.chi), scalar(cfg.iota)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad scalar: {exc}") from exc
    return cfg


def _load_json(arg: str):
    try:
        if arg.lstrip().startswith("{"):
            return json.loads(arg)
        if arg == "-":
            return json.load(sys.stdin)
        return json.loads(Path(arg).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _emit(rc: RunConfig, payload, table: str) -> None:
    print(dumps(payload) if rc.format == "json" else table)


# ---------------------------------------------------------------- commands


def cmd_bracket(rc: RunConfig, ns) -> int:
    dx, dy = _load_json(ns.x), _load_json(ns.y)
    if ns.algebra == "gl":
        x, y = glhat_from_json(dx, rc.n), glhat_from_json(dy, rc.n)
        if x.n != y.n:
            raise UsageError("elements have different sizes")
        z = ghbracket(x, y)
        _emit(rc, glhat_to_json(z, with_n=False), repr(z))
        return 0
    if ns.cocycle == "standard":
        co = STANDARD
    else:
        shifts = ns.shifts if ns.shifts is not None else [0] * rc.n
        k = rc.iota_value()
        if k.denominator != 1:
            raise UsageError("the alpha and beta cocycles need an integer --iota")
        co = AlphaCocycle(int(k), shifts) if ns.cocycle == "alpha" else BetaCocycle(int(k), shifts)
    z = ibracket(infmat_from_json(dx), infmat_from_json(dy), co)
    _emit(rc, infmat_to_json(z), repr(z))
    return 0


def cmd_character(rc: RunConfig, ns) -> int:
    if rc.order < 0 or rc.order > rc.max_order:
        raise UsageError(f"order must lie in [0, {rc.max_order}]")
    cfg = rc.ell_config()
    enum, closed = character(cfg, rc.order), closed_character(cfg, rc.order)
    match = enum == closed
    coeffs = qseries_to_json(enum)
    payload = {
        "check": "character",
        "params": {"variant": cfg.variant, "n": cfg.n, "ell": list(cfg.ell), "eps": cfg.eps, "order": rc.order},
        "enumerated": coeffs,
        "closed": qseries_to_json(closed),
        "match": match,
    }
    table = " ".join(coeffs) + (" | match" if match else " | mismatch " + " ".join(qseries_to_json(closed)))
    _emit(rc, payload, table)
    return 0 if match else 1


def cmd_act(rc: RunConfig, ns) -> int:
    de = _load_json(ns.element)
    if ns.module == "vacuum":
        cfg = rc.ell_config()
        mod = VacuumModule(cfg, rc.chi_value())
        v = mod.vacuum() if ns.vector is None else vac_from_json(_load_json(ns.vector))
        x = glhat_from_json(de, cfg.n)
        try:
            out = mod.act(x, v, check=True)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        _emit(rc, vac_to_json(out), _table_vec(out))
        return 0
    module = FERMIONIC if ns.module == "fermionic" else BOSONIC
    if ns.vector is None:
        v = module.one()
    else:
        module2, v = fock_from_json(_load_json(ns.vector))
        if module2 is not module:
            raise UsageError("vector space does not match --module")
    if isinstance(de, dict) and "kappa0" in de:
        out = act_infmat(module, infmat_from_json(de), v)
    else:
        out = sigma_apply(glhat_from_json(de, rc.n), rc.iota_value(), module, v)
    out = {k: c for k, c in out.items() if c}
    _emit(rc, fock_to_json(module, out), _table_vec(out))
    return 0


def _table_vec(v: dict) -> str:
    if not v:
        return "0"
    return "\n".join(f"{scalar_str(c)}\t{m}" for m, c in sorted(v.items()))


SUITE_HELP = {
    "jacobi": "antisymmetry and Jacobi identity of the matrix differential-operator bracket",
    "cocycles": "Jacobi identity of the infinite-matrix bracket for the standard, alpha and beta cocycles",
    "hom": "the representation maps are Lie homomorphisms on seeded pairs and probes",
    "singular": "the power of the singular generator on the vacuum is annihilated and diagonal-scaled",
    "locality": "least locality order for generator fields on the vacuum module",
    "conformal": "conformal-algebra axioms on basis triples",
    "bracket-equiv": "mode commutator formula for the current realization, algebra and Fock sides",
    "virasoro": "Virasoro relations for the conformal vector and its central scalar",
    "fock-rep": "fermionic and bosonic Fock spaces are representations with center +1 and -1",
}


def run_suite(name: str, rc: RunConfig):
    s = rc.seed
    if name == "jacobi":
        return checks.suite_jacobi(s, rc.count)
    if name == "cocycles":
        return checks.suite_cocycles(s, rc.count)
    if name == "fock-rep":
        return checks.suite_fock_rep(s, rc.count)
    if name == "conformal":
        return checks.suite_conformal(rc.n, 2, s, rc.count)
    if name == "bracket-equiv":
        return checks.suite_bracket_equiv(rc.n, rc.iota_value(), s, rc.pairs, rc.window)
    cfg = rc.ell_config()
    if name == "hom":
        return checks.suite_hom(cfg, rc.iota_value(), s, rc.pairs, rc.probes)
    if name == "singular":
        chi = rc.int_chi()
        if chi < 0:
            raise UsageError("chi must be nonnegative")
        return checks.suite_singular(cfg, chi, rc.depth)
    if name == "locality":
        return checks.suite_locality(cfg, rc.chi_value(), rc.window)
    if name == "virasoro":
        return checks.suite_virasoro(cfg, rc.chi_value(), rc.window)
    raise UsageError(f"unknown suite {name!r}")


def cmd_verify(rc: RunConfig, ns) -> int:
    if ns.list:
        _emit(rc, [{"suite": k, "checks": SUITE_HELP[k]} for k in checks.SUITE_NAMES], "\n".join(f"{k}\t{SUITE_HELP[k]}" for k in checks.SUITE_NAMES))
        return 0
    if ns.suite is None:
        raise UsageError("name a suite or pass --list")
    rep = run_suite(ns.suite, rc)
    payload = rep.as_json()
    payload["seed"] = rc.seed
    table = f"{ns.suite}: {rep.result} ({rep.instances} instances)"
    if rep.counterexample:
        table += "\n" + dumps(rep.counterexample)
    if rep.details:
        table += "\n" + dumps(rep.details)
    _emit(rc, payload, table)
    return 0 if rep.passed else 1


def cmd_list_basis(rc: RunConfig, ns) -> int:
    if rc.order < 1 or rc.order > rc.max_order:
        raise UsageError(f"order must lie in [1, {rc.max_order}]")
    cfg = rc.ell_config()
    mod = VacuumModule(cfg, rc.chi_value())
    rows = []
    for k in range(1, rc.order + 1):
        for g in mod.basis(k):
            rows.append({"degree": k, "id": list(g.gid), "element": glhat_to_json(g.elem)})
    table = "\n".join(f"{r['degree']}\t{tuple(r['id'])}\t{mod.element(tuple(r['id']))!r}" for r in rows)
    _emit(rc, rows, table)
    return 0


COMMANDS = {
    "bracket": cmd_bracket,
    "character": cmd_character,
    "act": cmd_act,
    "verify": cmd_verify,
    "list-basis": cmd_list_basis,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rc = resolve_config(ns)
        return COMMANDS[ns.command](rc, ns)
    except (UsageError, SchemaError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
