"""Command-line front end.

Every command prints one JSON report with sorted keys. Exit codes: 0 on
success, 1 on a domain failure (invalid algebra, no limit, Saletan condition
violated), 2 on input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import atlas
from .canonical import (
    NotAContractionMatrix,
    Signature,
    SubalgebraViolation,
    canonical_matrix,
    canonical_u0,
    canonicalize,
    signature_of_u0,
    subalgebra_chain,
)
from .contraction import (
    ConditionViolated,
    ContractionSpec,
    audit,
    iterate,
    limit_oracle,
    nonsingular_on_unit_interval,
    residuals_to_json,
    saletan_condition,
)
from .exactcore import Q, EpsMatrix, IdenticallySingular, Mat, fmt
from .liealg import StructureTensor, identify3, invariants, transform, validate
from .sig0n import DEFAULT_GRID, enumerate_0_3

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_algebra(ref, base_dir: str = ".") -> StructureTensor:
    """An algebra from ``atlas:NAME``, a JSON file path, a bare atlas name or an inline object."""
    try:
        if isinstance(ref, dict):
            return StructureTensor.from_json(ref)
        if ref.startswith("atlas:"):
            return atlas.load(ref)
        path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
        if os.path.exists(path):
            return StructureTensor.from_json(_read_json(path))
        return atlas.load(ref)
    except InputError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad algebra {ref!r}: {exc}") from None


def parse_matrix(spec, n=None):
    """Return (EpsMatrix, description) from the "matrix" object of a contraction spec.

    ``n`` is the algebra dimension when known; without it the size comes from
    the matrix itself.
    """
    if not isinstance(spec, dict):
        raise InputError("'matrix' must be an object")
    kind = spec.get("kind")
    try:
        if kind == "explicit":
            b = Mat(spec["B"])
            a = Mat(spec["A"]) if "A" in spec else Mat.identity(b.shape[0])
            size = b.shape[0] if n is None else n
            if b.shape != (size, size) or a.shape != (size, size):
                raise InputError(f"B and A must be {size}x{size}")
            return EpsMatrix.linear(b, a), {"kind": "explicit", "B": b.to_json(), "A": a.to_json()}
        if kind == "signature":
            n0, parts = spec["sig"]
            sig = Signature.of(int(n0), [int(p) for p in parts])
            if n is not None and sig.n != n:
                raise InputError(f"signature {sig} does not match dimension {n}")
            form = spec.get("form", "first")
            return canonical_matrix(sig, form), {"kind": "signature", "sig": sig.to_json(), "form": form}
    except InputError:
        raise
    except (KeyError, IndexError, ValueError, TypeError) as exc:
        raise InputError(f"bad matrix specification: {exc}") from None
    raise InputError(f"unknown matrix kind {kind!r}")


def load_spec(paths, need_algebra: bool = True):
    """(algebra or None, EpsMatrix, description) from ``[SPEC]`` or ``[ALGEBRA, SPEC]``."""
    if len(paths) not in (1, 2):
        raise InputError("expected [ALGEBRA] SPEC")
    spec_path = paths[-1]
    spec = _read_json(spec_path)
    if not isinstance(spec, dict) or "matrix" not in spec:
        raise InputError(f"{spec_path}: contraction spec needs a 'matrix' object")
    base = os.path.dirname(os.path.abspath(spec_path))
    if len(paths) == 2:
        alg = load_algebra(paths[0])
    elif "algebra" in spec:
        alg = load_algebra(spec["algebra"], base)
    elif need_algebra:
        raise InputError("no algebra given on the command line or in the contraction file")
    else:
        alg = None
    u, desc = parse_matrix(spec["matrix"], alg.n if alg else None)
    return alg, u, desc


def _digest(*parts) -> str:
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _label(c: StructureTensor):
    if c.n != 3 or validate(c):
        return None
    return identify3(c).to_json()


def _normalized_u0(c: StructureTensor, u: EpsMatrix):
    """Algebra c' and u0 with the contraction of c by u equal to that of c' by u0 + eps E.

    A singular eps-coefficient is handled by the same reparametrization that
    canonicalize applies.
    """
    try:
        fact, _ = canonicalize(u)
    except NotAContractionMatrix as exc:
        raise InputError(str(exc)) from None
    b, a = u.linear_parts()
    return transform(c, a + fact.lam * b), fact.u0


def cmd_validate(args):
    c = load_algebra(args.algebra)
    viol = validate(c)
    results = {"algebra": c.to_json(), "valid": not viol, "violations": [v.to_json() for v in viol]}
    if not viol:
        inv = invariants(c)
        results["invariants"] = inv.to_json()
        results["abelian"] = c.is_abelian()
        results["label"] = _label(c)
    return results, (EXIT_OK if not viol else EXIT_DOMAIN), [args.algebra]


def cmd_identify(args):
    c = load_algebra(args.algebra)
    viol = validate(c)
    if viol:
        return {"valid": False, "violations": [v.to_json() for v in viol]}, EXIT_DOMAIN, [args.algebra]
    if c.n != 3:
        raise InputError("identify supports three-dimensional algebras only")
    lab = identify3(c)
    return {"label": lab.to_json(), "label_str": str(lab), "invariants": invariants(c).to_json()}, EXIT_OK, [args.algebra]


def cmd_contract(args):
    c, u, desc = load_spec(args.paths)
    try:
        spec = ContractionSpec(c, u)
    except IdenticallySingular as exc:
        raise InputError(str(exc)) from None
    res = limit_oracle(spec)
    results = {"matrix": desc, "u": u.to_json(), "exists": res.exists, "initial_label": _label(c)}
    if u.is_linear():
        try:
            _, sig = canonicalize(u)
            results["signature"] = sig.to_json()
            results["signature_str"] = str(sig)
        except NotAContractionMatrix:
            results["signature"] = None
    if args.sturm_check:
        results["nonsingular_on_unit_interval"] = nonsingular_on_unit_interval(u)
    if res.exists:
        lim = res.limit
        rep = audit(c, lim)
        results.update(
            limit=lim.to_json(),
            label=_label(lim),
            improper=(_label(lim) == _label(c)) if c.n == 3 else None,
            audits=rep.to_json(),
        )
        code = EXIT_OK
    else:
        results["poles"] = [list(p) for p in res.poles]
        results["valuations"] = res.to_json()["valuations"]
        code = EXIT_DOMAIN
    return results, code, list(args.paths)


def cmd_canonicalize(args):
    c, u, desc = load_spec(args.paths, need_algebra=False)
    try:
        fact, sig = canonicalize(u)
    except NotAContractionMatrix as exc:
        raise InputError(str(exc)) from None
    results = {"matrix": desc, "factorization": fact.to_json(), "signature": sig.to_json(), "signature_str": str(sig)}
    if c is not None:
        direct = limit_oracle(ContractionSpec(c, u))
        via = fact.limit_via_canonical(c)
        results["round_trip_agrees"] = (direct.limit == via) if direct.exists else via is None
    return results, EXIT_OK, list(args.paths)


def _u0_from(args):
    c, u, desc = load_spec(args.paths)
    if desc["kind"] == "signature":
        return c, canonical_u0(Signature.of(*desc["sig"])), desc
    c, u0 = _normalized_u0(c, u)
    return c, u0, desc


def cmd_chain(args):
    c, u0, desc = _u0_from(args)
    sig = signature_of_u0(u0)
    results = {"matrix": desc, "u0": u0.to_json(), "signature": sig.to_json(), "expected_dims": sig.chain_dims()}
    results["saletan_condition"] = residuals_to_json(saletan_condition(c, u0))
    try:
        chain = subalgebra_chain(c, u0)
    except SubalgebraViolation as exc:
        results["error"] = {"type": "SubalgebraViolation", "m": exc.m, "message": str(exc)}
        return results, EXIT_DOMAIN, list(args.paths)
    results["chain"] = [{"dim": d, "basis": [[fmt(x) for x in v] for v in b]} for d, b in chain]
    return results, EXIT_OK, list(args.paths)


def cmd_iterate(args):
    c, u0, desc = _u0_from(args)
    results = {"matrix": desc, "u0": u0.to_json(), "initial": c.to_json(), "initial_label": _label(c)}
    try:
        chain = iterate(c, u0, args.steps)
    except ConditionViolated as exc:
        results["error"] = {"type": "ConditionViolated", "step": exc.step, "residuals": residuals_to_json(exc.residuals)}
        return results, EXIT_DOMAIN, list(args.paths) + [args.steps]
    results["steps"] = [{"step": t + 1, "tensor": s.to_json(), "label": _label(s)} for t, s in enumerate(chain)]
    return results, EXIT_OK, list(args.paths) + [args.steps]


def cmd_enumerate(args):
    if args.dim != 3:
        raise InputError("the census is implemented for --dim 3 only")
    grid = DEFAULT_GRID
    if args.grid:
        raw = _read_json(args.grid)
        if not isinstance(raw, list) or not raw:
            raise InputError("grid file must hold a non-empty JSON list of scalars")
        try:
            grid = tuple(Q(str(x)) for x in raw)
        except (ValueError, TypeError) as exc:
            raise InputError(f"bad grid value: {exc}") from None
    report = enumerate_0_3(grid, workers=args.workers)
    return report.to_json(), EXIT_OK, [args.dim, [fmt(x) for x in grid]]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="saletan", description=__doc__.splitlines()[0])
    fmt_group = p.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", dest="pretty", action="store_false", help="compact JSON output (default)")
    fmt_group.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON output")
    p.set_defaults(pretty=False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check antisymmetry and Jacobi, report invariants")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("identify", help="Mubarakzyanov label of a 3D algebra")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_identify)

    s = sub.add_parser("contract", help="limit of an algebra under a contraction matrix")
    s.add_argument("paths", nargs="+", metavar="[ALGEBRA] SPEC")
    s.add_argument("--sturm-check", action="store_true", help="certify det u != 0 on (0, 1]")
    s.set_defaults(func=cmd_contract)

    s = sub.add_parser("canonicalize", help="canonical factorization and signature")
    s.add_argument("paths", nargs="+", metavar="[ALGEBRA] SPEC")
    s.set_defaults(func=cmd_canonicalize)

    s = sub.add_parser("chain", help="nested subalgebra chain im(u0^m)")
    s.add_argument("paths", nargs="+", metavar="[ALGEBRA] SPEC")
    s.set_defaults(func=cmd_chain)

    s = sub.add_parser("iterate", help="repeat the contraction with the same u0")
    s.add_argument("paths", nargs="+", metavar="[ALGEBRA] SPEC")
    s.add_argument("--steps", type=int, default=1)
    s.set_defaults(func=cmd_iterate)

    s = sub.add_parser("enumerate-sig0n", help="census of signature (0;3) contractions")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--grid", help="JSON list of rational grid values")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_enumerate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    diagnostics = []
    try:
        results, code, inputs = args.func(args)
    except InputError as exc:
        results, code, inputs = None, EXIT_INPUT, []
        diagnostics.append(str(exc))
    report = {
        "command": args.command,
        "inputs_digest": _digest(args.command, inputs),
        "results": results,
        "diagnostics": diagnostics,
    }
    indent = 2 if args.pretty else None
    sep = None if args.pretty else (",", ":")
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=indent, separators=sep) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
