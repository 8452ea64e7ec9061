"""Command-line interface: deterministic JSON/CSV/DOT emission and a
content-addressed on-disk result cache.

Exit codes: 0 success, 1 domain validation failure, 2 input/usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import codes, fusion, netchar, orbifold
from .codes import CodeError
from .fusion import FusionError
from .qseries import DEN, GridError, QSeries

CACHE_ENV = "FRAMEDNET_CACHE"


class InputError(Exception):
    """Bad user input: missing files, unparseable values (exit 2)."""


# ---------------------------------------------------------------------------
# helpers


def _load_code(spec: str) -> codes.BinaryCode:
    if not spec.startswith("builtin:") and not os.path.exists(spec):
        raise InputError(f"code file not found: {spec}")
    try:
        return codes.load_code(spec)
    except OSError as e:
        raise InputError(str(e))


def _code_identity(spec: str) -> str:
    """Stable content hash of the code input for cache keys."""
    if spec.startswith("builtin:"):
        payload = spec.encode()
    else:
        try:
            with open(spec, "rb") as fh:
                payload = fh.read()
        except OSError as e:
            raise InputError(str(e))
    return hashlib.sha256(payload).hexdigest()


def _emit(doc: dict, json_path: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if json_path:
        with open(json_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(series_doc: dict, csv_path: str) -> None:
    lines = ["exponent_num,coefficient"]
    for num, coeff in series_doc["terms"]:
        lines.append(f"{num},{coeff}")
    with open(csv_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _cache_dir(args) -> Optional[str]:
    return getattr(args, "cache", None) or os.environ.get(CACHE_ENV)


def _cached(args, key_doc: dict, compute) -> dict:
    """Content-addressed cache: key is the hash of the request manifest."""
    cache = _cache_dir(args)
    if not cache:
        return compute()
    key = hashlib.sha256(
        json.dumps(key_doc, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    path = os.path.join(cache, key + ".json")
    if os.path.exists(path):
        try:
            with open(path) as fh:
                doc = json.load(fh)
            if doc.get("_manifest") == key_doc:
                return doc["result"]
            raise ValueError("manifest mismatch")
        except (ValueError, OSError) as e:
            print(f"warning: ignoring unreadable cache entry {path}: {e}", file=sys.stderr)
    result = compute()
    os.makedirs(cache, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"_manifest": key_doc, "result": result}, fh, sort_keys=True)
    os.replace(tmp, path)
    return result


def _parse_fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational {s!r}: {e}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate_code(args) -> int:
    code = _load_code(args.code)
    report = codes.validate_binary_code(code)
    doc = {
        "length": code.length,
        "dimension": code.dimension,
        "doubly_even": report.doubly_even,
        "self_dual": report.self_dual,
        "contains_all_ones": report.contains_all_ones,
        "weight_enumerator": {str(w): c for w, c in sorted(report.weight_enumerator.items())},
    }
    _emit(doc, args.json)
    return 0


def _char_series(spec: str, variant: str, order: int, route: str, args) -> dict:
    key = {
        "command": "char",
        "code": _code_identity(spec),
        "variant": variant,
        "order": order,
        "route": route,
    }

    def compute() -> dict:
        code = _load_code(spec)
        out: Dict[str, dict] = {}
        if route in ("code", "both"):
            group = codes.delta_code(code, variant)
            out["code"] = netchar.lattice_net_char(group, order).series.to_json_dict()
        if route in ("theta", "both"):
            out["theta"] = netchar.theta_over_eta(code, variant, order).series.to_json_dict()
        if route == "both":
            a = QSeries.from_json_dict(out["code"])
            b = QSeries.from_json_dict(out["theta"])
            return {"routes": out, "agree": a.agrees_with(b)}
        return next(iter(out.values()))

    return _cached(args, key, compute)


def _cmd_char(args) -> int:
    doc = _char_series(args.code, args.variant, args.order, args.route, args)
    _emit(doc, args.json)
    if args.csv:
        if args.route == "both":
            raise InputError("--csv needs a single route")
        _emit_csv(doc, args.csv)
    return 0


def _cmd_orbifold_char(args) -> int:
    key = {
        "command": "orbifold-char",
        "code": _code_identity(args.code),
        "variant": args.variant,
        "order": args.order,
        "pieces": bool(args.pieces),
    }

    def compute() -> dict:
        code = _load_code(args.code)
        p = orbifold.orbifold_pieces(code, args.variant, args.order)
        ch = orbifold.orbifold_vacuum_char(code, args.variant, args.order)
        doc = ch.series.to_json_dict()
        if not p.sign_validated:
            doc["warning"] = "unvalidated sign convention at this rank"
        if args.pieces:
            sectors = orbifold.fixed_point_sector_chars(p)
            doc["pieces"] = {
                "Z1": p.z1.series.to_json_dict(),
                "Z2": p.z2.series.to_json_dict(),
                "Z3": p.z3.series.to_json_dict(),
                "Z4": p.z4.series.to_json_dict(),
            }
            doc["sectors"] = {
                name: s.series.to_json_dict()
                for name, s in zip(("untwisted+", "untwisted-", "beta1", "beta2"), sectors)
            }
        return doc

    doc = _cached(args, key, compute)
    _emit(doc, args.json)
    if args.csv:
        _emit_csv(doc, args.csv)
    return 0


def _cmd_extend(args) -> int:
    if not args.system.startswith("z4pow:"):
        raise InputError(f"unknown system {args.system!r} (expected z4pow:<d>)")
    try:
        d = int(args.system.split(":", 1)[1])
    except ValueError:
        raise InputError(f"bad system dimension in {args.system!r}")
    sys_ = fusion.z4_power_system(d)
    sub = args.subgroup
    if sub.startswith("builtin:"):
        name = sub.split(":", 1)[1]
        H = codes.builtin_delta(name, args.variant)
    else:
        if not os.path.exists(sub):
            raise InputError(f"subgroup file not found: {sub}")
        with open(sub) as fh:
            H = codes.z4_code_from_text(fh.read())
    if H.length != d:
        raise InputError(f"subgroup length {H.length} != system dimension {d}")
    result = fusion.simple_current_extension(sys_, H)
    doc = {
        "allowed": result.allowed,
        "mu_before": str(result.mu_before),
        "mu_after": str(result.mu_after),
        "subgroup_size": len(H),
        "quotient_orders": list(result.quotient_system.orders)
        if result.quotient_system is not None
        else None,
        "offending": list(result.offending) if result.offending else None,
    }
    _emit(doc, args.json)
    return 0 if result.allowed else 1


def _cmd_census(args) -> int:
    c = fusion.orbifold_census(args.d)
    doc = {
        "d": c.d,
        "dim2": c.dim2_count,
        "dim1": c.dim1_count,
        "dimRoot2Pow": c.twisted_count,
        "twisted_dim": {"a": c.twisted_dim.a, "b": c.twisted_dim.b},
        "mu_balance": {"a": c.mu_balance.a, "b": c.mu_balance.b},
        "balanced": c.balanced,
        "total_sectors": c.total_sectors(),
    }
    _emit(doc, args.json)
    return 0


def _parse_decomp_file(path: str) -> List[Tuple[Tuple[Fraction, ...], int]]:
    """One label per line: comma-separated weights from {0,1/2,1/16},
    optionally followed by whitespace and a multiplicity (default 1)."""
    if not os.path.exists(path):
        raise InputError(f"decomposition file not found: {path}")
    decomp = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            label = tuple(_parse_fraction(t) for t in parts[0].split(","))
            if any(e not in fusion.ISING_LABELS for e in label):
                raise InputError(f"bad label entry in {line!r}")
            try:
                mult = int(parts[1]) if len(parts) > 1 else 1
            except ValueError:
                raise InputError(f"bad multiplicity in {line!r}")
            decomp.append((label, mult))
    if not decomp:
        raise InputError("empty decomposition file")
    return decomp


def _cmd_framed(args) -> int:
    if bool(args.decomp) == bool(args.code):
        raise InputError("framed needs exactly one of --decomp or --code")
    if args.decomp:
        decomp = _parse_decomp_file(args.decomp)
    else:
        code = _load_code(args.code)
        group = codes.delta_code(code, args.variant)
        decomp = fusion.ising_decomposition(group)
    fs = fusion.framed_structure(decomp)
    doc = {
        "num_ising_factors": fs.num_factors,
        "k": fs.k,
        "l": fs.l,
        "sign_matrix": ["".join(map(str, row)) for row in fs.sign_matrix],
        "index_check": str(
            Fraction(4 ** fs.num_factors, (2 ** fs.k) ** 2 * (2 ** fs.l) ** 2)
        ),
    }
    _emit(doc, args.json)
    return 0


def _cmd_emit_graph(args) -> int:
    text = netchar.emit_branching_graph(args.d)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


def _cmd_selftest(args) -> int:
    from . import selftest

    failures = selftest.run(sys.stdout)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="framednet",
        description="Exact characters of code lattices and their order-2 orbifolds.",
    )
    p.add_argument("--cache", help=f"result cache directory (or ${CACHE_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    def add_code_flags(sp, variant=True):
        sp.add_argument("--code", required=True, help="path or builtin:h8|golay24")
        if variant:
            sp.add_argument("--variant", choices=("L", "Ltilde"), default="L")

    sp = sub.add_parser("validate-code", help="certify a binary code")
    sp.add_argument("--code", required=True)
    sp.add_argument("--json", help="write JSON here instead of stdout")

    sp = sub.add_parser("char", help="lattice net vacuum character")
    add_code_flags(sp)
    sp.add_argument("--order", type=int, default=5, help="q-steps above the leading term")
    sp.add_argument("--route", choices=("code", "theta", "both"), default="code")
    sp.add_argument("--json")
    sp.add_argument("--csv")

    sp = sub.add_parser("orbifold-char", help="twisted orbifold vacuum character")
    add_code_flags(sp)
    sp.add_argument("--order", type=int, default=5)
    sp.add_argument("--pieces", action="store_true", help="emit Z1-Z4 and sector characters")
    sp.add_argument("--json")
    sp.add_argument("--csv")

    sp = sub.add_parser("extend", help="simple current extension bookkeeping")
    sp.add_argument("--system", required=True, help="z4pow:<d>")
    sp.add_argument("--subgroup", required=True, help="Z4 code file or builtin:<name>")
    sp.add_argument("--variant", choices=("L", "Ltilde"), default="L")
    sp.add_argument("--json")

    sp = sub.add_parser("census", help="orbifold sector census")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--json")

    sp = sub.add_parser("framed", help="framed structure (k, l) of a decomposition")
    sp.add_argument("--decomp", help="decomposition file")
    sp.add_argument("--code", help="derive the decomposition from a binary code")
    sp.add_argument("--variant", choices=("L", "Ltilde"), default="L")
    sp.add_argument("--json")

    sp = sub.add_parser("emit-graph", help="induction-restriction graph (DOT)")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--out")

    sub.add_parser("selftest", help="run the acceptance checks")
    return p


_COMMANDS = {
    "validate-code": _cmd_validate_code,
    "char": _cmd_char,
    "orbifold-char": _cmd_orbifold_char,
    "extend": _cmd_extend,
    "census": _cmd_census,
    "framed": _cmd_framed,
    "emit-graph": _cmd_emit_graph,
    "selftest": _cmd_selftest,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CodeError, FusionError, GridError, ValueError, AssertionError) as e:
        print(f"validation failure: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
