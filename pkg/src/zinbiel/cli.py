"""``zinbiel`` command line.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
input errors. ``-`` stands for stdin or stdout wherever a file is expected.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebra import is_zinbiel, loads, to_dict
from .catalog import build, catalog_manifest
from .constraints import refute_case
from .errors import FormatError, NotNilpotent, ParameterDomainError, RangeError, ZinbielError
from .invariants import fingerprint, power_series
from .linalg import format_scalar, scalar
from .suite import DEFAULT_DIMS, run_suite
from .transform import separate_or_search, verify_nullity_invariants, verify_theorem1_formulas

DEFAULT_SEED = 0
DEFAULT_TRIALS = 32
DEFAULT_SAMPLES = 100
DEFAULT_BUDGET = 10000


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    try:
        return loads(_read(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _write(text: str, path: str = "-"):
    if path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _emit(args, report: dict, human):
    if args.json:
        _write(json.dumps(report, indent=2))
    else:
        _write(human(report))


def _dims(text: str) -> tuple:
    """``8..12``, ``8,9,10`` or ``8``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            dims = tuple(range(int(lo), int(hi) + 1))
        else:
            dims = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}; use e.g. 8..12") from None
    if not dims:
        raise argparse.ArgumentTypeError("empty dimension list")
    return dims


def _param(text: str) -> tuple:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k.strip(), scalar(v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rational value {v!r}") from None


# --- subcommands -------------------------------------------------------------


def cmd_check(args) -> int:
    A = _load(args.file)
    z = is_zinbiel(A)
    report = {"op": "check", "label": A.label, "dim": A.dim, "zinbiel": z.ok}
    if not z.ok:
        report["violation"] = {"triple": list(z.triple), "defect": [format_scalar(c) for c in z.defect]}
    try:
        dims = [s.dim for s in power_series(A)]
        report.update(nilpotent=True, power_dims=dims, nilindex=len(dims) - 1)
    except NotNilpotent as exc:
        report.update(nilpotent=False, reason=str(exc))

    def human(r):
        lines = [f"{r['label'] or 'algebra'} (dim {r['dim']})"]
        if r["zinbiel"]:
            lines.append("  Zinbiel identity: holds on all basis triples")
        else:
            t = r["violation"]["triple"]
            lines.append(f"  Zinbiel identity: fails on (e_{t[0]}, e_{t[1]}, e_{t[2]}), defect {r['violation']['defect']}")
        if r["nilpotent"]:
            lines.append(f"  nilpotent: yes, nilindex {r['nilindex']}, power dims {r['power_dims']}")
        else:
            lines.append(f"  nilpotent: no ({r['reason']})")
        return "\n".join(lines)

    _emit(args, report, human)
    return 0 if report["zinbiel"] and report["nilpotent"] else 1


def cmd_invariants(args) -> int:
    A = _load(args.file)
    fp = fingerprint(A, args.trials, args.seed)
    report = {"op": "invariants", "label": A.label, "dim": A.dim, "seed": args.seed, "trials": args.trials, **fp.to_dict()}
    # the fingerprint is data, so it is JSON either way
    _write(json.dumps(report, indent=2))
    return 0


def cmd_catalog(args) -> int:
    if args.list:
        _write(json.dumps(catalog_manifest(), indent=2))
        return 0
    if not args.name or args.dim is None:
        raise UsageError("catalog needs an entry name and --dim (or --list)")
    params = dict(args.param or [])
    A = build(args.name, args.dim, **params)
    _write(json.dumps(to_dict(A), indent=1), args.output)
    return 0


def cmd_verify_theorem1(args) -> int:
    formulas = verify_theorem1_formulas(samples=args.samples, seed=args.seed)
    nullity = verify_nullity_invariants(samples=args.samples, seed=args.seed)
    flips = sum(e["flips"] for e in nullity["expressions"])
    report = {
        "op": "verify-theorem1",
        "seed": args.seed,
        "samples": args.samples,
        "formulas": formulas,
        "nullity": nullity,
        "ok": formulas["failure_count"] == 0 and flips == 0,
    }

    def human(r):
        f = r["formulas"]
        lines = [
            f"seed {r['seed']}, {r['samples']} samples",
            f"parameter formulas: {f['passes']} passed, {f['failure_count']} failed, {f['skipped']} skipped",
            "nullity invariants:",
        ]
        for e in r["nullity"]["expressions"]:
            lines.append(f"  {e['name']:<28} {e['samples']:>5} samples  {e['zero_samples']:>4} on zero locus  {e['flips']} flips")
        lines.append("OK" if r["ok"] else "FAILED")
        return "\n".join(lines)

    _emit(args, report, human)
    return 0 if report["ok"] else 1


def cmd_iso(args) -> int:
    A, B = _load(args.a), _load(args.b)
    res = separate_or_search(A, B, budget=args.budget, seed=args.seed, trials=args.trials)
    report = {"op": "iso", "a": A.label, "b": B.label, "seed": args.seed, "budget": args.budget, "trials": args.trials, **res.to_dict()}

    def human(r):
        head = f"{r['a'] or 'A'} vs {r['b'] or 'B'}: {r['result']}"
        if r["result"] == "SeparatedBy":
            return f"{head} {r['invariant']} {r['values']}"
        if r["result"] == "NoIsoFound":
            return f"{head} (budget {r['budget']}, seed {r['seed']})"
        return head + "\n" + "\n".join("  " + " ".join(row) for row in r["matrix"])

    _emit(args, report, human)
    return 0


def cmd_nonexistence(args) -> int:
    try:
        report = refute_case(args.case, args.dim)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None

    def human(r):
        lines = [f"case {r['case']} at n={r['n']}: {r['verdict']}"]
        for e in r.get("equations", []):
            lines.append(f"  {e['text']}")
        if r.get("contradiction"):
            c = r["contradiction"]
            lines.append(f"  triple {tuple(c['triple'])}, e_{c['component']} coordinate reduces to {c['reduces_to']}")
        for v in r["variants"]:
            if "target" in v:
                verb = "not in" if v["verdict"] == "Unreachable" else "possibly in"
                lines.append(
                    f"  r1={v['r1']} r2={v['r2']}: {v['target']['element']} {verb} l_1 o l_{v['target']['layer'] - 1}"
                    f" (reachable: {', '.join(v['reachable_elements'])})"
                )
        if r.get("witness_triples"):
            lines.append("  witness triples: " + " ".join(str(tuple(t)) for t in r["witness_triples"]))
        if r.get("note"):
            lines.append(f"  note: {r['note']}")
        return "\n".join(lines)

    _emit(args, report, human)
    return 0 if report["verdict"] in ("Inconsistent", "Unreachable") else 1


def cmd_suite(args) -> int:
    only = set(args.only) if args.only else None
    results = run_suite(dims=args.dims, seed=args.seed, only=only)
    report = {
        "op": "suite",
        "dims": list(args.dims),
        "seed": args.seed,
        "criteria": [r.to_dict() for r in sorted(results, key=lambda r: r.number)],
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
    }

    def human(r):
        lines = [f"{'#':>2}  {'result':<6} {'seconds':>8}  criterion"]
        for c in r["criteria"]:
            lines.append(f"{c['criterion']:>2}  {'PASS' if c['passed'] else 'FAIL':<6} {c['seconds']:>8.2f}  {c['name']}")
        lines.append(f"{r['passed']} passed, {r['failed']} failed")
        return "\n".join(lines)

    _emit(args, report, human)
    return 0 if report["failed"] == 0 else 1


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="zinbiel", description="Exact computations with Zinbiel algebras.", parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    s = sub.add_parser("check", parents=[common], help="Zinbiel identity and nilpotency of an algebra file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("invariants", parents=[common], help="fingerprint of an algebra file")
    s.add_argument("file")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("catalog", parents=[common], help="emit a catalog algebra")
    s.add_argument("name", nargs="?")
    s.add_argument("--dim", type=int)
    s.add_argument("--param", type=_param, action="append", metavar="K=V")
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--list", action="store_true", help="print the manifest")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("verify-theorem1", parents=[common], help="parameter formulas and nullity invariants")
    s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_verify_theorem1)

    s = sub.add_parser("iso", parents=[common], help="separate two algebras or search for an isomorphism")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("nonexistence", parents=[common], help="refute a gradation case")
    s.add_argument("case", help="I-II, I-III, I-IV, II (typeII) or III (typeIII)")
    s.add_argument("--dim", type=int, required=True)
    s.set_defaults(func=cmd_nonexistence)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance criteria")
    s.add_argument("--dims", type=_dims, default=DEFAULT_DIMS, metavar="LO..HI")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--only", type=int, action="append", metavar="N", help="run only criterion N (repeatable)")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FormatError, RangeError, ParameterDomainError) as exc:
        print(f"zinbiel: error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"zinbiel: error: {exc.args[0]}", file=sys.stderr)
        return 2
    except ZinbielError as exc:
        print(f"zinbiel: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
