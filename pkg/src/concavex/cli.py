"""Command-line front end.

Three subcommands:

  compute  solve the change of variables and print the invariant table
  oracle   fixed-point graph sum at degree 1 or 2, several weight samples
  verify   engine + oracle + every consistency gate, pass/fail per check

All rationals are printed as "numerator/denominator" strings, never
floats, in every output format.  Reports are byte-identical across runs
with the same flags; timing goes to stderr only.

Exit codes: 0 success; 1 failed verification; 2 unreadable or invalid
input (including unsupported oracle degrees and the Euler-class flag on
a spec with positive splitting excess); 3 an internal inconsistency
surfaced by the solver or the extraction.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction as Rat

from .geometry import GeometrySpec, SpecError, parse_spec, validate
from .localization import (
    OracleInconsistencyError,
    SamplingError,
    oracle_invariant,
    oracle_invariant_checked,
    sample_weights,
)
from .mirror import (
    InvariantTable,
    MirrorError,
    MirrorMap,
    extract_invariants,
    solve_mirror_map,
    verify_all,
)
from .qseries import Degree, degrees_upto


def _rat(v: Rat) -> str:
    return f"{v.numerator}/{v.denominator}"


def _load_spec(path: str) -> tuple[GeometrySpec, int]:
    with open(path, encoding="utf-8") as fh:
        spec = parse_spec(fh.read())
    return spec, validate(spec)


def _spec_echo(spec: GeometrySpec) -> dict:
    return {
        "name": spec.name,
        "spaces": list(spec.factors),
        "bundles": [
            {"kind": b.kind, "degrees": list(b.magnitudes())}
            for b in spec.bundles
        ],
    }


def _oracle_checks(
    spec: GeometrySpec, table: InvariantTable, bound: int
) -> list[tuple[Degree, Rat | None, bool | None]]:
    """Per-degree oracle comparison where the graph sum is available."""
    rows: list[tuple[Degree, Rat | None, bool | None]] = []
    for d in degrees_upto(len(spec.factors), bound):
        if not any(d):
            continue
        if len(spec.factors) == 1 and sum(d) <= 2:
            val, _ = oracle_invariant_checked(spec, sum(d), samples=2, seed=0)
            rows.append((d, val, val == table.value(d)))
        else:
            rows.append((d, None, None))
    return rows


def _json_report(
    spec: GeometrySpec,
    s: int,
    mm: MirrorMap,
    table: InvariantTable,
    oracle_rows: list[tuple[Degree, Rat | None, bool | None]],
) -> str:
    m = len(spec.factors)
    degrees = [d for d in degrees_upto(m, mm.bound) if any(d)]
    report = {
        "spec": _spec_echo(spec),
        "s": s,
        "mirror_map": {
            "f": [[list(d), _rat(mm.prefactor.get(d, Rat(0)))] for d in degrees],
            "g": [
                [i, list(d), _rat(mm.shifts[i].get(d, Rat(0)))]
                for i in range(m)
                for d in degrees
            ],
            "normalization": [
                [list(d), _rat(mm.normalization.get(d, Rat(0)))] for d in degrees
            ],
        },
        "invariants": [
            {
                "degree": list(e.degree),
                "K": _rat(e.value),
                "K_raw": [[str(j), _rat(v)] for j, v in e.raw],
            }
            for e in table.entries
        ],
        "checks": [
            {"name": f"oracle_degree_{'_'.join(map(str, d))}", "pass": bool(ok)}
            for d, val, ok in oracle_rows
            if val is not None
        ],
    }
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _csv_report(
    spec: GeometrySpec,
    table: InvariantTable,
    oracle_rows: list[tuple[Degree, Rat | None, bool | None]],
) -> str:
    m = len(spec.factors)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"d{i + 1}" for i in range(m)] + ["K", "oracle", "match"])
    byd = {d: (val, ok) for d, val, ok in oracle_rows}
    for e in table.entries:
        val, ok = byd.get(e.degree, (None, None))
        writer.writerow(
            list(e.degree)
            + [
                _rat(e.value),
                "" if val is None else _rat(val),
                "" if ok is None else ("yes" if ok else "no"),
            ]
        )
    return buf.getvalue()


def cmd_compute(args: argparse.Namespace) -> int:
    t0 = time.monotonic()
    spec, s = _load_spec(args.spec)
    if args.euler and s != 0:
        raise SpecError(
            f"--euler needs splitting excess 0; this spec has excess {s}"
        )
    mm = solve_mirror_map(spec, args.max_degree)
    table = extract_invariants(spec, mm, args.max_degree, euler=args.euler)
    oracle_rows = _oracle_checks(spec, table, args.max_degree)
    if args.format == "json":
        out = _json_report(spec, s, mm, table, oracle_rows)
    else:
        out = _csv_report(spec, table, oracle_rows)
    sys.stdout.write(out)
    print(f"compute: {time.monotonic() - t0:.3f}s", file=sys.stderr)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    t0 = time.monotonic()
    spec, _ = _load_spec(args.spec)
    if len(spec.factors) != 1:
        raise SpecError("the graph sum covers single-factor specs only")
    if args.degree not in (1, 2):
        raise SpecError("the graph sum covers degrees 1 and 2 only")
    n = spec.factors[0]
    values = []
    attempt = 0
    while len(values) < args.samples:
        if attempt >= args.samples + 20:
            raise SamplingError("too many degenerate weight samples")
        try:
            sample = sample_weights(n, args.seed * 1000 + attempt)
            values.append((sample.seed, oracle_invariant(spec, args.degree, sample)))
        except SamplingError:
            pass
        attempt += 1
    lines = [f"sample seed={seed}: {_rat(v)}" for seed, v in values]
    agree = len({v for _, v in values}) == 1
    lines.append(f"agreement: {'yes' if agree else 'NO'}")
    lines.append(f"value: {_rat(values[0][1])}")
    sys.stdout.write("\n".join(lines) + "\n")
    print(f"oracle: {time.monotonic() - t0:.3f}s", file=sys.stderr)
    if not agree:
        raise OracleInconsistencyError("weight samples disagree")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    t0 = time.monotonic()
    spec, _ = _load_spec(args.spec)
    checks = verify_all(spec, args.max_degree)
    lines = [f"{c.name}: {'pass' if c.passed else 'FAIL ' + c.detail}" for c in checks]
    failed = [c for c in checks if not c.passed]
    if failed:
        lines.append(f"verification failed: {failed[0].name}")
    else:
        lines.append("all checks passed")
    sys.stdout.write("\n".join(lines) + "\n")
    print(f"verify: {time.monotonic() - t0:.3f}s", file=sys.stderr)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="concavex",
        description="Genus-zero characteristic numbers of split bundles "
        "over products of projective spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="solve and print the invariant table")
    p.add_argument("--spec", required=True, help="path to a spec file")
    p.add_argument("--max-degree", type=int, required=True, metavar="D")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--euler", action="store_true",
                      help="specialize the Chern variable to 0 from the start")
    mode.add_argument("--chern", action="store_true",
                      help="keep the Chern variable symbolic (default)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("oracle", help="fixed-point graph sum cross-check")
    p.add_argument("--spec", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="run every consistency gate")
    p.add_argument("--spec", required=True)
    p.add_argument("--max-degree", type=int, required=True, metavar="D")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, SpecError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except MirrorError as err:
        print(f"inconsistency: {err}", file=sys.stderr)
        return 3
    except (SamplingError, OracleInconsistencyError) as err:
        print(f"oracle failure: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
