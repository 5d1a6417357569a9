"""Command line front end: strata / construct / verify / link / group / batch.

Each subcommand prints a short summary (or the full JSON document with
``--json``) of the certificate produced by the matching function in
:mod:`zetalink.certificates`.  The exit status is 0 when every embedded
check passed, 1 when some check failed, and 2 for unusable arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .certificates import (
    Certificate,
    cmd_construct,
    cmd_group,
    cmd_link,
    cmd_strata,
    cmd_verify,
    validate_certificate,
)
from .errors import ZetalinkError
from .groups import BUILTIN_NAMES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetalink",
        description="exact invariants of plane curves with a tangent line triangle",
    )
    parser.add_argument(
        "--json", action="store_true", help="print the full certificate document"
    )
    parser.add_argument(
        "--seed", type=int, default=0, help="determinism seed echoed in certificates"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("strata", help="list the degree-d strata and tuple sizes")
    p.add_argument("d", type=int, help="curve degree (>= 2)")

    p = sub.add_parser("construct", help="build a curve and check its label")
    p.add_argument("d", type=int, help="curve degree")
    p.add_argument(
        "--variant",
        default="2",
        choices=["1", "2", "3", "degeneration"],
        help="construction recipe",
    )
    p.add_argument(
        "--tau",
        action="append",
        default=None,
        metavar="K/N",
        help="tangency root exp(2*pi*i*K/N); give exactly three",
    )
    p.add_argument(
        "--t", default=None, help="family parameter (rational) for 'degeneration'"
    )
    p.add_argument("--output", default=None, help="write the curve JSON to this file")

    p = sub.add_parser("verify", help="run the family verifier on a curve file")
    p.add_argument("curve", help="curve JSON file")

    p = sub.add_parser("link", help="exact and numeric linking invariant")
    p.add_argument("curve", help="curve JSON file")
    p.add_argument("--steps", type=int, default=64, help="samples per segment")
    p.add_argument(
        "--clearance", type=float, default=1e-3, help="tangency avoidance margin"
    )
    p.add_argument(
        "--tolerance", type=float, default=1e-8, help="numeric agreement bound"
    )

    p = sub.add_parser("group", help="presentation invariants and finite checks")
    p.add_argument("name", choices=list(BUILTIN_NAMES))
    p.add_argument("--d", type=int, default=None, help="degree parameter")
    p.add_argument("--h", type=int, default=None, help="component index (Kh)")
    p.add_argument("--order", action="store_true", help="enumerate cosets")
    p.add_argument(
        "--derived-series", action="store_true", help="derived series of the finite group"
    )
    p.add_argument(
        "--commutators",
        action="store_true",
        help="search for every pairwise generator commutator among consequences",
    )
    p.add_argument("--coset-cap", type=int, default=10**6)
    p.add_argument("--depth", type=int, default=6, help="consequence search depth")

    p = sub.add_parser("batch", help="run many jobs in parallel")
    p.add_argument("jobs", help="JSON file: a list of argument vectors")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--workers", type=int, default=None)

    return parser


def dispatch(args: argparse.Namespace) -> Certificate:
    if args.subcommand == "strata":
        return cmd_strata(args.d, seed=args.seed)
    if args.subcommand == "construct":
        certificate = cmd_construct(
            args.d, args.variant, args.tau or (), t=args.t, seed=args.seed
        )
        if args.output:
            _atomic_write(
                Path(args.output),
                json.dumps(certificate.results["curve"], indent=2, sort_keys=True),
            )
        return certificate
    if args.subcommand == "verify":
        return cmd_verify(args.curve, seed=args.seed)
    if args.subcommand == "link":
        return cmd_link(
            args.curve,
            steps=args.steps,
            clearance=args.clearance,
            tolerance=args.tolerance,
            seed=args.seed,
        )
    if args.subcommand == "group":
        return cmd_group(
            args.name,
            d=args.d,
            h=args.h,
            order=args.order,
            derived_series=args.derived_series,
            commutators=args.commutators,
            coset_cap=args.coset_cap,
            depth=args.depth,
            seed=args.seed,
        )
    raise ZetalinkError(f"no handler for subcommand {args.subcommand!r}")


def render_summary(certificate: Certificate) -> str:
    lines = ["zetalink " + " ".join(certificate.command)]
    for key in sorted(certificate.results):
        value = certificate.results[key]
        if value is None or isinstance(value, (str, int, float)):
            lines.append(f"  {key}: {value}")
    for check in certificate.checks:
        mark = "pass" if check["passed"] else "FAIL"
        detail = check.get("detail", "")
        suffix = f" ({detail})" if detail else ""
        lines.append(f"  [{mark}] {check['name']}{suffix}")
    return "\n".join(lines)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text + "\n")
    os.replace(tmp, path)


def run_job(argv: Sequence[str]) -> dict:
    """One batch job: parse and run a subcommand, return the certificate doc.

    Errors become a synthetic failed certificate so a bad job cannot take
    down the whole batch.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.subcommand == "batch":
            raise ZetalinkError("batch jobs cannot nest another batch")
        certificate = dispatch(args)
        return certificate.to_json()
    except SystemExit:
        failure = Certificate(
            tuple(argv),
            {},
            {"error": {"type": "ArgumentError", "message": "unparsable job"}},
            ({"name": "job arguments parse", "passed": False},),
        )
        return failure.to_json()
    except (ZetalinkError, OSError, ValueError) as exc:
        failure = Certificate(
            tuple(argv),
            {},
            {"error": {"type": type(exc).__name__, "message": str(exc)}},
            ({"name": "job completed", "passed": False, "detail": str(exc)},),
        )
        return failure.to_json()


def cmd_batch(
    jobs_path: str,
    output_dir: str,
    workers: Optional[int] = None,
    seed: int = 0,
) -> Certificate:
    """Run independent jobs in parallel; write one certificate file each."""
    raw = Path(jobs_path).read_text()
    spec = json.loads(raw)
    jobs = spec["jobs"] if isinstance(spec, dict) else spec
    if not isinstance(jobs, list) or not all(
        isinstance(j, list) and all(isinstance(a, str) for a in j) for j in jobs
    ):
        raise ZetalinkError(f"{jobs_path}: expected a JSON list of argument vectors")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if len(jobs) <= 1 or workers == 1:
        documents = [run_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            documents = list(pool.map(run_job, jobs))
    entries = []
    checks = []
    for index, (job, document) in enumerate(zip(jobs, documents)):
        name = f"job-{index:03d}.json"
        _atomic_write(out / name, json.dumps(document, indent=2, sort_keys=True))
        passed = all(c["passed"] for c in document["body"]["checks"])
        entries.append(
            {
                "index": index,
                "command": job,
                "file": name,
                "sha256": document["sha256"],
                "passed": passed,
            }
        )
        checks.append(
            {
                "name": f"job {index} ({' '.join(job) or 'empty'})",
                "passed": passed,
            }
        )
    return Certificate(
        ("batch", str(jobs_path), "--output-dir", str(output_dir)),
        {"jobs_file": str(jobs_path), "count": len(jobs)},
        {"jobs": entries},
        tuple(checks),
        seed=seed,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "batch":
            certificate = cmd_batch(
                args.jobs, args.output_dir, args.workers, seed=args.seed
            )
        else:
            certificate = dispatch(args)
    except ZetalinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    document = certificate.to_json()
    validate_certificate(document)
    if args.json:
        print(json.dumps(document, indent=2, sort_keys=True))
    else:
        print(render_summary(certificate))
    return 0 if certificate.passed else 1


if __name__ == "__main__":
    sys.exit(main())
