"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .certificate import (
    GLOBAL_HEADER,
    LOCAL_HEADER,
    CertificateError,
    GlobalCertificate,
    check_global,
    parse_global,
    parse_local,
    serialize_global,
    serialize_local,
)
from .exact import as_rat
from .geometry import config_distance
from .local import MAJORIZERS, R0, verify_local
from .report import build_report
from .search import SearchConfig, run_global, witness_configs

SQUARE_FLOAT = ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0))


def rational(text: str) -> Fraction:
    try:
        if any(c in text for c in ".eE"):
            raise ValueError
        return as_rat(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected an exact rational such as 1/7, got {text!r}") from None


def on_off(text: str) -> bool:
    if text.lower() in ("on", "true", "yes", "1"):
        return True
    if text.lower() in ("off", "false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def cmd_verify_local(args) -> int:
    if args.r0 <= 0:
        print("error: r0 must be positive", file=sys.stderr)
        return 2
    if args.r0 > R0:
        print(f"note: r0 = {args.r0} exceeds 1/7; running as a control", file=sys.stderr)
    cert = verify_local(args.r0, args.majorizer, samples=args.samples, seed=args.seed)
    _write(args.output, serialize_local(cert))
    for st in cert.stages:
        print(f"stage {st.name}: {'ok' if st.ok else 'FAIL'}")
    if cert.witness is not None:
        print("witness: J > 0 at (s, t, u, v) = (" + ", ".join(str(x) for x in cert.witness) + ")")
    if cert.valid:
        print(f"local certificate valid (r0 = {cert.r0}, majorizer = {cert.majorizer_used})")
        return 0
    print(f"local certificate INVALID: failing stage {cert.failing_stage}")
    return 1


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise CertificateError(f"cannot read config file: {e}") from None


def cmd_verify_global(args) -> int:
    file_cfg = _load_config_file(args.config)

    def pick(name, default):
        v = getattr(args, name)
        return v if v is not None else file_cfg.get(name, default)

    def flag(name):
        v = pick(name, True)
        return on_off(v) if isinstance(v, str) else bool(v)

    mode = pick("mode", "trustless")
    if mode not in ("paper", "trustless"):
        raise ValueError(f"unknown mode {mode!r}")
    cfg = SearchConfig(
        dfs_max_edge=Fraction(str(pick("max_edge", "1/512"))),
        use_bound_filter=mode == "paper",
        sqrt_precision=int(pick("precision", 30)),
        worker_count=int(pick("workers", 1)),
        exclude_neighborhood=flag("exclude_neighborhood"),
        canonical_labels=flag("canonical_labels"),
    )
    result = run_global(cfg, progress=args.progress)
    cert = GlobalCertificate.from_result(result)
    _write(args.output, serialize_global(cert))
    report = build_report(global_cert=cert)
    _write(args.report, report.render())
    print(report.render(), end="")
    print(f"time: {result.seconds:.1f} s", file=sys.stderr)
    if not cert.valid:
        wits = witness_configs(cert.failures)
        print(f"{len(cert.failures)} failure witnesses; first ones (cube centers B, C, D):")
        for (level, _), w in list(zip(cert.failures, wits))[: args.show]:
            dist = config_distance(w, SQUARE_FLOAT)
            print(f"  level {level}: {w}  max-norm distance to square {dist:.4f}")
        return 1
    return 1 if report.has_failure else 0


def cmd_oracle(args) -> int:
    from .oracle import OPTIMUM_FLOAT, criticality_check, equilateral_pole_value, numeric_max_search

    res = numeric_max_search(args.restarts, args.seed, v_min=args.v_min, v_max=args.v_max)
    print(f"best value: {res.value:.12f} (4+4*sqrt2 = {OPTIMUM_FLOAT:.12f})")
    print("best parameters (s, t, u, v): " + ", ".join(f"{x:.3e}" for x in res.params))
    print(f"gradient check at origin: {criticality_check([0, 0, 0, 0])['max_abs_interior']:.2e}")
    print(f"equilateral + pole: {equilateral_pole_value():.12f}")
    return 0


def cmd_report(args) -> int:
    local = glob = None
    check_ok = True
    for path in args.certificates:
        try:
            text = Path(path).read_text()
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        header = text.split("\n", 1)[0]
        try:
            if header == LOCAL_HEADER:
                local = parse_local(text)
            elif header == GLOBAL_HEADER:
                glob = parse_global(text)
            else:
                raise CertificateError(f"unknown certificate header {header!r}", 1)
        except CertificateError as e:
            print(f"error: {path}: {e}", file=sys.stderr)
            return 2
    if glob is not None and args.check:
        res = check_global(glob)
        check_ok = res.ok
        print(f"replay check: {'ok' if res.ok else 'FAILED'} ({res.nodes_checked} node records)")
        for p in res.problems:
            print(f"  {p}")
    report = build_report(local, glob)
    print(report.render(), end="")
    _write(args.table, report.table())
    return 0 if check_ok and not report.has_failure else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hemisum", description="Certified checks for the hemisphere distance sum.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-local", help="exact local analysis around the square configuration")
    p.add_argument("--r0", type=rational, default=R0)
    p.add_argument("--majorizer", choices=MAJORIZERS, default="rounded")
    p.add_argument("--samples", type=int, default=2000, help="random points searched for J > 0")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify_local)

    p = sub.add_parser("verify-global", help="cube elimination outside the neighborhood of the optimum")
    p.add_argument("--mode", choices=("paper", "trustless"))
    p.add_argument("--precision", type=int, help="square-root precision exponent k (0..30)")
    p.add_argument("--workers", type=int)
    p.add_argument("--max-edge", dest="max_edge", type=rational)
    p.add_argument("--exclude-neighborhood", dest="exclude_neighborhood", type=on_off)
    p.add_argument("--canonical-labels", dest="canonical_labels", type=on_off)
    p.add_argument("--config", help="JSON file with defaults; flags win")
    p.add_argument("--output", "-o")
    p.add_argument("--report")
    p.add_argument("--show", type=int, default=5, help="failure witnesses to print")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_verify_global)

    p = sub.add_parser("oracle", help="floating-point multi-start search")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--v-min", dest="v_min", type=float, default=0.0)
    p.add_argument("--v-max", dest="v_max", type=float, default=1.0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("report", help="compare certificates with the reference values")
    p.add_argument("certificates", nargs="+")
    p.add_argument("--check", action="store_true", help="replay the global certificate")
    p.add_argument("--table", help="write a tab-separated deviation table")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CertificateError, ValueError, argparse.ArgumentTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
