"""Produce local and global certificates and the comparison report against the reference values."""
import argparse
from pathlib import Path

from hemisum.certificate import GlobalCertificate, serialize_global, serialize_local
from hemisum.local import verify_local
from hemisum.report import build_report
from hemisum.search import SearchConfig, run_global


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--paper-mode", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    local = verify_local()
    glob = GlobalCertificate.from_result(run_global(SearchConfig(use_bound_filter=args.paper_mode)))
    (out / "local.cert").write_text(serialize_local(local))
    (out / "global.cert").write_text(serialize_global(glob, include_timing=True))
    rep = build_report(local, glob)
    (out / "report.txt").write_text(rep.render())
    (out / "deviations.tsv").write_text(rep.table())
    print(rep.render(), end="")


if __name__ == "__main__":
    main()
