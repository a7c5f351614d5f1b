"""Run the local analysis for several box half-widths and majorizers and print the stage table."""
import argparse
from fractions import Fraction

from hemisum.local import verify_local


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r0", nargs="+", default=["1/8", "1/7", "1/6", "1"])
    ap.add_argument("--majorizers", nargs="+", default=["rounded", "lemma3", "sd-literal"])
    ap.add_argument("--samples", type=int, default=2000)
    args = ap.parse_args()
    print("r0\tmajorizer\tvalid\tfailing_stage\tK2_max\twitness")
    for r0 in map(Fraction, args.r0):
        for m in args.majorizers:
            c = verify_local(r0, m, samples=args.samples)
            print(f"{r0}\t{m}\t{c.valid}\t{c.failing_stage}\t{float(c.K2_report.max_value):.6f}\t{c.witness}")


if __name__ == "__main__":
    main()
