"""Run the global search under a few configurations and print the count table."""
import argparse
import json

from hemisum.search import SearchConfig, run_global

CONFIGS = {
    "trustless": SearchConfig(),
    "paper": SearchConfig(use_bound_filter=True),
    "k20": SearchConfig(sqrt_precision=20),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=list(CONFIGS), choices=list(CONFIGS))
    ap.add_argument("--progress", action="store_true")
    args = ap.parse_args()
    for name in args.names:
        r = run_global(CONFIGS[name], progress=args.progress)
        print(json.dumps({"config": name, "valid": r.valid, "seconds": round(r.seconds, 1), **r.counts()}))


if __name__ == "__main__":
    main()
