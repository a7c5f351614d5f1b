"""Global search with the neighborhood exclusion disabled: where do the failures lie?

Prints a histogram of max-norm distances from failure-cube centers to the square
configuration.  Needs a few minutes and about 2.5 GB of memory.
"""
import numpy as np

from hemisum.search import SearchConfig, run_global, witness_configs

SQUARE = ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0))


def main():
    r = run_global(SearchConfig(exclude_neighborhood=False))
    wits = np.array(witness_configs(r.failures)).reshape(-1, 6)
    d = np.abs(wits - np.ravel(SQUARE)).max(axis=1) if len(wits) else np.zeros(0)
    print(f"failures: {len(d)}")
    if not len(d):
        return
    print(f"within 1/8: {(d <= 1 / 8).mean():.5f}; max {d.max():.4f}; median {np.median(d):.4f}")
    print("per-coordinate max |offset|:", np.round(np.abs(wits - np.ravel(SQUARE)).max(axis=0), 4).tolist())
    hist, edges = np.histogram(d, bins=np.arange(0, 0.1401, 0.01))
    for n, lo in zip(hist, edges):
        print(f"  [{lo:.2f}, {lo + 0.01:.2f}): {n}")


if __name__ == "__main__":
    main()
