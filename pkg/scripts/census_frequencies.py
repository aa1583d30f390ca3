"""Stratum frequencies of a census, scaled by q and q^2.

Height >= 2 is a divisor in the moduli space, so its frequency should look
like c/q; height = inf has codimension 2 and should look like c/q^2.
"""

import argparse
import json

from brauerheight.census import CensusConfig, run_census


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--degree", type=int, nargs="+", default=[5])
    ap.add_argument("--sample", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    out = []
    for p in args.p:
        cfg = CensusConfig(p, degrees=tuple(args.degree), sample=args.sample, seed=args.seed, jobs=args.jobs)
        rep = run_census(cfg)
        hc = rep.height_counts()
        n = max(rep.total, 1)
        ge2 = (hc["2"] + hc["inf"]) / n
        inf = hc["inf"] / n
        out.append({"p": p, "curves": rep.total, "h>=2": ge2, "h>=2 * q": ge2 * p,
                    "h=inf": inf, "h=inf * q^2": inf * p * p, "seconds": round(rep.elapsed, 2)})
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
