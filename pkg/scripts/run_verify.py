#!/usr/bin/env python3
"""Run the full verification suite at the default resolution.

Writes one JSON document per check plus a roll-up CSV.  Equivalent to
`vbesov verify --check all`, with a convenience flag for the quick
reduced-resolution profile used when iterating.
"""

import argparse
import sys

from vbesov.cli import main as cli_main

QUICK = "points = 1024\noctaves = 6\nnodes_per_octave = 12\n"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/verify")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--quick", action="store_true",
                    help="reduced resolution (N=1024, V=6)")
    ap.add_argument("--check", action="append", help="subset of check ids")
    args = ap.parse_args()

    argv = ["verify", "--out", args.out, "--seed", str(args.seed),
            "--jobs", str(args.jobs)]
    if args.quick:
        import tempfile
        cfg = tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False)
        cfg.write(QUICK)
        cfg.close()
        argv += ["--config", cfg.name]
    for c in args.check or []:
        argv += ["--check", c]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
