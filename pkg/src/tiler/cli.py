"""Command line: ``tiler <pipeline> --config <path> [--seed N] [--out DIR]``.

Exit codes: 0 all assertions pass, 1 some assertion fails, 2 bad config,
3 pipeline error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .harness import PIPELINES, ConfigError, PipelineError, load_config, run


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tiler", description="Følner tilings, multipackings and their audits.")
    ap.add_argument("pipeline", choices=PIPELINES)
    ap.add_argument("--config", help="YAML run config")
    ap.add_argument("--seed", type=int, help="overrides the config seed")
    ap.add_argument("--out", help="output directory (default runs/<pipeline>)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, pipeline=args.pipeline, seed=args.seed, out=args.out)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    try:
        rep = run(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except PipelineError as e:
        print(f"pipeline error in {e}", file=sys.stderr)
        return 3
    for row in rep.rows:
        if row.passed is not None:
            print(f"{'PASS' if row.passed else 'FAIL'}  {row.metric} = {row.serialize()['exact'] or row.serialize()['decimal']}")
    print(f"{'all assertions pass' if rep.passed else 'assertions failed'} ({rep.seconds:.1f} s)")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
