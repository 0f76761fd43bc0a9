"""Command line entry point: ``netstate <stage> --config ... --in ... --out ...``."""
import argparse
import logging
import sys
from pathlib import Path

from . import pipeline
from .errors import ConfigError, DataError, NetstateError

STAGES = ("synth", "connectivity", "detect", "summarize", "pipeline")


def build_parser():
    p = argparse.ArgumentParser(
        prog="netstate",
        description="Detect and summarise network states in time-varying PLV graphs.")
    p.add_argument("stage", choices=STAGES)
    p.add_argument("--config", help="JSON config; omitted keys take their defaults")
    p.add_argument("--in", dest="in_path",
                   help="recordings directory (connectivity, pipeline) or tensor directory (detect, summarize)")
    p.add_argument("--out", dest="out_path", required=True, help="output directory")
    p.add_argument("--states", help="states.json for summarize (default: <in>/../states.json)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    p.add_argument("--verbose", "-v", action="count", default=0)
    return p


def _run(args):
    if args.threads < 1:
        raise ConfigError("--threads must be at least 1")
    if args.seed is not None and args.seed < 0:
        raise ConfigError("--seed must be non-negative")
    cfg = pipeline.load_config(args.config, args.seed)
    if args.stage == "synth":
        pipeline.run_synth(cfg, args.out_path)
        return
    if not args.in_path:
        raise ConfigError(f"stage {args.stage!r} needs --in")
    if args.stage == "connectivity":
        pipeline.run_connectivity(args.in_path, cfg, args.out_path, args.threads)
    elif args.stage == "detect":
        pipeline.run_detect(args.in_path, cfg, args.out_path)
    elif args.stage == "summarize":
        states = args.states or str(Path(args.in_path).parent / "states.json")
        pipeline.run_summarize(args.in_path, states, cfg, args.out_path, args.threads)
    else:
        pipeline.run_pipeline(args.in_path, cfg, args.out_path, args.threads)


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        _run(args)
    except NetstateError as exc:
        print(f"netstate {args.stage}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"netstate {args.stage}: I/O error: {exc}", file=sys.stderr)
        return DataError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
