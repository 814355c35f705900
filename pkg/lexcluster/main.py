"""
lexcluster - compact core community detection from the command line.

Subcommands:
    cluster      build a dendrogram, export the best clusterings
    quality      evaluate an external clustering
    compare      LexDFS hierarchy against the greedy modularity baseline
    convergence  edge-ranking stability across LexDFS runs

Exit codes: 0 success, 1 usage error, 2 data error.
"""
import argparse
import logging
import sys
from pathlib import Path
from collections.abc import Sequence

from pydantic import ValidationError

from lexcluster.commands import cluster, compare, convergence, quality
from lexcluster.commands.common import RunContext
from lexcluster.core.config import Settings, get_settings
from lexcluster.core.errors import EXIT_DATA, EXIT_OK, LexClusterError, UsageError
from lexcluster.core.log import configure_logging
from lexcluster.schemas.run import RunConfig, RunManifest
from lexcluster.services.quality_service import DiameterMode
from lexcluster.storage.base import generate_ulid, utc_now

logger = logging.getLogger(__name__)

COMMANDS = {
    "cluster": cluster.run,
    "quality": quality.run,
    "compare": compare.run,
    "convergence": convergence.run,
}


class ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting, so the exit code stays ours."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="edge-list file (SNAP format)")
    common.add_argument("--algo", choices=["lexdfs", "cnm"], default="lexdfs")
    common.add_argument("--runs", type=int, help="LexDFS runs l")
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int, help="repeated LexDFS pipelines for the envelope")
    common.add_argument("--window", action="append", dest="windows",
                        help="convergence window: integer or p%% (repeatable)")
    common.add_argument("--mean-eccentricity", action="store_true",
                        help="compactness over mean eccentricity instead of diameter")
    common.add_argument("--normalize", action="store_true", help="divide compactness by m")
    common.add_argument("--approx-diameter", action="store_true",
                        help="double-sweep lower bound instead of exact diameters")
    common.add_argument("--out-dir")
    common.add_argument("--workers", type=int)
    common.add_argument("--weighted", action="store_true", help="third column holds edge weights")
    common.add_argument("--dataset", help="named dataset whose (n, m) is checked")
    common.add_argument("--clustering", help="node_id,cluster_label file (quality)")
    common.add_argument("--dump-visits", action="store_true", help="write every run's visit order")
    common.add_argument("--raw-profile", action="store_true", help="keep duplicate profile points")
    common.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")
    common.add_argument("--ordering-stride", type=int, help="keep every k-th edge ranking")
    common.add_argument("--log-level")
    common.add_argument("--debug", action="store_true", help="check LexDFS label invariants")

    parser = ArgumentParser(prog="lexcluster", description="Compact core community detection")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _pick(value, default):
    return default if value is None else value


def build_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """
    Merge flags over Settings defaults.

    Raises:
        UsageError: a value fails validation
    """
    approx = args.approx_diameter or settings.diameter_mode == DiameterMode.APPROX.value
    try:
        return RunConfig(
            command=args.command,
            input=args.input,
            algorithm=args.algo,
            runs=_pick(args.runs, settings.runs),
            seed=_pick(args.seed, settings.seed),
            trials=_pick(args.trials, settings.trials),
            windows=_pick(args.windows, settings.window_list),
            mean_eccentricity=args.mean_eccentricity,
            normalize=args.normalize,
            diameter_mode=DiameterMode.APPROX if approx else DiameterMode.EXACT,
            all_pairs_threshold=settings.all_pairs_threshold,
            workers=_pick(args.workers, settings.workers),
            weighted=args.weighted,
            dataset=args.dataset,
            clustering=args.clustering,
            dump_visits=args.dump_visits,
            raw_profile=args.raw_profile or not settings.dedup_profile,
            gnuplot=args.gnuplot,
            ordering_stride=_pick(args.ordering_stride, settings.ordering_stride),
            checkpoint_stride=settings.checkpoint_stride,
            debug=args.debug or settings.debug,
            out_dir=_pick(args.out_dir, settings.out_dir),
        )
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise UsageError(f"invalid configuration: {problems}")


def _write_manifest(manifest: RunManifest, out_dir: Path) -> None:
    manifest.finished_at = utc_now()
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "manifest.json"
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Run manifest written to {path}")
    except OSError as e:
        logger.error(f"Could not write the run manifest: {e}")


def main(argv: Sequence[str] | None = None) -> int:
    """Parse, run one subcommand and leave a manifest once the flags parse."""
    settings = get_settings()
    started_at = utc_now()
    args = None
    try:
        args = build_parser().parse_args(argv)
        configure_logging(settings, args.log_level)
        config = build_config(args, settings)
    except LexClusterError as e:
        configure_logging(settings)
        logger.error(e.detail)
        if args is not None:
            _write_manifest(
                RunManifest(
                    run_id=generate_ulid(),
                    command=args.command,
                    started_at=started_at,
                    status="failed",
                    error=e.detail,
                    exit_code=e.exit_code,
                ),
                Path(_pick(args.out_dir, settings.out_dir)),
            )
        return e.exit_code

    ctx = RunContext(config, RunManifest(
        run_id=generate_ulid(),
        command=config.command,
        config=config,
        started_at=started_at,
    ))
    try:
        ctx.out_dir.mkdir(parents=True, exist_ok=True)
        COMMANDS[config.command](ctx)
    except LexClusterError as e:
        logger.error(e.detail)
        ctx.manifest.status, ctx.manifest.error, ctx.manifest.exit_code = "failed", e.detail, e.exit_code
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure")
        ctx.manifest.status, ctx.manifest.error, ctx.manifest.exit_code = "failed", repr(e), EXIT_DATA
        return EXIT_DATA
    else:
        ctx.manifest.status, ctx.manifest.exit_code = "ok", EXIT_OK
        return EXIT_OK
    finally:
        _write_manifest(ctx.manifest, ctx.out_dir)


if __name__ == "__main__":
    sys.exit(main())
