"""Command-line interface: segment, train, landscape, serve.

Exit codes: 0 success, 1 usage error, 2 data error (missing or unparsable
files, invalid values).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ParseError
from .image import load_image, load_mask
from .landscape import (grid_to_csv, grid_to_pgm, refs_from_flat_indices,
                        sweep)
from .network import load_network
from .pipeline import PipelineConfig, default_arch, load_arch, run_experiment
from .training import TrainConfig


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="mmnn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    seg = sub.add_parser("segment", help="segment an image with a trained network")
    seg.add_argument("--image", required=True)
    seg.add_argument("--net", required=True)
    seg.add_argument("--radius", type=int, default=3)
    seg.add_argument("--threshold", type=float, default=0.5)
    seg.add_argument("--gold")
    seg.add_argument("--out-dir", default="out")

    tr = sub.add_parser("train", help="train a network from annotated points")
    tr.add_argument("--image", required=True)
    tr.add_argument("--gold", required=True)
    tr.add_argument("--points", required=True,
                    help="CSV of annotated points: x,y,role,class")
    tr.add_argument("--arch", help="architecture JSON (default: two-layer head)")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--starts", type=int, default=10)
    tr.add_argument("--steps", type=int, default=30)
    tr.add_argument("--stepsize", type=float, default=0.05)
    tr.add_argument("--fdres", type=float, default=0.01)
    tr.add_argument("--objective", choices=("a", "ba"), default="a")
    tr.add_argument("--subsample", type=int, default=10)
    tr.add_argument("--radius", type=int, help="override the arch feature radius")
    tr.add_argument("--out-dir", default="out")

    ls = sub.add_parser("landscape", help="sweep the objective over two weights")
    ls.add_argument("--image", required=True)
    ls.add_argument("--gold", required=True)
    ls.add_argument("--net", required=True)
    ls.add_argument("--free", required=True,
                    help="two trainable-weight indices, e.g. w0,w1")
    ls.add_argument("--range", dest="range_", default="-1:1", metavar="LO:HI")
    ls.add_argument("--res", type=float, default=0.05)
    ls.add_argument("--out", default="grid.csv")
    ls.add_argument("--radius", type=int, default=3)
    ls.add_argument("--threshold", type=float, default=0.5)

    sv = sub.add_parser("serve", help="run the annotation HTTP service")
    sv.add_argument("--port", type=int, default=8000)
    sv.add_argument("--data-dir", default="mmnn-data")
    return parser


def _parse_free(text: str):
    try:
        parts = [p.strip().lstrip("w") for p in text.split(",")]
        i, j = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"--free expects two indices like w0,w1, got {text!r}")
    return i, j


def _parse_range(text: str):
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise ParseError(f"--range expects lo:hi, got {text!r}")
    if hi <= lo:
        raise ParseError(f"--range needs lo < hi, got {text!r}")
    return lo, hi


def _cmd_segment(args) -> int:
    cfg = PipelineConfig(image_path=args.image, gold_path=args.gold,
                         network_path=args.net, radius=args.radius,
                         threshold=args.threshold, out_dir=args.out_dir)
    output = run_experiment(cfg)
    if output.result.ba is not None:
        print(f"balanced accuracy: {output.result.ba:.4f}")
    print(f"artifacts written to {args.out_dir}")
    return 0


def _cmd_train(args) -> int:
    arch = load_arch(args.arch) if args.arch else default_arch()
    radius = args.radius if args.radius is not None else arch.radius
    cfg = PipelineConfig(
        image_path=args.image, gold_path=args.gold, points_path=args.points,
        arch_path=args.arch, out_dir=args.out_dir, radius=radius,
        sort_features=arch.sort, threshold=arch.threshold,
        subsample_factor=args.subsample,
        train=TrainConfig(num_starts=args.starts, max_steps=args.steps,
                          fd_resolution=args.fdres, step_size=args.stepsize,
                          seed=args.seed, objective=args.objective))
    output = run_experiment(cfg)
    best = max(t.final_value for t in output.trajectories)
    print(f"best final objective: {best:.6g}")
    if output.result.ba is not None:
        print(f"balanced accuracy: {output.result.ba:.4f}")
    print(f"artifacts written to {args.out_dir}")
    return 0


def _cmd_landscape(args) -> int:
    img = load_image(args.image)
    gold = load_mask(args.gold)
    net = load_network(args.net)
    free = refs_from_flat_indices(net, _parse_free(args.free))
    lo, hi = _parse_range(args.range_)
    from .image import FeatureConfig

    grid = sweep(net, img, gold, FeatureConfig(args.radius), free,
                 ranges=((lo, hi), (lo, hi)), resolution=args.res,
                 objective="ba", ba_threshold=args.threshold)
    out = Path(args.out)
    grid_to_csv(grid, out)
    grid_to_pgm(grid, out.with_suffix(".pgm"))
    print(f"grid max {grid.max_value:.4f} at {grid.argmax_point}")
    print(f"wrote {out} and {out.with_suffix('.pgm')}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.data_dir), host="127.0.0.1", port=args.port)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"segment": _cmd_segment, "train": _cmd_train,
                "landscape": _cmd_landscape, "serve": _cmd_serve}
    try:
        return handlers[args.command](args)
    except (FileNotFoundError, ParseError, ValueError, OSError) as exc:
        print(f"mmnn {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
