import argparse
import logging
import sys
from pathlib import Path

# Ensure repo root is on sys.path
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from engine.api.config import COMMANDS, FORMATS, config_from_mapping
from engine.api.errors import SchemaError
from engine.app.loader import load_run_config
from engine.app.loop import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Semiring computation-graph runner")
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument("input", nargs="?", help="Input JSON document (graph, trellis, factorgraph, zdd, hypergraph or tape)")
    parser.add_argument("--semiring", help='Semiring name, e.g. real, logreal, natpoly(3), bc(real,2), "tensor(real,bc1)"')
    parser.add_argument("--checkpoint", help="Checkpoint policy: all | nodes | cutsets:K")
    parser.add_argument("--features", help="Features JSON file (expect, second-order)")
    parser.add_argument("--point", help="Evaluation point x1,...,xm (grad)")
    parser.add_argument("--format", choices=FORMATS, help="Output format")
    parser.add_argument("--atol", type=float, help="Absolute tolerance for approximate semirings")
    parser.add_argument("--rtol", type=float, help="Relative tolerance for approximate semirings")
    parser.add_argument("--telemetry", action="store_true", default=None, help="Append semiring add/mul counts")
    parser.add_argument("--emit-graph", action="store_true", default=None, help="Also print the built computation graph")
    parser.add_argument("--forward-mode", action="store_true", default=None,
                        help="expect: one forward pass per feature; grad: one forward pass per input")
    parser.add_argument("--cases", type=int, help="validate: random cases per law")
    parser.add_argument("--seed", type=int, help="validate: random seed")
    parser.add_argument("--config", help="YAML run configuration; flags given here override it")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    return parser


def main():
    args = build_parser().parse_args()
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        data = load_run_config(Path(args.config)) if args.config else {}
        flags = {
            "semiring": args.semiring,
            "checkpoint": args.checkpoint,
            "features": args.features,
            "point": args.point,
            "format": args.format,
            "atol": args.atol,
            "rtol": args.rtol,
            "telemetry": args.telemetry,
            "emit_graph": args.emit_graph,
            "forward_mode": args.forward_mode,
            "cases": args.cases,
            "seed": args.seed,
        }
        data.update({k: v for k, v in flags.items() if v is not None})
        cfg = config_from_mapping(args.command, args.input, data)
    except (SchemaError, ValueError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        sys.exit(2)

    sys.exit(run(cfg))


if __name__ == "__main__":
    main()
