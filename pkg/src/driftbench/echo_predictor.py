"""Reference external predictor: scores every test row with 0.5.

Speaks the harness file protocol and serves as the minimal conformance
fixture; run it as ``python -m driftbench.echo_predictor``.
"""

from __future__ import annotations

import argparse
import sys


def protocol_argument_parser(description: str) -> argparse.ArgumentParser:
    """Parser for the documented external-predictor invocation."""
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--train", required=True)
    parser.add_argument("--test", required=True)
    parser.add_argument("--schema", required=True)
    parser.add_argument("--pred-out", required=True)
    parser.add_argument("--remaining-budget", type=float, required=True)
    parser.add_argument("--step", type=int, required=True)
    parser.add_argument("--workdir", required=True)
    return parser


def main(argv=None) -> int:
    args = protocol_argument_parser(__doc__).parse_args(argv)
    with open(args.test, encoding="utf-8") as fh:
        n_rows = sum(1 for _ in fh) - 1  # header line
    with open(args.pred_out, "w", encoding="utf-8") as fh:
        fh.write("0.5\n" * n_rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
