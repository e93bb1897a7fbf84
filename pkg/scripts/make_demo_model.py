#!/usr/bin/env python3
"""Train the bundled demo model from the bundled corpus."""

from __future__ import annotations

import argparse
from pathlib import Path

from parserepair.engine import train_offline
from parserepair.hypgen import RepairNetworks
from parserepair.ilspec import load_spec
from parserepair.repairmem import read_records


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--spec", default="src/parserepair/data/demo.spec")
    parser.add_argument("--corpus", default="src/parserepair/data/corpus.records")
    parser.add_argument("--out", default="src/parserepair/data/demo.model")
    parser.add_argument("--smoothing-lambda", type=float, default=0.5)
    args = parser.parse_args()

    spec = load_spec(Path(args.spec).read_text(encoding="utf-8"))
    records = read_records(Path(args.corpus).read_text(encoding="utf-8"))
    nets = RepairNetworks.fresh(spec, lam=args.smoothing_lambda)
    trained = train_offline(records, spec, nets)
    Path(args.out).write_bytes(nets.save())
    print(f"trained on {trained} records -> {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
