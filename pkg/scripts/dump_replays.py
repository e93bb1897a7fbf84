#!/usr/bin/env python3
"""Print JSON oracle transcripts for the bundled demo records.

Runs every demo record through an in-process repair session against the
bundled model and emits one object per record with the record text, the
question/answer transcript, the final structure, and its paraphrase.
The web client's replay test compares these against the HTTP service.
"""

from __future__ import annotations

import argparse
import json
import sys

from parserepair.bundled import bundled_path, load_demo_glosses, load_demo_records, load_demo_spec
from parserepair.dialogue import sentence_paraphrase
from parserepair.engine import OracleAnswerer, run_session
from parserepair.fstruct import print_fs
from parserepair.hypgen import RepairConfig, RepairNetworks
from parserepair.repairmem import format_record


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-questions", type=int, default=10)
    args = parser.parse_args()

    spec = load_demo_spec()
    glosses = load_demo_glosses()
    # one shared network set, mutated session by session in record order,
    # exactly as a freshly started service would mutate its own copy
    nets = RepairNetworks.load(bundled_path("demo.model").read_bytes())
    config = RepairConfig(max_questions=args.max_questions)

    replays = []
    for record in load_demo_records():
        result = run_session(
            record.output,
            spec,
            nets,
            OracleAnswerer(record.gold, spec),
            config,
            glosses=glosses,
        )
        replays.append(
            {
                "record": format_record(record),
                "questions": [entry.question for entry in result.transcript],
                "answers": [entry.answer for entry in result.transcript],
                "final_ilt": print_fs(result.final_ilt),
                "paraphrase": sentence_paraphrase(result.final_ilt, glosses),
                "questions_used": result.questions_used,
            }
        )

    json.dump(replays, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
