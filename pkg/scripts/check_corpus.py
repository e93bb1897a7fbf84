#!/usr/bin/env python3
"""Sanity-check the bundled corpus against the evaluation properties.

Verifies, with oracle answering and the bundled model:
  1. per record x policy: accuracy never drops, and is non-decreasing
     across the default budgets;
  2. the meta policy at budget 10 clearly beats the budget-0 baseline;
  3. with persistent reinforcement, a second pass over the corpus asks
     no more questions than the first.
"""

from __future__ import annotations

import time

from parserepair.bundled import bundled_path, load_corpus_records, load_demo_spec
from parserepair.engine import OracleAnswerer, run_session
from parserepair.hypgen import POLICY_NAMES, RepairConfig, RepairNetworks


def main() -> int:
    spec = load_demo_spec()
    records = load_corpus_records()
    base = bundled_path("demo.model").read_bytes()
    budgets = (0, 5, 10, 25)

    start = time.time()
    violations = 0
    sums = {}
    for policy in POLICY_NAMES:
        for i, record in enumerate(records):
            prev = None
            for budget in budgets:
                nets = RepairNetworks.load(base)
                result = run_session(
                    record.output,
                    spec,
                    nets,
                    OracleAnswerer(record.gold, spec),
                    RepairConfig(max_questions=budget),
                    policy=policy,
                    gold=record.gold,
                )
                key = (policy, budget)
                acc = sums.setdefault(key, [0.0, 0.0, 0.0])
                acc[0] += result.accuracy_before
                acc[1] += result.accuracy_after
                acc[2] += result.questions_used
                if result.accuracy_after < result.accuracy_before - 1e-12:
                    violations += 1
                    print(
                        f"DROP {policy} record {i} budget {budget}: "
                        f"{result.accuracy_before:.4f} -> {result.accuracy_after:.4f}"
                    )
                if prev is not None and result.accuracy_after < prev - 1e-12:
                    violations += 1
                    print(
                        f"NONMONO {policy} record {i} budget {budget}: "
                        f"{prev:.4f} -> {result.accuracy_after:.4f}"
                    )
                prev = result.accuracy_after
    elapsed = time.time() - start
    n = len(records)
    print(f"\n{9 * len(budgets) * n} sessions in {elapsed:.1f}s, "
          f"{violations} violations")
    print("\npolicy      budget  before  after   questions")
    for policy in POLICY_NAMES:
        for budget in budgets:
            before, after, q = sums[(policy, budget)]
            print(f"{policy:<11} {budget:>5}  {before / n:.4f}  {after / n:.4f}"
                  f"  {q / n:>6.2f}")

    meta10 = sums[("meta", 10)][1] / n
    base0 = sums[("meta", 0)][0] / n
    print(f"\nmeta@10 {meta10:.4f} vs budget-0 {base0:.4f} "
          f"(+{100 * (meta10 - base0):.1f} points)")

    nets = RepairNetworks.fresh(spec)
    passes = []
    for _ in range(2):
        total = 0
        for record in records:
            result = run_session(
                record.output,
                spec,
                nets,
                OracleAnswerer(record.gold, spec),
                RepairConfig(max_questions=10),
                gold=record.gold,
            )
            total += result.questions_used
        passes.append(total)
    print(f"persistent passes: {passes[0]} then {passes[1]} questions")
    return 0 if violations == 0 and passes[1] <= passes[0] else 1


if __name__ == "__main__":
    raise SystemExit(main())
