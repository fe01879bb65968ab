"""Independent reference implementations used to check the package.

Nothing here imports from the package under test. The expertise formula is
evaluated with 50-digit arithmetic via mpmath; the greedy truck-factor
simulator is a direct transliteration of the published pseudo-code over plain
dictionaries.
"""

from __future__ import annotations

import math
from mpmath import mp, mpf
from mpmath import log as mplog

mp.dps = 50

INTERCEPT = "5.28223"
ADDS_COEF = "0.23173"
FA_COEF = "0.36151"
NUM_DAYS_COEF = "0.19421"
SIZE_COEF = "0.28761"


def doe_highprec(adds: int, fa: int, num_days: int, size: int) -> float:
    """The expertise formula at 50 decimal digits, rounded to float at the end."""
    value = (
        mpf(INTERCEPT)
        + mpf(ADDS_COEF) * mplog(1 + adds)
        + mpf(FA_COEF) * fa
        - mpf(NUM_DAYS_COEF) * mplog(1 + num_days)
        - mpf(SIZE_COEF) * mplog(size)
    )
    return float(value)


def simulate_truck_factor(
    expert_sets: dict[str, set[str]],
    doe_sums: dict[str, float],
) -> tuple[int, list[str]]:
    """Step-by-step greedy simulation: remove the top author until coverage
    drops to one half or below, or no experts remain."""
    files = sorted(expert_sets)
    removed: list[str] = []
    tf = 0
    while True:
        remaining = set().union(*(expert_sets[f] for f in files)) - set(removed)
        if not remaining:
            break
        covered = sum(1 for f in files if expert_sets[f] - set(removed))
        if covered / len(files) <= 0.5:
            break
        top = min(
            remaining,
            key=lambda dev: (
                -sum(1 for f in files if dev in expert_sets[f]),
                -doe_sums.get(dev, 0.0),
                dev,
            ),
        )
        removed.append(top)
        tf += 1
    return tf, removed


def expected_knowledge(
    expected_facts: dict[tuple[str, str], tuple[int, bool, int]],
    expected_locs: dict[str, int],
    reference_ts: int,
    threshold: float = 0.75,
) -> dict[str, dict]:
    """Per-file expertise values, expert sets, and importance, all derived
    from scripted facts through the high-precision formula."""
    per_file: dict[str, dict] = {}
    for (dev, path), (adds, fa, last_ts) in expected_facts.items():
        num_days = (reference_ts - last_ts) // 86400
        doe = doe_highprec(adds, 1 if fa else 0, num_days, expected_locs[path])
        per_file.setdefault(path, {})[dev] = doe
    out: dict[str, dict] = {}
    for path, values in per_file.items():
        top = max(values.values())
        experts = {
            dev for dev, value in values.items()
            if top > 0 and value > 0 and value / top >= threshold
        }
        if not experts:
            experts = {dev for dev, value in values.items() if value == top}
        out[path] = {
            "doe": values,
            "experts": experts,
            "importance": math.fsum(values.values()),
        }
    return out
