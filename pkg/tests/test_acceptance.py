"""Acceptance criteria at full size, one PASS/FAIL line per criterion.

The lines are printed immediately (visible with ``-s``) and repeated in the
pytest terminal summary.
"""

import pytest

from brinthompson import checks

from conftest import ACCEPTANCE_LINES

CRITERIA = [
    ("1 table-group laws", lambda: checks.group_laws(1000, 200), 60.0),
    ("2 support correctness", lambda: checks.support_correctness(500), None),
    ("3 localized-subgroup laws", lambda: checks.localized_subgroup_laws(300), None),
    ("4 partition oracle", lambda: checks.partition_oracle(500), None),
    ("5 flagship anchor identity", lambda: checks.flagship_anchor(500, points=10), None),
    ("6 anchor-limit agreement", lambda: checks.anchor_limits(50, depth=8), None),
    ("7 algebraic-disjointness coherence",
     lambda: checks.alg_disjointness_coherence(3, "v2_cfp_gens.json"), 600.0),
    ("8 negative controls", checks.negative_controls, None),
]


@pytest.mark.parametrize("label, run, limit", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(label, run, limit):
    res = run()
    within = limit is None or res.seconds < limit
    ok = res.passed and within and res.checked > 0
    line = (f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {res.checked} checks, "
            f"{len(res.failures)} failures, {res.seconds:.1f}s"
            + (f" (limit {limit:.0f}s)" if limit else ""))
    if res.details:
        line += f" {res.details}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert res.failures == [], res.failures[:5]
    assert res.checked > 0
    assert within, f"took {res.seconds:.1f}s, limit {limit}s"
