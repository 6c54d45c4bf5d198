"""Smoke test for the pycommutant extension.

Build and stage the module first:

    cargo build --release -p commutant-py --features extension-module
    cp target/release/libpycommutant.so python/pycommutant.so
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pycommutant as pc  # noqa: E402


def main() -> int:
    gens = pc.ideal_dump(3, 0, "full")
    assert len(gens) == 4, gens

    rep = json.loads(pc.sop_verify(3, 5))
    assert rep["verdict"], rep
    assert sorted(rep["pure_power_witnesses"]) == ["x_2_1", "x_2_3", "x_3_1", "x_3_2"]

    rep = json.loads(pc.fpure_check(4, 2))
    assert rep["is_fpure_witnessed"] and rep["survivor_count"] == 1, rep

    for p in (3, 5):
        assert pc.target_coefficient(p) == pc.n4_closed_form(p) == pc.lemma_signed_sum(p) == 1

    rows = json.loads(pc.lemma_table(13))
    assert [r["matches_stated"] for r in rows] == [r["p"] % 4 == 1 for r in rows]
    assert pc.binom_mod(5, 2, 3) == 1

    assert json.loads(pc.recursions_verify(6, 2))["passed"]
    assert json.loads(pc.induction_check(5))["passed"]
    assert json.loads(pc.appendix_fixture(7, 0))["variant"] == "FULL_ODD"

    try:
        pc.fpure_check(4, 3, "full", 0)
    except RuntimeError:
        pass
    else:
        raise AssertionError("term ceiling 0 must raise")
    try:
        pc.sop_verify(3, 4)
    except ValueError:
        pass
    else:
        raise AssertionError("characteristic 4 must raise")

    print("pycommutant smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
