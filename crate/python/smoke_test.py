#!/usr/bin/env python3
"""Smoke test for the bolpq_py extension module.

Builds nothing itself: run `cargo build --release -p bolpq-py` (or a debug
build) first.  The script locates the compiled cdylib, stages it under the
importable name bolpq_py.so, and exercises the bindings end to end.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> None:
    candidates = [
        REPO / "target" / "release" / "libbolpq_py.so",
        REPO / "target" / "debug" / "libbolpq_py.so",
    ]
    lib = next((c for c in candidates if c.exists()), None)
    if lib is None:
        sys.exit(
            "libbolpq_py.so not found; run `cargo build --release -p bolpq-py` first"
        )
    stage = Path(tempfile.mkdtemp(prefix="bolpq_py_"))
    shutil.copy2(lib, stage / "bolpq_py.so")
    sys.path.insert(0, str(stage))


stage_module()

import bolpq_py as bp  # noqa: E402

failures = []


def check(name: str, cond: bool) -> None:
    print(f"{'ok  ' if cond else 'FAIL'} {name}")
    if not cond:
        failures.append(name)


# --- parameters and the admissible set -------------------------------------
params = bp.Params(7, 3)
check("params basics", (params.p, params.q, params.t) == (7, 3, 3))
check("branch", params.branch == "q|p-1")
check("omega", params.omega == (4, 0))
check("gamma set", params.gamma_set() == [(0, 0), (1, 0), (3, 0), (4, 0), (5, 0)])
check("f orbits", params.orbits("iso") == [[(0, 0), (1, 0)], [(3, 0), (5, 0)], [(4, 0)]])
check("fg orbits", params.orbits("isotopy") == [[(0, 0), (1, 0)], [(3, 0), (4, 0), (5, 0)]])
check("theta at 1/2", params.theta((4, 0)) == [(1, 0), (5, 0), (5, 0)])
check("g action", params.act_g((4, 0), 1) == (3, 0))

p53 = bp.Params(5, 3)
check("inert branch", p53.branch == "q|p+1" and p53.omega == (2, 3))
check("inert gamma set", p53.gamma_set() == [(3, 0), (3, 2), (3, 3)])

# --- classification ----------------------------------------------------------
check("counts (7,3)", bp.counts(7, 3) == (4, 3))
check("counts (19,5)", bp.counts(19, 5) == (9, 3))
check("counts nonexistent", bp.counts(7, 5) == (1, 1))

report = json.loads(bp.classify_json(7, 3, "isotopy"))
check("report counts", report["counts"] == {"isomorphism": 4, "isotopism": 3})
check("report bruck class", report["classes"][2]["is_bruck"] is True)
check("report omega string", report["omega"] == "4")

rows = bp.count_range(3, 23)
check("count_range", [(r[0], r[2]) for r in rows] == [(5, 2), (7, 3), (11, 3), (13, 4), (17, 4), (19, 5), (23, 5)])

# --- loop tables -------------------------------------------------------------
bruck = bp.Loop.from_gamma(5, 3, (3, 0))
check("bruck flags", bruck.is_latin() and bruck.is_bol() and bruck.is_bruck())
check("bruck not assoc", not bruck.is_associative())
check("formula spot value", bruck.mul(5, 6) == 13)  # (1,0)*(1,1) = (2,3)

cyc = bp.Loop.cyclic(5, 3)
check("cyclic is abelian group", cyc.is_associative() and cyc.is_commutative())
check("identity", cyc.identity == 0 and cyc.order == 15)

group21 = params.table((1, 0))
check("gamma=1 is nonabelian group", group21.is_associative() and not group21.is_commutative())

# --- oracles -----------------------------------------------------------------
check("isotopic within orbit", bp.brute_isotopic(bruck, bp.Loop.from_gamma(5, 3, (3, 2))))
check("cyclic not isotopic to bruck", not bp.brute_isotopic(cyc, bruck))
w = bp.brute_isomorphic(cyc, cyc)
check("identity witness", w is not None and w[:3] == [0, 1, 2])
check("non-isomorphic", bp.brute_isomorphic(cyc, bruck) is None)

iso = bruck.principal_isotope(1, 5)
check("principal isotope is a loop", iso.is_latin() and iso.identity == bruck.mul(1, 5))

# --- file round trip ---------------------------------------------------------
with tempfile.TemporaryDirectory() as d:
    path = str(Path(d) / "bruck.txt")
    bruck.save(path)
    back = bp.Loop.load(path)
    check("file round trip", back.rows() == bruck.rows() and back.is_bruck())

# --- cross verification ------------------------------------------------------
ok, summary = bp.cross_verify(5, 3)
check("cross verify (5,3)", ok and "PASS" in summary)
ok, _ = bp.cross_verify(7, 3)
check("cross verify (7,3)", ok)

# --- error paths -------------------------------------------------------------
try:
    bp.Params(7, 5)
    check("no-root error raised", False)
except ValueError as e:
    check("no-root error raised", "does not divide" in str(e))

try:
    bp.Loop.from_gamma(7, 3, (2, 0))
    check("degenerate gamma raises", False)
except ValueError:
    check("degenerate gamma raises", True)

print()
if failures:
    sys.exit(f"{len(failures)} smoke checks failed: {failures}")
print(f"bolpq_py {bp.version()}: all smoke checks passed")
