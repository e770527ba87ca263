#!/usr/bin/env python3
"""Smoke test for the pyslp extension module.

Builds nothing itself: run `cargo build -p pyslp` (or `--release`) first.
The script locates the compiled cdylib, stages it as an importable module,
and exercises the main types and operations end to end.
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> None:
    candidates = [
        REPO / "target" / "release" / "libpyslp.so",
        REPO / "target" / "debug" / "libpyslp.so",
        REPO / "target" / "release" / "libpyslp.dylib",
        REPO / "target" / "debug" / "libpyslp.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("no built extension found; run `cargo build -p pyslp` first")
    stage = Path(tempfile.mkdtemp(prefix="pyslp-smoke-"))
    shutil.copy(built, stage / "pyslp.so")
    sys.path.insert(0, str(stage))


def check(name: str, condition: bool) -> None:
    print(f"  {name}: {'ok' if condition else 'FAILED'}")
    if not condition:
        sys.exit(1)


def main() -> None:
    stage_module()
    import pyslp

    print("program construction and evaluation")
    prog = pyslp.Slp.parse("slp 0\nadd 0 0\nmul 1 1\n")
    check("parse/serialize round-trip", pyslp.Slp.parse(prog.serialize()).serialize() == prog.serialize())
    check("eval_exact", pyslp.eval_exact(prog) == 4)
    check("eval_mod", pyslp.eval_mod(prog, 3) == 1)
    check("validation", prog.violations() == [])

    big = pyslp.Slp.from_int(2**200 - 3)
    check("arbitrary-precision values", pyslp.eval_exact(big) == 2**200 - 3)
    check("pow2 builder", pyslp.eval_exact(pyslp.Slp.pow2(100)) == 2**100)
    check("shift builder", pyslp.eval_exact(big.shift(3)) == 2**200)

    print("polynomials")
    poly = pyslp.Slp.parse("slp 1\nvar 1\nmul 1 1\nadd 2 0\n")  # x^2 + 1
    check("expand_poly", pyslp.expand_poly(poly) == [1, 0, 1])
    check("degree bound", pyslp.degree_upper_bound(poly) >= 2)

    print("number theory")
    check("is_3sos", pyslp.is_3sos(6) and not pyslp.is_3sos(7))
    check("is_2sos", pyslp.is_2sos(2) and not pyslp.is_2sos(21))
    check("is_perfect_square", pyslp.is_perfect_square(144) and not pyslp.is_perfect_square(145))
    check("isqrt", pyslp.isqrt(10**40 + 12345) == 10**20)
    sign, factors = pyslp.factorize(-720)
    check("factorize", sign == -1 and factors == [(2, 4), (3, 2), (5, 1)])
    a, b, c, d = pyslp.four_square_witness(310)
    check("four squares", a * a + b * b + c * c + d * d == 310)
    count, ratio = pyslp.density_scan("3sos", 100)
    check("density scan", count == 85)

    print("deciders")
    check("posslp", pyslp.decide_problem("posslp", prog))
    check("equslp", pyslp.decide_problem("equslp", pyslp.Slp.parse("slp 0\nsub 0 0\n")))
    check("div2slp", pyslp.decide_problem("div2slp", pyslp.Slp.from_int(48), l=4))
    check("degslp", pyslp.decide_problem("degslp", poly, d=2))
    check("pospolyslp", pyslp.decide_problem("pospolyslp", poly))
    check("squpolyslp on a square", pyslp.decide_problem("squpolyslp", pyslp.Slp.parse("slp 1\nvar 1\nmul 1 1\n"), seed=7))

    print("reductions")
    gadget = pyslp.equ_to_3sos(pyslp.Slp.from_int(2))
    check("equ_to_3sos value", pyslp.eval_exact(gadget) == 7 * 2**8)
    check("equ_to_3sos answer", not pyslp.decide_problem("3sosslp", gadget))
    m, rev = pyslp.reverse_slp(poly)
    check("reverse_slp", pyslp.expand_poly(rev) == [1, 0, 1] and m == 2)
    answer, calls = pyslp.pos_via_3sos(pyslp.Slp.from_int(-7))
    check("pos_via_3sos driver", answer is False and calls <= 5)
    answer, _ = pyslp.three_sos_via_div2(pyslp.Slp.from_int(28))
    check("3sos driver on 28", answer is False)
    kind = pyslp.ord_to_deg(poly, 1)
    check("ord_to_deg", kind[0] == "instance")

    print("campaigns")
    summary = pyslp.run_campaign("gadget-3sos", random_count=50, max_size=5, exhaustive=2, seed=3)
    check("gadget campaign passes", summary["passed"] and summary["fail"] == 0)
    check("campaign names exposed", "reversal" in pyslp.campaign_names())

    print("smoke test passed")


if __name__ == "__main__":
    main()
