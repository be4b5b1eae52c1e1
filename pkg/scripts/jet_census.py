"""Count jet-space solutions over F_p window by window and compare with lifts.

For each truncation window x^m the brute-force pass enumerates every
coefficient vector that extends the jet of the cusp and kills the ideal,
then checks that randomly lifted arcs land inside the enumerated set.
The counts should grow by a factor of p^n per unit of window beyond the
congruence threshold 2c + 1.

    python3 scripts/jet_census.py
    python3 scripts/jet_census.py --p 7 --windows 9 10 11 --samples 25
"""

import argparse
import time

from arclift import (
    PrimeField,
    SeriesRing,
    SplitMix64,
    VarSpace,
    build_model,
    draw_series,
    make_lift,
    make_problem,
    oracle_enumerate,
    parse_poly,
)


def cusp_problem(p, n_work=40):
    ring = SeriesRing(PrimeField(p), n_work)
    space = VarSpace.ys(2)
    return make_problem(
        ring,
        n=2,
        ideal_gens=[parse_poly("Y1^2 - Y2^3", ring, space)],
        f_idx=[1],
        minor_cols=[1],
        jet=(ring.parse("x^3"), ring.parse("x^2")),
        c=4,
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=5, help="field characteristic")
    ap.add_argument(
        "--windows", type=int, nargs="+", default=[9, 10, 11, 12, 13],
        help="truncation windows x^m to census",
    )
    ap.add_argument("--samples", type=int, default=10, help="random lifts per window")
    ap.add_argument("--seed", type=int, default=0, help="seed for the sampled lifts")
    args = ap.parse_args()

    problem = cusp_problem(args.p)
    model = build_model(problem)
    ring = problem.ring
    rng = SplitMix64(args.seed)
    print(f"cusp over F{args.p}, jet (x^3, x^2), c = {problem.c}")
    print(f"{'window':>8} {'count':>10} {'growth':>8} {'sampled':>8} {'secs':>7}")

    prev = None
    for m in args.windows:
        start = time.perf_counter()
        jets = oracle_enumerate(problem, m)
        inside = 0
        for _ in range(args.samples):
            tf = (draw_series(rng, ring, 1, 6),)
            lift = make_lift(model, tf)
            if lift.strict and jets.contains(lift.y2):
                inside += 1
        secs = time.perf_counter() - start
        growth = "-" if prev is None else f"x{jets.count // prev}" if prev else "-"
        print(
            f"{f'x^{m}':>8} {jets.count:>10} {growth:>8}"
            f" {inside}/{args.samples:<6} {secs:>7.2f}"
        )
        prev = jets.count


if __name__ == "__main__":
    main()
