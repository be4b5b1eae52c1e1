"""Shared problem builders for the test suite."""

from pathlib import Path

from arclift import (
    Certificate,
    PrimeField,
    QQ,
    SeriesRing,
    VarSpace,
    build_model,
    make_problem,
    parse_poly,
)

REPO = Path(__file__).resolve().parent.parent
PROBLEMS = REPO / "problems"

F5 = PrimeField(5)


def cusp_problem(field=QQ, n_work=40, jet=("x^3", "x^2"), c=4):
    ring = SeriesRing(field, n_work)
    space = VarSpace.ys(2)
    return make_problem(
        ring,
        n=2,
        ideal_gens=[parse_poly("Y1^2 - Y2^3", ring, space)],
        f_idx=[1],
        minor_cols=[1],
        jet=tuple(ring.parse(s) for s in jet),
        c=c,
    )


def node_problem(field=QQ, n_work=40, jet=("x^2", "x^4"), c=5):
    ring = SeriesRing(field, n_work)
    space = VarSpace.ys(2)
    return make_problem(
        ring,
        n=2,
        ideal_gens=[parse_poly("Y1*Y2 - x^6", ring, space)],
        f_idx=[1],
        minor_cols=[1],
        jet=tuple(ring.parse(s) for s in jet),
        c=c,
    )


def tcurve_problem(n_work=80):
    ring = SeriesRing(QQ, n_work)
    space = VarSpace.ys(3)
    gens = [
        parse_poly(s, ring, space)
        for s in ("Y2^2 - Y1*Y3", "Y3^2 - Y1^2*Y2", "Y1^3 - Y2*Y3")
    ]
    cert = Certificate(
        parse_poly("Y3", ring, space),
        [
            [parse_poly(s, ring, space) for s in row]
            for row in (("Y3", "0"), ("0", "Y3"), ("-Y1^2", "-Y2"))
        ],
    )
    return make_problem(
        ring,
        n=3,
        ideal_gens=gens,
        f_idx=[1, 2],
        minor_cols=[2, 3],
        jet=(ring.parse("x^3"), ring.parse("x^4"), ring.parse("x^5")),
        certificate=cert,
        c=15,
    )


def smooth_problem(n_work=40):
    ring = SeriesRing(QQ, n_work)
    space = VarSpace.ys(1)
    return make_problem(
        ring,
        n=1,
        ideal_gens=[parse_poly("Y1 - x", ring, space)],
        f_idx=[1],
        minor_cols=[1],
        jet=(ring.parse("x"),),
        c=1,
    )


def monomial_curve_problem(ring, q, p, arc):
    """Y1^q = Y2^p with the exact arc (arc^p, arc^q) as jet."""
    space = VarSpace.ys(2)
    yp = ring.one()
    for _ in range(p):
        yp = yp * arc
    yq = ring.one()
    for _ in range(q):
        yq = yq * arc
    return make_problem(
        ring,
        n=2,
        ideal_gens=[parse_poly(f"Y1^{q} - Y2^{p}", ring, space)],
        f_idx=[1],
        minor_cols=[1],
        jet=(yp, yq),
        c=p * (q - 1) + 1,
    )


def cusp_model(**kw):
    return build_model(cusp_problem(**kw))


def node_model(**kw):
    return build_model(node_problem(**kw))
