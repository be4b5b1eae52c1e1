"""Arcs through a smooth model: lifting, parametrization, and enumeration.

A smooth model turns the original system into g = a + T + Q with an
invertible bound block.  Solving g = 0 for the bound coordinates T1..Tr,
with the free coordinates T(r+1)..Tn chosen at will inside (x), produces
arcs y'' that solve the system and agree with the jet y' through x^(2c).
This module provides that machinery in both directions:

    hensel_solve     Newton iteration on the bound block
    make_lift        free choices in, certified arc out
    extract_t        strict arc in, its T coordinates out
    offset_lift      reparametrize around a strict reference: free
                     coordinates move by x^(2c+1) * z
    extract_params   recover z from an arc and a strict reference
    find_strict_reference
                     search for a lift that agrees with the jet through
                     x^(2c), trying zero first, then greedy affine
                     corrections layer by layer
    oracle_enumerate brute force: every coefficient vector mod x^m over a
                     finite field that extends the jet and kills the ideal

A lift is strict when every component matches the jet through x^(2c).
Strict lifts are exactly the arcs the family parametrizes, which is what
makes extraction well posed.  All order claims are made against effective
precision: an invisible series is a certified zero at its precision, never
an exact one, and the code refuses to decide questions the precision
cannot settle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .desing import Problem, SmoothModel
from .errors import (
    BudgetExceededError,
    FieldMismatchError,
    IdentityFailedError,
    NoProgressError,
    NotStrictError,
    OutOfFamilyError,
    PrecisionExhaustedError,
    StructureError,
)
from .ring import Series


@dataclass(frozen=True)
class HenselResult:
    """Outcome of Newton iteration on the bound block."""

    t_bound: tuple
    iterations: int
    k0: int
    k_final: int


@dataclass(frozen=True)
class LiftResult:
    """An arc produced by lifting, with the certificates gathered on the way.

    t is the full coordinate vector (bound block first, then the free
    choices), y2 the arc in the original component order.  residual_f and
    residual_i are the certified vanishing orders of the selected subsystem
    and of the whole ideal at y2.
    """

    t: tuple
    y2: tuple
    residual_f: int
    residual_i: int
    strict: bool
    newton_iterations: int
    k0: int

    @property
    def eff_prec(self) -> int:
        return min(s.prec for s in self.y2)


def hensel_solve(model: SmoothModel, t_free, target: int, seed=None) -> HenselResult:
    """Solve the bound block of g = 0 to residual order at least target.

    The free coordinates are fixed to t_free.  Each step applies a full
    Newton update t -> t - J(t)^-1 g(t) with J the bound block Jacobian; the
    residual order must strictly increase every round (it doubles in
    practice).  Raises NoProgressError when iteration cannot start or
    stalls, PrecisionExhaustedError when the residual is certified zero at
    a precision short of the target.
    """
    ring = model.ring
    r = model.r
    t_free = tuple(t_free)
    if len(t_free) != model.param_count:
        raise StructureError(
            f"expected {model.param_count} free components, got {len(t_free)}"
        )
    if seed is None:
        t_bound = [ring.zero(ring.n_work) for _ in range(r)]
    else:
        t_bound = list(seed)
        if len(t_bound) != r:
            raise StructureError(f"seed must have {r} components")

    def residuals():
        point = dict(zip(model.tspace.names, tuple(t_bound) + t_free))
        return point, [gi.eval(point) for gi in model.g]

    point, res = residuals()
    k0 = min(v.order_floor() for v in res)
    if k0 < 1:
        raise NoProgressError(
            f"initial residual has order {k0}; Newton iteration needs positive order"
        )
    k = k0
    iterations = 0
    zero = ring.zero(ring.n_work)
    one = ring.one()
    while k < target:
        if all(v.is_zero() for v in res):
            raise PrecisionExhaustedError(
                f"residual is certified zero only through x^{k - 1}, "
                f"short of the target x^{target}"
            )
        if iterations >= 64:
            raise NoProgressError("Newton did not reach the target within 64 iterations")
        jac = model.t_jac.eval(point)
        det_j = linalg.det(jac, zero, one)
        adj_j = linalg.adjugate(jac, zero, one)
        inv_det = det_j.inv_unit()
        correction = linalg.mat_vec(adj_j, res, zero)
        for i in range(r):
            t_bound[i] = t_bound[i] - correction[i] * inv_det
        iterations += 1
        point, res = residuals()
        k_new = min(v.order_floor() for v in res)
        if k_new <= k:
            raise NoProgressError(f"residual order stalled at x^{k}")
        k = k_new
    # Newton certifies the solution only modulo x^k, so cap the precision
    # of the result there; usually k is the residual's full precision and
    # this is a no-op.
    return HenselResult(tuple(s.truncate(k) for s in t_bound), iterations, k0, k)


def _is_strict(model: SmoothModel, y2) -> bool:
    need = 2 * model.c + 1
    for i in range(model.n):
        diff = y2[i] - model.jet[i]
        o = diff.order()
        if o is not None:
            if o < need:
                return False
        elif diff.prec < need:
            raise PrecisionExhaustedError(
                f"component {i + 1} matches the jet only through x^{diff.prec - 1}; "
                f"strictness needs agreement through x^{need - 1}"
            )
    return True


def _finish(model: SmoothModel, t, hensel: HenselResult) -> LiftResult:
    tpoint = dict(zip(model.tspace.names, t))
    names = model.problem.space.names
    y2 = tuple(model.images[nm].eval(tpoint) for nm in names)
    ypoint = dict(zip(names, y2))
    residual_f = min(f.eval(ypoint).order_floor() for f in model.problem.f_polys)
    residual_i = min(g.eval(ypoint).order_floor() for g in model.problem.ideal_gens)
    eff = min(s.prec for s in y2)
    assert residual_f >= eff, "subsystem residual dipped below the arc's precision"
    assert residual_i >= eff - model.c, "ideal residual dipped below its guaranteed floor"
    strict = _is_strict(model, y2)
    return LiftResult(
        t=tuple(t),
        y2=y2,
        residual_f=residual_f,
        residual_i=residual_i,
        strict=strict,
        newton_iterations=hensel.iterations,
        k0=hensel.k0,
    )


def default_target(model: SmoothModel) -> int:
    """Highest residual order certifiable at the working precision."""
    return model.ring.n_work - 2 * model.c


def make_lift(model: SmoothModel, t_free=None, target: int | None = None) -> LiftResult:
    """Lift the jet to an arc with the given free coordinates.

    Every free component must lie in (x); None means all zero.  The result
    solves the subsystem to order at least eff_prec and the whole ideal to
    order at least eff_prec - c.
    """
    ring = model.ring
    if t_free is None:
        t_free = tuple(ring.zero(ring.n_work) for _ in range(model.param_count))
    t_free = tuple(t_free)
    if len(t_free) != model.param_count:
        raise StructureError(
            f"expected {model.param_count} free components, got {len(t_free)}"
        )
    for u, s in enumerate(t_free, start=1):
        if not isinstance(s, Series) or s.ring != ring:
            raise FieldMismatchError(f"free component {u} is not a series over the model ring")
        if s.order() == 0:
            raise StructureError(
                f"free component {u} has a nonzero constant term; parameters must lie in (x)"
            )
    if target is None:
        target = default_target(model)
    if target < 1:
        raise StructureError(
            f"working precision {ring.n_work} leaves no room above the "
            f"denominator order 2c = {2 * model.c}"
        )
    hr = hensel_solve(model, t_free, target)
    return _finish(model, hr.t_bound + t_free, hr)


def offset_lift(model: SmoothModel, reference: LiftResult, z, target: int | None = None) -> LiftResult:
    """Lift with free coordinates displaced from a strict reference by x^(2c+1) * z.

    The result is again strict and agrees with the reference through x^(2c).
    The z components may be arbitrary series, units included.
    """
    if not reference.strict:
        raise NotStrictError("the reference lift is not strict")
    ring = model.ring
    z = tuple(z)
    if len(z) != model.param_count:
        raise StructureError(f"expected {model.param_count} offset components, got {len(z)}")
    for u, s in enumerate(z, start=1):
        if not isinstance(s, Series) or s.ring != ring:
            raise FieldMismatchError(f"offset component {u} is not a series over the model ring")
    need = 2 * model.c + 1
    shift = ring.monomial(need)
    r = model.r
    t_free = tuple(reference.t[r + u] + shift * z[u] for u in range(model.param_count))
    if target is None:
        target = default_target(model)
    hr = hensel_solve(model, t_free, target, seed=reference.t[:r])
    out = _finish(model, hr.t_bound + t_free, hr)
    assert out.strict, "offset lift lost strictness"
    for i in range(model.n):
        assert (out.y2[i] - reference.y2[i]).order_floor() >= need, (
            "offset lift drifted from the reference inside the congruence window"
        )
    return out


def extract_t(model: SmoothModel, arc) -> tuple:
    """Recover the T coordinates of a strict arc.

    Inverts y'' = y' + d*G(y')*t using H(y')*G(y') = d * Id: the coordinate
    vector is H(y') applied to (y'' - y') / d^2.  Raises NotStrictError when
    the arc deviates from the jet inside the congruence window, and
    IdentityFailedError when the arc is strict but does not solve the
    system, so cannot lie in the family.
    """
    ring = model.ring
    arc = tuple(arc)
    if len(arc) != model.n:
        raise StructureError(f"expected {model.n} components, got {len(arc)}")
    need = 2 * model.c + 1
    diffs = []
    for i in range(model.n):
        s = arc[i]
        if not isinstance(s, Series) or s.ring != ring:
            raise FieldMismatchError(f"arc component {i + 1} is not a series over the model ring")
        diff = s - model.jet[i]
        o = diff.order()
        if o is not None and o < need:
            raise NotStrictError(
                f"arc component {i + 1} deviates from the jet at order {o}, "
                f"inside the congruence window x^{need}",
                index=i + 1,
                order=o,
            )
        if o is None and diff.prec < need:
            raise PrecisionExhaustedError(
                f"arc component {i + 1} is known only through x^{diff.prec - 1}; "
                f"extraction needs agreement decided through x^{need - 1}"
            )
        diffs.append(diff)
    eps = [diffs[model.perm[j]].div_exact(model.d2) for j in range(model.n)]
    t = linalg.mat_vec(model.hy, eps, ring.zero(ring.n_work))
    tpoint = dict(zip(model.tspace.names, t))
    for i, gi in enumerate(model.g, start=1):
        val = gi.eval(tpoint)
        if not val.is_zero():
            raise IdentityFailedError(
                f"the arc does not solve the system: equation {i} evaluates "
                f"to order {val.order()} at the extracted coordinates"
            )
    for i, nm in enumerate(model.problem.space.names):
        if model.images[nm].eval(tpoint) != arc[i]:
            raise IdentityFailedError(
                f"re-substitution does not reproduce arc component {i + 1}"
            )
    return tuple(t)


def extract_params(model: SmoothModel, arc, reference: LiftResult) -> tuple:
    """Recover the offsets z with arc = offset_lift(reference, z), up to precision.

    The free coordinates of the arc must agree with the reference through
    x^(2c); a visible earlier deviation means the arc, although strict, sits
    outside the x^(2c+1)-neighborhood the reference parametrizes, and raises
    OutOfFamilyError.  The recovered z is verified by relifting.
    """
    if not reference.strict:
        raise NotStrictError("the reference lift is not strict")
    t = extract_t(model, arc)
    ring = model.ring
    need = 2 * model.c + 1
    shift = ring.monomial(need)
    z = []
    for u in range(model.param_count):
        j = model.r + u
        diff = t[j] - reference.t[j]
        o = diff.order()
        if o is not None and o < need:
            raise OutOfFamilyError(
                f"free coordinate {u + 1} differs from the reference at order {o}, "
                f"inside the congruence window x^{need}",
                index=u + 1,
                order=o,
            )
        if o is None and diff.prec < need:
            raise PrecisionExhaustedError(
                f"free coordinate {u + 1} is known only through x^{diff.prec - 1}; "
                f"offset extraction needs x^{need - 1}"
            )
        z.append(diff.div_exact(shift))
    z = tuple(z)
    relift = offset_lift(model, reference, z)
    eff = min(s.prec for s in arc)
    floor = max(1, eff - (4 * model.c + 1))
    for i in range(model.n):
        got = (arc[i] - relift.y2[i]).order_floor()
        assert got >= floor, (
            f"relift from the recovered offsets matches component {i + 1} only "
            f"through x^{got - 1}, short of the guaranteed x^{floor - 1}"
        )
    return z


def _violation(model: SmoothModel, lift: LiftResult) -> list:
    """Coefficients inside the congruence window where the arc leaves the jet."""
    need = 2 * model.c + 1
    vec = []
    for i in range(model.n):
        diff = lift.y2[i] - model.jet[i]
        for k in range(need):
            vec.append(diff.coefficient(k))
    return vec


def _lowest_violated(model: SmoothModel, vec) -> int | None:
    need = 2 * model.c + 1
    field = model.ring.field
    lowest = None
    for idx, val in enumerate(vec):
        if val != field.zero:
            k = idx % need
            if lowest is None or k < lowest:
                lowest = k
    return lowest


def find_strict_reference(model: SmoothModel, search_depth: int = 8) -> LiftResult | None:
    """Search for a strict lift: zero free coordinates first, then greedy repair.

    Layer by layer (x^1 up to x^search_depth) the search probes each free
    direction with a finite difference, solves the resulting affine system
    for the violation inside the congruence window, and keeps the solution
    only when the lowest violated order strictly improves.  Returns None
    when the budget runs out, which is a best-effort answer, not a proof
    that no strict lift exists.
    """
    ring = model.ring
    nfree = model.param_count
    zeros = tuple(ring.zero(ring.n_work) for _ in range(nfree))
    base = make_lift(model, zeros)
    if base.strict:
        return base
    if nfree == 0:
        return None
    field = ring.field
    t_free = list(zeros)
    vbase = _violation(model, base)
    lowest = _lowest_violated(model, vbase)
    for layer in range(1, search_depth + 1):
        cols = []
        for u in range(nfree):
            probe = list(t_free)
            probe[u] = probe[u] + ring.monomial(layer)
            v_u = _violation(model, make_lift(model, tuple(probe)))
            cols.append([field.add(a, field.neg(b)) for a, b in zip(v_u, vbase)])
        rows = [[cols[u][row] for u in range(nfree)] for row in range(len(vbase))]
        rhs = [field.neg(v) for v in vbase]
        alpha = linalg.solve_linear(field, rows, rhs)
        if alpha is None or all(a == field.zero for a in alpha):
            continue
        cand_free = list(t_free)
        for u in range(nfree):
            if alpha[u] != field.zero:
                cand_free[u] = cand_free[u] + ring.monomial(layer, alpha[u])
        cand = make_lift(model, tuple(cand_free))
        if cand.strict:
            return cand
        v_new = _violation(model, cand)
        new_lowest = _lowest_violated(model, v_new)
        if new_lowest is not None and new_lowest > lowest:
            t_free = cand_free
            vbase = v_new
            lowest = new_lowest
    return None


@dataclass(frozen=True)
class JetSet:
    """All coefficient vectors mod x^m that extend the jet and kill the ideal."""

    p: int
    n: int
    m: int
    keys: frozenset
    ordered: tuple

    @property
    def count(self) -> int:
        return len(self.ordered)

    def contains(self, arc) -> bool:
        arc = tuple(arc)
        if len(arc) != self.n:
            raise StructureError(f"expected {self.n} components, got {len(arc)}")
        key = []
        for i, s in enumerate(arc, start=1):
            if s.ring.field.p != self.p:
                raise FieldMismatchError(
                    f"arc component {i} is not over the field of {self.p} elements"
                )
            if s.prec < self.m:
                raise PrecisionExhaustedError(
                    f"arc component {i} is known only through x^{s.prec - 1}; "
                    f"membership mod x^{self.m} is undecidable"
                )
            key.append(tuple(int(s.coeff_at(k)) for k in range(self.m)))
        return tuple(key) in self.keys


def _conv(a, b, p):
    """Truncated Cauchy product of row batches, entries reduced mod p."""
    m = a.shape[1]
    out = np.zeros_like(a)
    for sh in range(m):
        out[:, sh:] += a[:, sh : sh + 1] * b[:, : m - sh]
    return out % p


_ENUM_BUDGET = 1 << 24


def oracle_enumerate(problem: Problem, m: int, chunk: int = 1 << 16) -> JetSet:
    """Brute force every arc mod x^m over F_p extending the jet mod x^(2c+1).

    Candidates fix the jet's coefficients below 2c+1 and range over all of
    F_p in each higher slot; one survives when every ideal generator
    vanishes mod x^m.  The candidate count p^(n*(m-2c-1)) must stay within
    2^24.  Exact, exhaustive, and independent of the model construction,
    which is the point: it cross-checks the lifting machinery from below.
    """
    field = problem.ring.field
    if field.p is None:
        raise StructureError("brute force enumeration needs a finite coefficient field")
    p = field.p
    need = 2 * problem.c + 1
    if m < need:
        raise StructureError(
            f"window x^{m} is shorter than the congruence window x^{need}"
        )
    width = m - need
    slots = problem.n * width
    total = p**slots
    if total > _ENUM_BUDGET:
        raise BudgetExceededError(
            f"enumerating {total} candidates exceeds the budget of {_ENUM_BUDGET}"
        )
    base = [[int(y.coeff_at(k)) for k in range(need)] for y in problem.jet]

    if slots == 0:
        point = problem.jet_point()
        ok = all(g.eval(point).order_floor() >= m for g in problem.ideal_gens)
        ordered = (tuple(tuple(b) for b in base),) if ok else ()
        return JetSet(p=p, n=problem.n, m=m, keys=frozenset(ordered), ordered=ordered)

    terms_per_gen = []
    for j, gen in enumerate(problem.ideal_gens, start=1):
        terms = []
        for exps, coeff in gen.terms.items():
            if coeff.prec < m:
                raise PrecisionExhaustedError(
                    f"a coefficient of generator {j} is known only through "
                    f"x^{coeff.prec - 1}, short of the window x^{m}"
                )
            arr = np.array([int(coeff.coeff_at(k)) for k in range(m)], dtype=np.int64)
            terms.append((exps, arr))
        terms_per_gen.append(terms)

    found = []
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        cnt = idx.shape[0]
        comps = np.zeros((problem.n, cnt, m), dtype=np.int64)
        for i in range(problem.n):
            comps[i, :, :need] = np.array(base[i], dtype=np.int64)
        for s in range(slots):
            i = s // width
            k = need + (s % width)
            comps[i, :, k] = (idx // (p**s)) % p
        powers = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = comps[i] if e == 1 else _conv(power(i, e - 1), comps[i], p)
            return powers[key]

        keep = np.ones(cnt, dtype=bool)
        for terms in terms_per_gen:
            acc = np.zeros((cnt, m), dtype=np.int64)
            for exps, arr in terms:
                term = np.broadcast_to(arr, (cnt, m))
                for i, e in enumerate(exps):
                    if e:
                        term = _conv(term, power(i, e), p)
                acc = acc + term
            acc %= p
            keep &= ~acc.any(axis=1)
        for row in np.nonzero(keep)[0]:
            key = tuple(tuple(int(v) for v in comps[i, row]) for i in range(problem.n))
            found.append(key)
    ordered = tuple(sorted(found))
    return JetSet(p=p, n=problem.n, m=m, keys=frozenset(ordered), ordered=ordered)
