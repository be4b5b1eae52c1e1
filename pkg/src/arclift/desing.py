"""Validation of a certified jet problem and construction of its smooth model.

The input is a polynomial system over the local ring k[x]_(x): generators of
an ideal in the Y variables, a selected subsystem f of r of them, r columns
of the Jacobian whose minor M is to witness generic smoothness, a multiplier
certificate (a polynomial N with cofactors expressing N times each generator
inside (f)), a congruence level c, and a jet y' solving the system modulo
x^(2c+1).

From validated input the construction produces a system g = a + T + Q in new
variables T1..Tn that is smooth by design: the bound block T1..Tr has unit
Jacobian at the origin, the free block T(r+1)..Tn parametrizes solutions.
Arcs through y' correspond to series solutions of g; that correspondence is
the business of the arcs module.  The pieces are:

    e        visible order of (N*M)(y'); must satisfy e < c
    N_norm   x^(c-e) * N, so that d below has order exactly c
    P        N_norm * M
    d        P(y'), the localizing denominator
    H        Jacobian of f with minor columns permuted first, bordered
             below by (0 | Id) so that det(H) = M
    G        N_norm * adjugate(H), satisfying GH = HG = P * Id
    a        f(y') / d^2, componentwise, each of positive order
    Q        the quadratic-and-higher remainder of f(y' + d*G(y')*T) / d^2
    loc_s    det(Id_r + dQ/dT over the bound block), constant term 1
    loc_s'   P(y' + d*G(y')*T) / d, constant term 1

Everything is exact; effective precision flows through the series layer, so
every certified statement about the model carries the precision at which it
was actually checked.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import (
    IdentityFailedError,
    OrderTooHighError,
    OrderViolationError,
    StructureError,
    ValidationError,
)
from .polyring import Poly, PolyMatrix, VarSpace, jacobian
from .prng import SplitMix64, draw_series
from .ring import Series, SeriesRing


@dataclass(frozen=True)
class Certificate:
    """Multiplier N and cofactors with N * gen_j = sum_k cofactors[j][k] * f_k."""

    n_poly: Poly
    cofactors: tuple

    def __post_init__(self):
        object.__setattr__(self, "cofactors", tuple(tuple(row) for row in self.cofactors))

    def scale(self, s: Series) -> Certificate:
        return Certificate(
            self.n_poly.scale(s),
            tuple(tuple(p.scale(s) for p in row) for row in self.cofactors),
        )


def identity_certificate(ring: SeriesRing, space: VarSpace, count: int) -> Certificate:
    """The trivial certificate N = 1 for a system whose f covers every generator."""
    one = Poly.constant(ring, space, 1)
    zero = Poly.zero(ring, space)
    rows = tuple(tuple(one if i == j else zero for j in range(count)) for i in range(count))
    return Certificate(one, rows)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    e: int | None

    @property
    def ok(self) -> bool:
        return all(ch.ok for ch in self.checks)

    def failures(self):
        return tuple(ch for ch in self.checks if not ch.ok)


@dataclass(frozen=True)
class Problem:
    """A complete, structurally checked input; mathematical checks live in validate_problem."""

    ring: SeriesRing
    n: int
    ideal_gens: tuple
    f_idx: tuple
    minor_cols: tuple
    certificate: Certificate
    c: int
    jet: tuple
    mode: str = "dvr"

    def __post_init__(self):
        object.__setattr__(self, "ideal_gens", tuple(self.ideal_gens))
        object.__setattr__(self, "f_idx", tuple(self.f_idx))
        object.__setattr__(self, "minor_cols", tuple(self.minor_cols))
        object.__setattr__(self, "jet", tuple(self.jet))
        if not isinstance(self.ring, SeriesRing):
            raise StructureError("problem needs a SeriesRing")
        if not isinstance(self.n, int) or self.n < 1:
            raise StructureError(f"variable count must be a positive integer, got {self.n!r}")
        space = self.space
        if not self.ideal_gens:
            raise StructureError("no ideal generators")
        for j, g in enumerate(self.ideal_gens, start=1):
            if not isinstance(g, Poly) or g.ring != self.ring or g.space != space:
                raise StructureError(f"generator {j} is not a polynomial over this problem's ring")
        m = len(self.ideal_gens)
        r = len(self.f_idx)
        if r < 1 or r > self.n:
            raise StructureError(f"subsystem size must be between 1 and n={self.n}, got {r}")
        if len(set(self.f_idx)) != r or any(not (1 <= i <= m) for i in self.f_idx):
            raise StructureError(f"f indices must be distinct members of 1..{m}")
        if len(self.minor_cols) != r:
            raise StructureError(f"need exactly {r} minor columns, got {len(self.minor_cols)}")
        if len(set(self.minor_cols)) != r or any(not (1 <= j <= self.n) for j in self.minor_cols):
            raise StructureError(f"minor columns must be distinct members of 1..{self.n}")
        cert = self.certificate
        np = cert.n_poly
        if not isinstance(np, Poly) or np.ring != self.ring or np.space != space:
            raise StructureError("certificate multiplier is not a polynomial over this ring")
        if len(cert.cofactors) != m or any(len(row) != r for row in cert.cofactors):
            raise StructureError(f"cofactor matrix must be {m}x{r}")
        for row in cert.cofactors:
            for p in row:
                if not isinstance(p, Poly) or p.ring != self.ring or p.space != space:
                    raise StructureError("cofactor entries must be polynomials over this ring")
        if not isinstance(self.c, int) or self.c < 1:
            raise StructureError(f"congruence level c must be a positive integer, got {self.c!r}")
        if len(self.jet) != self.n:
            raise StructureError(f"jet must have {self.n} components, got {len(self.jet)}")
        need = 2 * self.c + 1
        for i, y in enumerate(self.jet, start=1):
            if not isinstance(y, Series) or y.ring != self.ring:
                raise StructureError(f"jet component {i} is not a series of this ring")
            if y.prec < need:
                raise StructureError(
                    f"jet component {i} has precision {y.prec}, need at least 2c+1 = {need}"
                )
        if self.mode not in ("dvr", "variety"):
            raise StructureError(f"mode must be 'dvr' or 'variety', got {self.mode!r}")
        if self.mode == "variety":
            for j, g in enumerate(self.ideal_gens, start=1):
                for coeff in g.terms.values():
                    if len(coeff.coeffs) > 1:
                        raise StructureError(
                            f"variety mode forbids x in the system: generator {j} "
                            "has an x-dependent coefficient"
                        )

    @property
    def space(self) -> VarSpace:
        return VarSpace.ys(self.n)

    @property
    def r(self) -> int:
        return len(self.f_idx)

    @property
    def f_polys(self) -> tuple:
        return tuple(self.ideal_gens[i - 1] for i in self.f_idx)

    def jet_point(self) -> dict:
        return {nm: y for nm, y in zip(self.space.names, self.jet)}


def make_problem(
    ring: SeriesRing,
    n: int,
    ideal_gens,
    f_idx,
    minor_cols,
    jet,
    certificate: Certificate | None = None,
    c: int | None = None,
    mode: str = "dvr",
) -> Problem:
    """Assemble a Problem, filling in the trivial certificate and minimal c."""
    ideal_gens = tuple(ideal_gens)
    f_idx = tuple(f_idx)
    if certificate is None:
        if sorted(f_idx) != list(range(1, len(ideal_gens) + 1)):
            raise StructureError(
                "a certificate is required when the subsystem f does not cover "
                "every ideal generator"
            )
        certificate = identity_certificate(ring, VarSpace.ys(n), len(ideal_gens))
    if c is None:
        probe = Problem(ring, n, ideal_gens, f_idx, tuple(minor_cols), certificate, 1, tuple(jet), mode)
        v = (certificate.n_poly * minor_poly(probe)).eval(probe.jet_point())
        e = v.order()
        if e is None:
            raise StructureError(
                "cannot infer c: multiplier times minor vanishes at the jet "
                f"to the checked precision x^{v.prec}"
            )
        c = e + 1
    return Problem(ring, n, ideal_gens, f_idx, tuple(minor_cols), certificate, c, tuple(jet), mode)


def minor_poly(problem: Problem) -> Poly:
    """Determinant of the selected r x r Jacobian block, columns in the listed order."""
    names = tuple(problem.space.names[j - 1] for j in problem.minor_cols)
    return jacobian(problem.f_polys, names).det()


def validate_problem(problem: Problem) -> ValidationReport:
    """Run the three mathematical admission checks; failures are reported, not raised."""
    checks = []
    f_polys = problem.f_polys

    ok = True
    detail = "multiplier identity holds for every generator"
    for j, gen in enumerate(problem.ideal_gens, start=1):
        lhs = problem.certificate.n_poly * gen
        rhs = Poly.zero(problem.ring, problem.space)
        for cof, f in zip(problem.certificate.cofactors[j - 1], f_polys):
            rhs = rhs + cof * f
        if lhs != rhs:
            ok = False
            detail = f"N * generator {j} does not match its cofactor combination"
            break
    checks.append(CheckResult("certificate-cofactors", ok, detail))

    need = 2 * problem.c + 1
    point = problem.jet_point()
    ok = True
    detail = f"every generator vanishes at the jet through x^{need - 1}"
    for j, gen in enumerate(problem.ideal_gens, start=1):
        o = gen.eval(point).order_floor()
        if o < need:
            ok = False
            detail = f"generator {j} has order {o} at the jet, below 2c+1 = {need}"
            break
    checks.append(CheckResult("jet-kills-ideal", ok, detail))

    p_val = (problem.certificate.n_poly * minor_poly(problem)).eval(point)
    window = p_val.truncate(min(need, p_val.prec))
    e = window.order()
    if e is None:
        checks.append(
            CheckResult(
                "minor-order",
                False,
                "multiplier times minor vanishes at the jet through "
                f"x^{window.prec - 1}; the construction needs a visible order below c = {problem.c}",
            )
        )
    elif e >= problem.c:
        checks.append(
            CheckResult("minor-order", False, f"e = {e} is not below c = {problem.c}")
        )
    else:
        checks.append(CheckResult("minor-order", True, f"e = {e} < c = {problem.c}"))
    return ValidationReport(tuple(checks), e)


@dataclass(frozen=True)
class NormalizedCertificate:
    n_norm: Poly
    p_poly: Poly
    d: Series
    cofactors: tuple


def normalize_certificate(problem: Problem, e: int | None) -> NormalizedCertificate:
    """Rescale the multiplier by x^(c-e) so the denominator d gets order exactly c."""
    if e is None or e >= problem.c:
        raise OrderTooHighError(
            f"normalization needs e < c, got e = {e}, c = {problem.c}"
        )
    shift = problem.ring.monomial(problem.c - e)
    scaled = problem.certificate.scale(shift)
    n_norm = scaled.n_poly
    p_poly = n_norm * minor_poly(problem)
    d = p_poly.eval(problem.jet_point())
    if d.order() != problem.c:
        raise IdentityFailedError(
            f"normalized denominator has order {d.order()}, expected c = {problem.c}"
        )
    return NormalizedCertificate(n_norm, p_poly, d, scaled.cofactors)


@dataclass(frozen=True)
class Border:
    h_mat: PolyMatrix
    perm: tuple


def build_border(problem: Problem) -> Border:
    """Jacobian with minor columns first, bordered by (0 | Id); det equals the minor."""
    n, r = problem.n, problem.r
    lead = tuple(j - 1 for j in problem.minor_cols)
    rest = tuple(j for j in range(n) if j not in set(lead))
    perm = lead + rest
    names = problem.space.names
    jac = jacobian(problem.f_polys, tuple(names[j] for j in perm))
    one = Poly.constant(problem.ring, problem.space, 1)
    zero = Poly.zero(problem.ring, problem.space)
    rows = [list(row) for row in jac.rows]
    for i in range(r, n):
        rows.append([one if j == i else zero for j in range(n)])
    h_mat = PolyMatrix(rows)
    if h_mat.det() != minor_poly(problem):
        raise IdentityFailedError("border determinant does not equal the selected minor")
    return Border(h_mat, perm)


def compute_g(h_mat: PolyMatrix, n_norm: Poly, p_poly: Poly) -> PolyMatrix:
    """G = N_norm * adjugate(H); checks GH = HG = P * Id exactly."""
    n = h_mat.shape[0]
    g_mat = h_mat.adjugate().scale(n_norm)
    p_id = PolyMatrix.identity(h_mat.ring, h_mat.space, n).scale(p_poly)
    if g_mat.mul(h_mat) != p_id or h_mat.mul(g_mat) != p_id:
        raise IdentityFailedError("GH = HG = P * Id failed")
    return g_mat


def _eval_matrix(mat: PolyMatrix, point: dict) -> tuple:
    return tuple(tuple(row) for row in mat.eval(point))


def substitution_images(problem: Problem, dgy: tuple, perm: tuple, tspace: VarSpace) -> dict:
    """The map Y_perm[j] -> y'_perm[j] + sum_k dgy[j][k] * T_k."""
    ring = problem.ring
    names = problem.space.names
    images = {}
    for j in range(problem.n):
        img = Poly.constant(ring, tspace, problem.jet[perm[j]])
        for k in range(problem.n):
            img = img + Poly.variable(ring, tspace, tspace.names[k]).scale(dgy[j][k])
        images[names[perm[j]]] = img
    return images


def taylor_decompose(problem: Problem, d: Series, dgy: tuple, perm: tuple, tspace: VarSpace):
    """Split f(y' + d*G(y')*T) into f(y') + d^2 * (a + T + Q) with Q of T-degree >= 2."""
    ring = problem.ring
    d2 = d * d
    point = problem.jet_point()
    images = substitution_images(problem, dgy, perm, tspace)
    a = []
    q = []
    for i, f in enumerate(problem.f_polys, start=1):
        fy = f.eval(point)
        ai = fy.div_exact(d2)
        if ai.order() == 0:
            raise OrderViolationError(
                f"f component {i} gives a unit after division by d^2; "
                "the jet does not solve the system deeply enough"
            )
        full = f.subst(images, tspace)
        num = full - Poly.constant(ring, tspace, full.constant_term())
        reduced = Poly._make(
            ring, tspace, {exps: coeff.div_exact(d2) for exps, coeff in num.terms.items()}
        )
        ti = Poly.variable(ring, tspace, tspace.names[i - 1])
        qi = reduced - ti
        for exps, coeff in qi.terms.items():
            if sum(exps) < 2 and not coeff.is_zero():
                raise IdentityFailedError(
                    f"Taylor remainder of f component {i} has a visible term of "
                    f"T-degree {sum(exps)}"
                )
        a.append(ai)
        q.append(qi)
    return tuple(a), tuple(q), images


@dataclass(frozen=True, eq=False)
class SmoothModel:
    """Everything the construction produces, immutable and safe to share."""

    problem: Problem
    e: int
    perm: tuple
    m_poly: Poly
    n_norm: Poly
    p_poly: Poly
    cofactors: tuple
    d: Series
    d2: Series
    h_mat: PolyMatrix
    g_mat: PolyMatrix
    hy: tuple
    gy: tuple
    dgy: tuple
    images: dict
    a: tuple
    q: tuple
    g: tuple
    loc_s: Poly
    loc_s_prime: Poly
    tspace: VarSpace
    t_jac: PolyMatrix

    @property
    def ring(self) -> SeriesRing:
        return self.problem.ring

    @property
    def jet(self) -> tuple:
        return self.problem.jet

    @property
    def n(self) -> int:
        return self.problem.n

    @property
    def r(self) -> int:
        return self.problem.r

    @property
    def c(self) -> int:
        return self.problem.c

    @property
    def param_count(self) -> int:
        return self.n - self.r

    @property
    def free_idx(self) -> tuple:
        """1-based indices of the free T coordinates."""
        return tuple(range(self.r + 1, self.n + 1))


def _unit_constant(poly: Poly) -> bool:
    const = poly.constant_term()
    return const.order() == 0 and const.coeff_at(0) == poly.ring.field.one


def build_model(problem: Problem) -> SmoothModel:
    """Validate, then run the whole construction; raises on any failed check."""
    report = validate_problem(problem)
    if not report.ok:
        names = ", ".join(ch.name for ch in report.failures())
        raise ValidationError(f"validation failed: {names}", report)
    e = report.e
    norm = normalize_certificate(problem, e)
    border = build_border(problem)
    g_mat = compute_g(border.h_mat, norm.n_norm, norm.p_poly)

    point = problem.jet_point()
    hy = _eval_matrix(border.h_mat, point)
    gy = _eval_matrix(g_mat, point)
    d = norm.d
    d2 = d * d
    dgy = tuple(tuple(d * entry for entry in row) for row in gy)

    tspace = VarSpace.ts(problem.n)
    a, q, images = taylor_decompose(problem, d, dgy, border.perm, tspace)

    g = []
    for i in range(problem.r):
        ti = Poly.variable(problem.ring, tspace, tspace.names[i])
        g.append(Poly.constant(problem.ring, tspace, a[i]) + ti + q[i])
    g = tuple(g)

    r = problem.r
    bound_names = tspace.names[:r]
    jac_q = [[q[i].diff(nm) for nm in bound_names] for i in range(r)]
    ident = PolyMatrix.identity(problem.ring, tspace, r)
    t_jac = PolyMatrix(
        [[ident.rows[i][k] + jac_q[i][k] for k in range(r)] for i in range(r)]
    )
    loc_s = t_jac.det()
    if not _unit_constant(loc_s):
        raise IdentityFailedError("localization unit from the bound Jacobian lacks constant term 1")

    p_sub = norm.p_poly.subst(images, tspace)
    loc_s_prime = Poly._make(
        problem.ring,
        tspace,
        {exps: coeff.div_exact(d) for exps, coeff in p_sub.terms.items()},
    )
    if not _unit_constant(loc_s_prime):
        raise IdentityFailedError("localization unit from P lacks constant term 1")

    return SmoothModel(
        problem=problem,
        e=e,
        perm=border.perm,
        m_poly=minor_poly(problem),
        n_norm=norm.n_norm,
        p_poly=norm.p_poly,
        cofactors=norm.cofactors,
        d=d,
        d2=d2,
        h_mat=border.h_mat,
        g_mat=g_mat,
        hy=hy,
        gy=gy,
        dgy=dgy,
        images=images,
        a=a,
        q=q,
        g=g,
        loc_s=loc_s,
        loc_s_prime=loc_s_prime,
        tspace=tspace,
        t_jac=t_jac,
    )


_VERIFY_SEED = 0x5EED0FA0


def verify_model(model: SmoothModel) -> ValidationReport:
    """Re-check every identity the model claims, from its inputs, two ways where possible."""
    problem = model.problem
    ring = problem.ring
    checks = []

    ok = True
    detail = "scaled multiplier identity holds for every generator"
    for j, gen in enumerate(problem.ideal_gens, start=1):
        lhs = model.n_norm * gen
        rhs = Poly.zero(ring, problem.space)
        for cof, f in zip(model.cofactors[j - 1], problem.f_polys):
            rhs = rhs + cof * f
        if lhs != rhs:
            ok = False
            detail = f"scaled identity fails for generator {j}"
            break
    checks.append(CheckResult("certificate-normalized", ok, detail))

    n = problem.n
    p_id = PolyMatrix.identity(ring, problem.space, n).scale(model.p_poly)
    ok = model.g_mat.mul(model.h_mat) == p_id and model.h_mat.mul(model.g_mat) == p_id
    checks.append(
        CheckResult("matrix-identity", ok, "GH = HG = P * Id" if ok else "GH = HG = P * Id failed")
    )

    ok = model.h_mat.det() == model.m_poly
    checks.append(
        CheckResult(
            "border-determinant", ok, "det(H) equals the minor" if ok else "det(H) != minor"
        )
    )

    ok = model.d.order() == problem.c
    checks.append(
        CheckResult(
            "d-order",
            ok,
            f"ord(d) = {model.d.order()}"
            + ("" if ok else f", expected c = {problem.c}"),
        )
    )

    point = problem.jet_point()
    hy = _eval_matrix(model.h_mat, point)
    gy = _eval_matrix(model.g_mat, point)
    dgy = tuple(tuple(model.d * entry for entry in row) for row in gy)
    ok = hy == model.hy and gy == model.gy and dgy == model.dgy
    checks.append(
        CheckResult(
            "evaluation-consistency",
            ok,
            "H(y'), G(y'), d*G(y') match the stored evaluations"
            if ok
            else "a stored matrix evaluation does not match recomputation",
        )
    )

    images = substitution_images(problem, dgy, model.perm, model.tspace)
    ok = True
    detail = "f(y' + d*G(y')*T) = f(y') + d^2 * g, by polynomial identity and at random points"
    rng = SplitMix64(_VERIFY_SEED)
    sample_points = []
    for _ in range(3):
        sample_points.append(
            {nm: draw_series(rng, ring, 1, 4) for nm in model.tspace.names}
        )
    for i, f in enumerate(problem.f_polys):
        t_i = Poly.variable(ring, model.tspace, model.tspace.names[i])
        a_i = Poly.constant(ring, model.tspace, model.a[i])
        if model.g[i] != a_i + t_i + model.q[i]:
            ok = False
            detail = f"g component {i + 1} is not a_{i + 1} + T_{i + 1} + Q_{i + 1}"
            break
        lhs = f.subst(images, model.tspace)
        rhs = model.g[i].scale(model.d2) + Poly.constant(
            ring, model.tspace, f.eval(point) - model.a[i] * model.d2
        )
        if lhs != rhs:
            ok = False
            detail = f"Taylor identity fails as polynomials for f component {i + 1}"
            break
        for pt in sample_points:
            left = lhs.eval(pt)
            right = f.eval(point) + (model.g[i].eval(pt) - model.a[i]) * model.d2
            if left != right:
                ok = False
                detail = f"Taylor identity fails at a sample point for f component {i + 1}"
                break
        if not ok:
            break
    checks.append(CheckResult("taylor-identity", ok, detail))

    ok = True
    detail = "every visible term of Q has T-degree >= 2"
    for i, qi in enumerate(model.q, start=1):
        for exps, coeff in qi.terms.items():
            if sum(exps) < 2 and not coeff.is_zero():
                ok = False
                detail = f"Q component {i} has a visible term of T-degree {sum(exps)}"
                break
        if not ok:
            break
    checks.append(CheckResult("q-degree", ok, detail))

    ok = True
    detail = "every a component has order >= 1"
    for i, ai in enumerate(model.a, start=1):
        if ai.order_floor() < 1:
            ok = False
            detail = f"a component {i} has order 0"
            break
    checks.append(CheckResult("a-order", ok, detail))

    ok = _unit_constant(model.loc_s) and _unit_constant(model.loc_s_prime)
    checks.append(
        CheckResult(
            "localization-units",
            ok,
            "both localizing elements have constant term 1"
            if ok
            else "a localizing element lacks constant term 1",
        )
    )

    return ValidationReport(tuple(checks), model.e)
