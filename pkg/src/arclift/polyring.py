"""Polynomials in model variables with truncated series coefficients.

A Poly represents an element of k[x]_(x)[Y1, ..., Yn] (or of the tangent
variables T1, ..., Tn) as a finite map from exponent vectors to Series
coefficients.  A coefficient that is certified zero at the full working
precision is dropped from the map; a certified-zero coefficient at lower
precision is kept, because it records how far a cancellation was actually
checked and must keep capping downstream claims.

Text input follows a small grammar shared by polynomials and series:

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := var ('^' nat)?
    coeff  := int | int '/' int

where var is 'x' or one of the declared variable names, whitespace is
ignored, and juxtaposition is not multiplication ('2x' is rejected, write
'2*x').  Series text uses the same grammar restricted to the variable x and
may end with a '+ O(x^k)' marker fixing the effective precision; 'O(x^k)'
alone denotes the zero series at precision k.  Terms at or beyond a stated
precision are truncated away.

Rendering is canonical: terms are ordered by ascending lexicographic
comparison of the reversed exponent vector, then by ascending x power, so
printed polynomials are stable across runs and factor as valid input for
the same grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    FieldMismatchError,
    MissingVariableError,
    NotAUnitError,
    ParseError,
    StructureError,
    UnknownVariableError,
)
from .ring import Series, SeriesRing
from . import linalg

_TOKEN_RE = re.compile(r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z]\w*)|(?P<op>[-+*/^()])")

_NAME_RE = re.compile(r"[A-Za-z]\w*")


def _tokenize(text: str):
    tokens = []
    pos = 0
    end = len(text)
    while pos < end:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive-descent parser for the shared poly/series grammar."""

    def __init__(self, text: str, ring: SeriesRing, names, series_mode: bool):
        self.ring = ring
        self.field = ring.field
        self.names = tuple(names)
        self.series_mode = series_mode
        self.tokens = _tokenize(text)
        self.i = 0
        self.end_pos = len(text)
        self.o_prec = None

    def _peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return (None, None, self.end_pos)

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _expect_op(self, op: str):
        kind, val, pos = self._take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> dict:
        terms = {}
        kind, val, pos = self._peek()
        if kind is None:
            raise ParseError("empty input", 0)
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            self._take()
        self._term(terms, sign)
        while True:
            kind, val, pos = self._peek()
            if kind is None:
                return terms
            if kind != "op" or val not in "+-":
                raise ParseError("expected '+' or '-' between terms", pos)
            if self.o_prec is not None:
                raise ParseError("O(...) must be the final term", pos)
            self._take()
            self._term(terms, -1 if val == "-" else 1)

    def _term(self, terms: dict, sign: int):
        kind, val, pos = self._peek()
        if kind == "int":
            scalar = self._coeff()
        elif kind == "name":
            if self.series_mode and val == "O":
                if sign < 0:
                    raise ParseError("O(...) cannot be subtracted", pos)
                self._take()
                self._o_tail(pos)
                return
            scalar = self.field.one
        else:
            raise ParseError("expected a coefficient or a variable", pos)
        xpow = 0
        exps = [0] * len(self.names)
        if kind == "name":
            idx, e = self._factor()
            if idx < 0:
                xpow += e
            else:
                exps[idx] += e
        while True:
            k2, v2, p2 = self._peek()
            if k2 != "op" or v2 != "*":
                break
            self._take()
            k3, v3, p3 = self._peek()
            if k3 != "name":
                raise ParseError("expected a variable after '*'", p3)
            idx, e = self._factor()
            if idx < 0:
                xpow += e
            else:
                exps[idx] += e
        if sign < 0:
            scalar = self.field.neg(scalar)
        mono = self.ring.monomial(xpow, scalar) if xpow < self.ring.n_work else self.ring.zero()
        key = tuple(exps)
        prev = terms.get(key)
        terms[key] = mono if prev is None else prev + mono

    def _coeff(self):
        kind, val, pos = self._take()
        num = int(val)
        k2, v2, p2 = self._peek()
        if k2 == "op" and v2 == "/":
            self._take()
            k3, v3, p3 = self._take()
            if k3 != "int":
                raise ParseError("expected an integer denominator", p3)
            try:
                return self.field.from_pair(num, int(v3))
            except NotAUnitError as exc:
                raise ParseError(str(exc), pos) from None
        return self.field.from_int(num)

    def _factor(self):
        kind, val, pos = self._take()
        if val == "x":
            idx = -1
        else:
            if val in self.names:
                idx = self.names.index(val)
            else:
                raise UnknownVariableError(f"unknown variable {val!r}", pos)
        e = 1
        k2, v2, p2 = self._peek()
        if k2 == "op" and v2 == "^":
            self._take()
            k3, v3, p3 = self._take()
            if k3 != "int":
                raise ParseError("expected a nonnegative integer exponent", p3)
            e = int(v3)
        return idx, e

    def _o_tail(self, pos: int):
        self._expect_op("(")
        kind, val, p = self._take()
        if kind != "name" or val != "x":
            raise ParseError("expected x inside O(...)", p)
        k = 1
        k2, v2, p2 = self._peek()
        if k2 == "op" and v2 == "^":
            self._take()
            k3, v3, p3 = self._take()
            if k3 != "int":
                raise ParseError("expected an integer exponent in O(...)", p3)
            k = int(v3)
        self._expect_op(")")
        if k < 1:
            raise ParseError("precision in O(...) must be at least 1", pos)
        self.o_prec = k


def parse_series(text: str, ring: SeriesRing) -> Series:
    parser = _Parser(text, ring, (), True)
    terms = parser.parse()
    body = terms.get((), ring.zero())
    if parser.o_prec is None:
        return body
    prec = min(parser.o_prec, ring.n_work)
    return Series._make(ring, list(body.coeffs[:prec]), prec)


def parse_poly(text: str, ring: SeriesRing, space: VarSpace) -> Poly:
    parser = _Parser(text, ring, space.names, False)
    return Poly._make(ring, space, parser.parse())


@dataclass(frozen=True)
class VarSpace:
    """An ordered tuple of polynomial variable names (x is always implicit)."""

    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        seen = set()
        for nm in self.names:
            if not isinstance(nm, str) or not _NAME_RE.fullmatch(nm) or nm in ("x", "O"):
                raise StructureError(f"bad variable name {nm!r}")
            if nm in seen:
                raise StructureError(f"duplicate variable name {nm!r}")
            seen.add(nm)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise MissingVariableError(f"variable {name!r} is not in this space") from None

    @staticmethod
    def ys(n: int) -> VarSpace:
        return VarSpace(tuple(f"Y{i + 1}" for i in range(n)))

    @staticmethod
    def ts(n: int) -> VarSpace:
        return VarSpace(tuple(f"T{i + 1}" for i in range(n)))


class Poly:
    """A polynomial with Series coefficients, immutable after construction."""

    __slots__ = ("ring", "space", "terms")

    def __init__(self, *args):
        raise TypeError("use Poly.zero/constant/variable or parse_poly")

    @classmethod
    def _make(cls, ring: SeriesRing, space: VarSpace, terms: dict) -> Poly:
        kept = {}
        width = space.dim
        for exps, coeff in terms.items():
            if len(exps) != width:
                raise StructureError("exponent vector width does not match the variable space")
            if coeff.is_zero() and coeff.prec >= ring.n_work:
                continue
            kept[exps] = coeff
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "space", space)
        object.__setattr__(obj, "terms", kept)
        return obj

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(ring: SeriesRing, space: VarSpace) -> Poly:
        return Poly._make(ring, space, {})

    @staticmethod
    def constant(ring: SeriesRing, space: VarSpace, value) -> Poly:
        coeff = value if isinstance(value, Series) else ring.scalar(value)
        return Poly._make(ring, space, {(0,) * space.dim: coeff})

    @staticmethod
    def variable(ring: SeriesRing, space: VarSpace, name: str) -> Poly:
        exps = [0] * space.dim
        exps[space.index(name)] = 1
        return Poly._make(ring, space, {tuple(exps): ring.one()})

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        """True when every kept coefficient is invisible at its precision."""
        return all(c.is_zero() for c in self.terms.values())

    def coeff(self, exps) -> Series:
        """Coefficient series of a monomial, exact zero when absent."""
        return self.terms.get(tuple(exps), self.ring.zero())

    def constant_term(self) -> Series:
        return self.coeff((0,) * self.space.dim)

    def total_degree(self) -> int:
        """Largest total variable degree among visible terms, -1 for zero."""
        deg = -1
        for exps, coeff in self.terms.items():
            if not coeff.is_zero():
                deg = max(deg, sum(exps))
        return deg

    # -- arithmetic -----------------------------------------------------

    def _compat(self, other: Poly):
        if self.ring != other.ring:
            raise FieldMismatchError("mixed series rings in Poly arithmetic")
        if self.space != other.space:
            raise StructureError("mixed variable spaces in Poly arithmetic")

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        self._compat(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            prev = out.get(exps)
            out[exps] = coeff if prev is None else prev + coeff
        return Poly._make(self.ring, self.space, out)

    def __neg__(self):
        return Poly._make(self.ring, self.space, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        self._compat(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                prev = out.get(key)
                out[key] = prod if prev is None else prev + prod
        return Poly._make(self.ring, self.space, out)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise StructureError("polynomial powers take a nonnegative integer")
        acc = Poly.constant(self.ring, self.space, 1)
        for _ in range(k):
            acc = acc * self
        return acc

    def scale(self, value) -> Poly:
        """Multiply every coefficient by a series (or scalar)."""
        s = value if isinstance(value, Series) else self.ring.scalar(value)
        return Poly._make(self.ring, self.space, {e: c * s for e, c in self.terms.items()})

    def diff(self, name: str) -> Poly:
        """Partial derivative; exponent factors are reduced in the scalar field."""
        idx = self.space.index(name)
        out = {}
        for exps, coeff in self.terms.items():
            e = exps[idx]
            if e == 0:
                continue
            key = exps[:idx] + (e - 1,) + exps[idx + 1 :]
            scaled = coeff * self.ring.scalar(self.ring.field.from_int(e))
            prev = out.get(key)
            out[key] = scaled if prev is None else prev + scaled
        return Poly._make(self.ring, self.space, out)

    # -- evaluation and substitution -------------------------------------

    def eval(self, values: dict) -> Series:
        """Evaluate at a point given as {name: Series}; extra keys are ignored."""
        vals = []
        for nm in self.space.names:
            if nm not in values:
                raise MissingVariableError(f"no value supplied for {nm!r}")
            v = values[nm]
            if not isinstance(v, Series) or v.ring != self.ring:
                raise FieldMismatchError(f"value for {nm!r} is not a series of this ring")
            vals.append(v)
        acc = self.ring.zero()
        cache = {}
        for exps, coeff in self.terms.items():
            prod = coeff
            for j, e in enumerate(exps):
                if e:
                    prod = prod * self._power(cache, vals, j, e)
            acc = acc + prod
        return acc

    def _power(self, cache, vals, j, e):
        key = (j, e)
        got = cache.get(key)
        if got is None:
            got = vals[j] if e == 1 else self._power(cache, vals, j, e - 1) * vals[j]
            cache[key] = got
        return got

    def subst(self, images: dict, space_out: VarSpace) -> Poly:
        """Substitute every variable by a polynomial over space_out."""
        imgs = []
        for nm in self.space.names:
            if nm not in images:
                raise MissingVariableError(f"no image supplied for {nm!r}")
            img = images[nm]
            if not isinstance(img, Poly) or img.ring != self.ring or img.space != space_out:
                raise StructureError(f"image of {nm!r} is not a polynomial over the target space")
            imgs.append(img)
        acc = Poly.zero(self.ring, space_out)
        cache = {}
        for exps, coeff in self.terms.items():
            prod = Poly.constant(self.ring, space_out, coeff)
            for j, e in enumerate(exps):
                if e:
                    prod = prod * self._poly_power(cache, imgs, j, e)
            acc = acc + prod
        return acc

    def _poly_power(self, cache, imgs, j, e):
        key = (j, e)
        got = cache.get(key)
        if got is None:
            got = imgs[j] if e == 1 else self._poly_power(cache, imgs, j, e - 1) * imgs[j]
            cache[key] = got
        return got

    # -- comparison and display ------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.ring.field != other.ring.field or self.space != other.space:
            return False
        for exps in set(self.terms) | set(other.terms):
            a = self.terms.get(exps)
            b = other.terms.get(exps)
            if a is None:
                a = self.ring.zero()
            if b is None:
                b = other.ring.zero()
            if a != b:
                return False
        return True

    __hash__ = None

    def render(self) -> str:
        field = self.ring.field
        items = []
        for exps, coeff in self.terms.items():
            for k, v in enumerate(coeff.coeffs):
                if field.is_zero(v):
                    continue
                items.append((tuple(reversed(exps)), k, exps, v))
        if not items:
            return "0"
        items.sort(key=lambda it: (it[0], it[1]))
        parts = []
        for _, k, exps, v in items:
            neg, mag = field.split_sign(v)
            factors = []
            if k == 1:
                factors.append("x")
            elif k > 1:
                factors.append(f"x^{k}")
            for nm, e in zip(self.space.names, exps):
                if e == 1:
                    factors.append(nm)
                elif e > 1:
                    factors.append(f"{nm}^{e}")
            if not factors:
                body = field.render(mag)
            elif mag == field.one:
                body = "*".join(factors)
            else:
                body = field.render(mag) + "*" + "*".join(factors)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self.render()!r})"


def jacobian(polys, names=None) -> PolyMatrix:
    """Matrix of partial derivatives, one row per polynomial."""
    polys = list(polys)
    if not polys:
        raise StructureError("jacobian of an empty family")
    space = polys[0].space
    names = tuple(names) if names is not None else space.names
    return PolyMatrix([[p.diff(nm) for nm in names] for p in polys])


class PolyMatrix:
    """A rectangular matrix of Poly entries sharing one ring and space."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise StructureError("matrix must be nonempty")
        width = len(rows[0])
        first = rows[0][0]
        for r in rows:
            if len(r) != width:
                raise StructureError("ragged matrix")
            for p in r:
                if not isinstance(p, Poly) or p.ring != first.ring or p.space != first.space:
                    raise StructureError("matrix entries must share one ring and space")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *a):
        raise AttributeError("PolyMatrix is immutable")

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]))

    @property
    def ring(self):
        return self.rows[0][0].ring

    @property
    def space(self):
        return self.rows[0][0].space

    @staticmethod
    def identity(ring: SeriesRing, space: VarSpace, n: int) -> PolyMatrix:
        one = Poly.constant(ring, space, 1)
        zero = Poly.zero(ring, space)
        return PolyMatrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    def _zero_one(self):
        return Poly.zero(self.ring, self.space), Poly.constant(self.ring, self.space, 1)

    def mul(self, other: PolyMatrix) -> PolyMatrix:
        zero, _ = self._zero_one()
        return PolyMatrix(linalg.mat_mul(self.rows, other.rows, zero))

    def scale(self, poly: Poly) -> PolyMatrix:
        return PolyMatrix([[poly * p for p in r] for r in self.rows])

    def det(self) -> Poly:
        m, n = self.shape
        if m != n:
            raise StructureError("determinant of a non-square matrix")
        zero, one = self._zero_one()
        return linalg.det(self.rows, zero, one)

    def adjugate(self) -> PolyMatrix:
        m, n = self.shape
        if m != n:
            raise StructureError("adjugate of a non-square matrix")
        zero, one = self._zero_one()
        return PolyMatrix(linalg.adjugate(self.rows, zero, one))

    def eval(self, values: dict):
        """Entrywise evaluation, returning a list of lists of Series."""
        return [[p.eval(values) for p in r] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    __hash__ = None

    def render(self) -> str:
        return "[" + ", ".join("[" + ", ".join(p.render() for p in r) + "]" for r in self.rows) + "]"

    def __repr__(self):
        return f"PolyMatrix({self.render()})"
