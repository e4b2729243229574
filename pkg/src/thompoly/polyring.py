"""Exact graded polynomial arithmetic.

Polynomials live over an :class:`Alphabet` of weighted variables.  Degrees are
complex degrees (``c_i`` has degree ``i``).  Monomials are stored as packed
integers: every variable owns a fixed-width bit field, the first variable of the
alphabet in the most significant field.  With that layout monomial product is
integer addition and plain integer comparison is lexicographic order.

Coefficients are exact rationals.  Integral values are kept as ``int`` and
everything else as :class:`fractions.Fraction`; the two mix freely.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

BITS = 16
MASK = (1 << BITS) - 1
MAX_EXPONENT = MASK

UNBOUNDED = None


class AlphabetError(ValueError):
    pass


def _norm(c):
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


@dataclass(frozen=True)
class Variable:
    name: str
    degree: int
    factor: str
    kind: str = "class"


@dataclass(frozen=True)
class Factor:
    """A group factor. ``rank`` is ``None`` for unbounded rank."""

    tag: str
    rank: int | None
    kind: str = "class"
    scale: int = 1


@dataclass(frozen=True, eq=False)
class Alphabet:
    variables: tuple[Variable, ...]
    factors: tuple[Factor, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "factors", tuple(self.factors))
        index = {}
        for i, v in enumerate(self.variables):
            if v.name in index:
                raise AlphabetError(f"duplicate variable name {v.name!r}")
            if not isinstance(v.degree, int) or v.degree < 1:
                raise AlphabetError(f"variable {v.name!r} must have positive integer degree")
            if v.kind not in ("class", "root"):
                raise AlphabetError(f"variable {v.name!r} has unknown kind {v.kind!r}")
            index[v.name] = i
        object.__setattr__(self, "_index", index)
        tags = {}
        for f in self.factors:
            if f.tag in tags:
                raise AlphabetError(f"duplicate factor tag {f.tag!r}")
            if f.rank is not None and (not isinstance(f.rank, int) or f.rank < 1):
                raise AlphabetError(f"factor {f.tag!r} rank must be positive or unbounded")
            tags[f.tag] = f
        for v in self.variables:
            if v.factor not in tags:
                raise AlphabetError(f"variable {v.name!r} refers to unknown factor {v.factor!r}")
            if v.kind != tags[v.factor].kind:
                raise AlphabetError(f"variable {v.name!r} kind differs from its factor")
        for f in self.factors:
            members = self.factor_variables(f.tag)
            if f.rank is not None and len(members) != f.rank:
                raise AlphabetError(
                    f"factor {f.tag!r} has rank {f.rank} but {len(members)} variables")
            for i, v in enumerate(members, start=1):
                want = i * f.scale if f.kind == "class" else f.scale
                if v.degree != want:
                    raise AlphabetError(
                        f"variable {v.name!r} in factor {f.tag!r} must have degree {want}")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def build(cls, *blocks: tuple[str, Sequence[str], int | None] | tuple) -> "Alphabet":
        """Build from ``(tag, names, rank[, kind[, scale]])`` blocks.

        Class variables get degrees ``scale, 2*scale, ...`` in order, roots get
        degree ``scale``.  ``rank`` may be ``UNBOUNDED``.
        """
        variables, factors = [], []
        for block in blocks:
            tag, names, rank, *rest = block
            kind = rest[0] if rest else "class"
            scale = rest[1] if len(rest) > 1 else 1
            factors.append(Factor(tag, rank, kind, scale))
            for i, name in enumerate(names, start=1):
                deg = i * scale if kind == "class" else scale
                variables.append(Variable(name, deg, tag, kind))
        return cls(tuple(variables), tuple(factors))

    # -- lookup ---------------------------------------------------------------

    def __len__(self):
        return len(self.variables)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Alphabet):
            return NotImplemented
        return self.variables == other.variables and self.factors == other.factors

    def __hash__(self):
        return hash((self.variables, self.factors))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlphabetError(f"unknown variable {name!r}") from None

    def factor(self, tag: str) -> Factor:
        for f in self.factors:
            if f.tag == tag:
                return f
        raise AlphabetError(f"unknown factor {tag!r}")

    def factor_variables(self, tag: str) -> tuple[Variable, ...]:
        return tuple(v for v in self.variables if v.factor == tag)

    def factor_names(self, tag: str) -> tuple[str, ...]:
        return tuple(v.name for v in self.factor_variables(tag))

    # -- packed monomials ------------------------------------------------------

    @cached_property
    def _shifts(self) -> tuple[int, ...]:
        n = len(self.variables)
        return tuple((n - 1 - i) * BITS for i in range(n))

    @cached_property
    def _degrees(self) -> tuple[int, ...]:
        return tuple(v.degree for v in self.variables)

    def unit(self, i: int) -> int:
        return 1 << self._shifts[i]

    def pack(self, exps: Mapping[str, int]) -> int:
        m = 0
        for name, e in exps.items():
            if e < 0 or e > MAX_EXPONENT:
                raise ValueError(f"exponent {e} of {name} out of range")
            if e:
                m |= e << self._shifts[self.index(name)]
        return m

    def exponents(self, m: int) -> tuple[int, ...]:
        return tuple((m >> s) & MASK for s in self._shifts)

    def unpack(self, m: int) -> dict[str, int]:
        return {v.name: e for v, e in zip(self.variables, self.exponents(m)) if e}

    def weight(self, m: int) -> int:
        return sum(((m >> s) & MASK) * d for s, d in zip(self._shifts, self._degrees))

    def monomials(self, degree: int) -> list[int]:
        """All packed monomials of the given weighted degree, in lex-descending order."""
        out = []
        degs, shifts = self._degrees, self._shifts
        n = len(degs)

        def rec(i, left, acc):
            if i == n:
                if left == 0:
                    out.append(acc)
                return
            for e in range(left // degs[i], -1, -1):
                rec(i + 1, left - e * degs[i], acc | (e << shifts[i]))

        if degree >= 0:
            rec(0, degree, 0)
        return out

    def count_monomials(self, degree: int) -> int:
        if degree < 0:
            return 0
        ways = [1] + [0] * degree
        for d in self._degrees:
            for t in range(d, degree + 1):
                ways[t] += ways[t - d]
        return ways[degree]

    # -- polynomials ------------------------------------------------------------

    def zero(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {})

    def one(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {0: 1})

    def const(self, c) -> "GradedPolynomial":
        c = _norm(c)
        return GradedPolynomial(self, {0: c} if c else {})

    def var(self, name: str) -> "GradedPolynomial":
        return GradedPolynomial(self, {self.unit(self.index(name)): 1})

    def gens(self) -> tuple["GradedPolynomial", ...]:
        return tuple(self.var(n) for n in self.names)

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "GradedPolynomial":
        return GradedPolynomial(self, {self.pack(exps): _norm(coeff)} if coeff else {})

    def classes(self, tag: str) -> list["GradedPolynomial"]:
        """Class family ``[1, c_1, ..., c_m]`` of a class factor."""
        return [self.one()] + [self.var(v.name) for v in self.factor_variables(tag)]

    def to_json(self) -> dict:
        return {
            "variables": [{"name": v.name, "degree": v.degree, "factor": v.factor,
                           **({"kind": v.kind} if v.kind != "class" else {})}
                          for v in self.variables],
            "factors": [{"tag": f.tag, "rank": "unbounded" if f.rank is None else f.rank,
                         **({"kind": f.kind} if f.kind != "class" else {}),
                         **({"scale": f.scale} if f.scale != 1 else {})}
                        for f in self.factors],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Alphabet":
        variables = tuple(
            Variable(v["name"], v["degree"], v["factor"], v.get("kind", "class"))
            for v in doc["variables"])
        factors = []
        for f in doc["factors"]:
            rank = f["rank"]
            factors.append(Factor(f["tag"], None if rank == "unbounded" else rank,
                                  f.get("kind", "class"), f.get("scale", 1)))
        return cls(variables, tuple(factors))


class GradedPolynomial:
    """Immutable sparse polynomial over an :class:`Alphabet`."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[int, object] | None = None):
        self.alphabet = alphabet
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, alphabet, terms):
        p = cls.__new__(cls)
        p.alphabet = alphabet
        p.terms = terms
        return p

    # -- coercion ---------------------------------------------------------------

    def _coerce(self, other) -> "GradedPolynomial":
        if isinstance(other, GradedPolynomial):
            if other.alphabet is not self.alphabet and other.alphabet != self.alphabet:
                raise AlphabetError("alphabet mismatch")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return self.alphabet.const(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = _norm(v)
            else:
                terms.pop(m, None)
        return GradedPolynomial._raw(self.alphabet, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial._raw(self.alphabet, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GradedPolynomial":
        c = _norm(c)
        if not c:
            return self.alphabet.zero()
        return GradedPolynomial._raw(self.alphabet, {m: _norm(a * c) for m, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, object] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                out[m] = get(m, 0) + ca * cb
        return GradedPolynomial._raw(
            self.alphabet, {m: _norm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(Fraction(1) / _norm(c))

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.alphabet.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GradedPolynomial):
            return self.alphabet == other.alphabet and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- inspection ---------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        w = self.alphabet.weight
        return {w(m) for m in self.terms}

    @property
    def degree(self) -> int | None:
        """Maximal weighted degree; ``None`` for the zero polynomial."""
        ds = self.degrees()
        return max(ds) if ds else None

    def is_homogeneous(self, d: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        if len(ds) != 1:
            return False
        return d is None or ds == {d}

    def homogeneous_part(self, d: int) -> "GradedPolynomial":
        w = self.alphabet.weight
        return GradedPolynomial._raw(self.alphabet, {m: c for m, c in self.terms.items() if w(m) == d})

    def truncate(self, d: int) -> "GradedPolynomial":
        """Drop every term of degree above ``d``."""
        w = self.alphabet.weight
        return GradedPolynomial._raw(self.alphabet, {m: c for m, c in self.terms.items() if w(m) <= d})

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def coefficient(self, exps: Mapping[str, int] | int):
        m = exps if isinstance(exps, int) else self.alphabet.pack(exps)
        return self.terms.get(m, 0)

    def constant_term(self):
        return self.terms.get(0, 0)

    def variables_used(self) -> set[str]:
        used = 0
        for m in self.terms:
            used |= m
        return {v.name for v, s in zip(self.alphabet.variables, self.alphabet._shifts)
                if (used >> s) & MASK}

    def sorted_terms(self) -> list[tuple[dict[str, int], object]]:
        """Terms in graded-lex descending order (the canonical print order)."""
        w = self.alphabet.weight
        keys = sorted(self.terms, key=lambda m: (w(m), m), reverse=True)
        return [(self.alphabet.unpack(m), self.terms[m]) for m in keys]

    def evaluate(self, values: Mapping[str, object]):
        """Substitute numbers for every variable used; returns an exact rational."""
        exps_of = self.alphabet.exponents
        vals = []
        for v in self.alphabet.variables:
            vals.append(values.get(v.name))
        total = 0
        for m, c in self.terms.items():
            t = c
            for val, e in zip(vals, exps_of(m)):
                if e:
                    if val is None:
                        raise AlphabetError("missing value for a variable in evaluate()")
                    t = t * _norm(val) ** e
            total += t
        return _norm(total) if total else 0

    def map_coefficients(self, f) -> "GradedPolynomial":
        return GradedPolynomial(self.alphabet, {m: _norm(f(c)) for m, c in self.terms.items()})

    def embed(self, alphabet: Alphabet) -> "GradedPolynomial":
        """Re-express over another alphabet containing every variable used (matched by name)."""
        if alphabet is self.alphabet or alphabet == self.alphabet:
            return GradedPolynomial._raw(alphabet, dict(self.terms))
        src = self.alphabet
        used = self.variables_used()
        moves = [(s, alphabet._shifts[alphabet.index(v.name)])
                 for v, s in zip(src.variables, src._shifts) if v.name in used]
        terms = {}
        for m, c in self.terms.items():
            t = 0
            for s_from, s_to in moves:
                e = (m >> s_from) & MASK
                if e:
                    t |= e << s_to
            terms[t] = c
        return GradedPolynomial._raw(alphabet, terms)

    # -- display / serialisation -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in exps.items())
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"GradedPolynomial({self})"

    def to_json(self) -> list[dict]:
        out = []
        for exps, c in self.sorted_terms():
            c = Fraction(c)
            out.append({"coeff": {"num": c.numerator, "den": c.denominator}, "exps": exps})
        return out

    @classmethod
    def from_json(cls, alphabet: Alphabet, doc: Iterable[Mapping]) -> "GradedPolynomial":
        p = alphabet.zero()
        terms: dict[int, object] = {}
        for term in doc:
            coeff = term["coeff"]
            if isinstance(coeff, Mapping):
                c = Fraction(int(coeff["num"]), int(coeff.get("den", 1)))
            else:
                c = Fraction(coeff)
            m = alphabet.pack({k: int(e) for k, e in term.get("exps", {}).items()})
            v = terms.get(m, 0) + c
            terms[m] = v
        p.terms = {m: _norm(c) for m, c in terms.items() if c}
        return p


# -- substitutions -----------------------------------------------------------------


class Substitution:
    """Degree-preserving ring homomorphism given by images of the source generators.

    Generators missing from ``images`` map to zero.
    """

    def __init__(self, source: Alphabet, target: Alphabet,
                 images: Mapping[str, GradedPolynomial]):
        self.source = source
        self.target = target
        imgs = []
        for v in source.variables:
            img = images.get(v.name)
            if img is None:
                img = target.zero()
            elif not isinstance(img, GradedPolynomial):
                img = target.const(img)
            if img.alphabet != target:
                raise AlphabetError(f"image of {v.name} is not over the target alphabet")
            if img and not img.is_homogeneous(v.degree):
                raise AlphabetError(
                    f"image of {v.name} is not homogeneous of degree {v.degree}")
            imgs.append(img)
        unknown = set(images) - set(source.names)
        if unknown:
            raise AlphabetError(f"images given for unknown variables {sorted(unknown)}")
        self.images = tuple(imgs)

    def __getitem__(self, name: str) -> GradedPolynomial:
        return self.images[self.source.index(name)]

    def image_map(self) -> dict[str, GradedPolynomial]:
        return dict(zip(self.source.names, self.images))

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Substitution":
        return cls(alphabet, alphabet, {n: alphabet.var(n) for n in alphabet.names})

    def compose(self, after: "Substitution") -> "Substitution":
        """``after ∘ self``."""
        if after.source != self.target:
            raise AlphabetError("cannot compose: alphabet mismatch")
        return Substitution(self.source, after.target,
                            {n: after(img) for n, img in zip(self.source.names, self.images)})

    def __call__(self, p: GradedPolynomial) -> GradedPolynomial:
        return substitute(self, p)

    def to_json(self) -> dict:
        return {n: img.to_json() for n, img in zip(self.source.names, self.images) if img}


def substitute(s: Substitution, p: GradedPolynomial) -> GradedPolynomial:
    if p.alphabet != s.source:
        raise AlphabetError("polynomial is not over the substitution's source alphabet")
    target = s.target
    if not p.terms:
        return target.zero()
    if all(len(img.terms) <= 1 for img in s.images):
        return _substitute_monomial(s, p)
    src = s.source
    shifts = src._shifts
    images = s.images
    n = len(shifts)

    def rec(terms: dict[int, object], i: int) -> GradedPolynomial:
        # Horner scheme in variable i over the remaining variables
        while i < n and not any((m >> shifts[i]) & MASK for m in terms):
            i += 1
        if i == n:
            c = _norm(sum(terms.values()))
            return target.const(c)
        groups: dict[int, dict[int, object]] = {}
        sh = shifts[i]
        for m, c in terms.items():
            e = (m >> sh) & MASK
            groups.setdefault(e, {})[m & ~(MASK << sh)] = c
        img = images[i]
        acc = None
        prev = None
        for e in sorted(groups, reverse=True):
            part = rec(groups[e], i + 1)
            if acc is None:
                acc = part
            else:
                acc = acc * (img ** (prev - e)) + part
            prev = e
        if prev:
            acc = acc * (img ** prev)
        return acc

    return rec(p.terms, 0)


def _substitute_monomial(s: Substitution, p: GradedPolynomial) -> GradedPolynomial:
    shifts = s.source._shifts
    parts = []
    for img in s.images:
        if img.terms:
            (m, c), = img.terms.items()
            parts.append((m, c))
        else:
            parts.append(None)
    out: dict[int, object] = {}
    for m, c in p.terms.items():
        mono, coeff = 0, c
        for sh, part in zip(shifts, parts):
            e = (m >> sh) & MASK
            if e:
                if part is None:
                    coeff = 0
                    break
                mono += part[0] * e
                coeff = coeff * part[1] ** e
        if coeff:
            out[mono] = out.get(mono, 0) + coeff
    return GradedPolynomial._raw(s.target, {m: _norm(c) for m, c in out.items() if c})


# -- determinants -------------------------------------------------------------------


def poly_det(matrix: Sequence[Sequence]):
    """Exact determinant of a square matrix of polynomials or rationals.

    Laplace expansion along rows with memoised minors (no division), so it
    works over any commutative ring of entries.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("poly_det needs a square matrix")
    one = 1
    for row in matrix:
        for a in row:
            if isinstance(a, GradedPolynomial):
                one = a.alphabet.one()
                break
        else:
            continue
        break
    if n == 0:
        return one

    memo: dict[int, object] = {0: one}

    def minor(cols: int):
        # determinant of rows n-|cols|.. with the column set ``cols``
        if cols in memo:
            return memo[cols]
        k = bin(cols).count("1")
        row = matrix[n - k]
        total = None
        sign = 1
        for j in range(n):
            if not (cols >> j) & 1:
                continue
            a = row[j]
            if a:
                term = minor(cols & ~(1 << j))
                if term:
                    term = term * a if sign > 0 else -(term * a)
                    total = term if total is None else total + term
            sign = -sign
        if total is None:
            total = one * 0
        memo[cols] = total
        return total

    return minor((1 << n) - 1)


def permutation_det(matrix: Sequence[Sequence]):
    """Leibniz-formula determinant; an independent check for small matrices."""
    n = len(matrix)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i, j in enumerate(perm):
            term = matrix[i][j] * term
        total = total + (term if inv % 2 == 0 else -term)
    return total


# -- linear solving -----------------------------------------------------------------


@dataclass
class LinearSolution:
    status: str  # "unique" | "underdetermined" | "inconsistent"
    solution: GradedPolynomial | None
    kernel: list[GradedPolynomial]
    num_equations: int
    num_unknowns: int

    @property
    def kernel_dimension(self) -> int:
        return len(self.kernel)

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"


def _integral(vec: dict) -> tuple[dict, int]:
    """Scale a rational vector to integers; returns it with the multiplier used."""
    den = 1
    for c in vec.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    if den == 1:
        return {m: int(c) for m, c in vec.items()}, 1
    return {m: int(c * den) for m, c in vec.items()}, den


def _primitive(vec: dict, combo: dict) -> None:
    g = 0
    for c in itertools.chain(vec.values(), combo.values()):
        g = math.gcd(g, c)
        if g == 1:
            return
    if g > 1:
        for d in (vec, combo):
            for m in d:
                d[m] //= g


class _Echelon:
    """Fraction-free sparse echelon form keyed by leading monomial.

    Every stored pivot is an integer vector together with the integer
    combination of inputs that produced it.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[dict, dict]] = {}

    def reduce(self, vec: dict, combo: dict) -> int | None:
        """Reduce in place; returns the surviving leading monomial or ``None``."""
        pivots = self.pivots
        while vec:
            lead = max(vec)
            piv = pivots.get(lead)
            if piv is None:
                return lead
            pvec, pcombo = piv
            c = vec[lead]
            p = pvec[lead]
            if p == 1 or p == -1:
                f = c * p
            else:
                g = math.gcd(c, p)
                f, scale = c // g, p // g
                if scale < 0:
                    f, scale = -f, -scale
                for m in vec:
                    vec[m] *= scale
                for m in combo:
                    combo[m] *= scale
            for d, pd in ((vec, pvec), (combo, pcombo)):
                for m, a in pd.items():
                    v = d.get(m, 0) - f * a
                    if v:
                        d[m] = v
                    else:
                        del d[m]
            if p != 1 and p != -1:
                _primitive(vec, combo)
        return None

    def insert(self, vec: dict, combo: dict) -> bool:
        """Add an integer vector; returns False (leaving a kernel relation in ``combo``) if dependent."""
        lead = self.reduce(vec, combo)
        if lead is None:
            _primitive({}, combo)
            return False
        _primitive(vec, combo)
        self.pivots[lead] = (vec, combo)
        return True


def linear_solve(conditions: Sequence[tuple[Substitution, GradedPolynomial | None]],
                 degree: int, alphabet: Alphabet,
                 basis: Sequence[GradedPolynomial] | None = None) -> LinearSolution:
    """Solve for a degree-``degree`` polynomial ``x`` over ``alphabet`` with ``s(x) == rhs``.

    Each condition ``(s, rhs)`` stands for the block of scalar equations "the
    coefficient of every target monomial of ``s(x)`` equals that of ``rhs``"
    (``rhs=None`` means zero).  The unknown ranges over ``basis`` (default: all
    monomials of the given degree).  Blocks are processed in order; each block
    is solved on the affine solution space left by the previous ones, so
    putting the most restrictive block first keeps the later ones cheap.
    """
    for s, _ in conditions:
        if s.source != alphabet:
            raise AlphabetError("condition is not over the unknown's alphabet")
    if basis is None:
        basis = monomial_basis(alphabet, degree)
    basis = list(basis)
    num_unknowns = len(basis)
    num_equations = sum(s.target.count_monomials(degree) for s, _ in conditions)
    x0 = alphabet.zero()
    for s, rhs in conditions:
        target = s.target.zero() if rhs is None else rhs
        if target.alphabet != s.target:
            raise AlphabetError("right-hand side is not over the condition's target alphabet")
        if target and not target.is_homogeneous(degree):
            raise ValueError("right-hand side must be homogeneous of the unknown's degree")
        ech = _Echelon()
        relations = []
        # ascending monomial order keeps fill-in low for the usual lex pivots
        for i in range(len(basis) - 1, -1, -1):
            vec, den = _integral(s(basis[i]).terms)
            combo = {i: den}
            if not ech.insert(vec, combo):
                relations.append(combo)
        residual, den = _integral((target - s(x0)).terms)
        combo = {-1: den}
        if ech.reduce(residual, combo) is not None:
            return LinearSolution("inconsistent", None, [], num_equations, num_unknowns)
        # residual*combo[-1] + sum combo[i] s(basis[i]) == 0
        scale = Fraction(-1, combo.pop(-1))
        x0 = x0 + _combine(basis, {i: c * scale for i, c in combo.items()}, alphabet)
        basis = [_combine(basis, rel, alphabet) for rel in relations]
    status = "unique" if not basis else "underdetermined"
    return LinearSolution(status, x0, basis, num_equations, num_unknowns)


def _combine(basis, combo, alphabet) -> GradedPolynomial:
    out: dict[int, object] = {}
    for i, c in combo.items():
        for m, a in basis[i].terms.items():
            out[m] = out.get(m, 0) + c * a
    return GradedPolynomial._raw(alphabet, {m: _norm(v) for m, v in out.items() if v})


def monomial_basis(alphabet: Alphabet, degree: int) -> list[GradedPolynomial]:
    return [GradedPolynomial._raw(alphabet, {m: 1}) for m in alphabet.monomials(degree)]


def count_monomials(alphabet: Alphabet, degree: int) -> int:
    return alphabet.count_monomials(degree)


def parse_polynomial(text: str, alphabet: Alphabet) -> GradedPolynomial:
    """Parse ``"3*c1^2 - 1/2*c2 + 4"``-style text over ``alphabet``."""
    tokens = re.findall(r"\s*([+-]|[^+\-\s][^+\-]*)", text.strip())
    if not tokens:
        raise ValueError("empty polynomial")
    result = alphabet.zero()
    sign = 1
    expect_term = True
    for tok in tokens:
        tok = tok.strip()
        if tok in "+-":
            sign = sign * (-1 if tok == "-" else 1) if expect_term else (-1 if tok == "-" else 1)
            expect_term = True
            continue
        if not expect_term:
            raise ValueError(f"missing operator before {tok!r}")
        term = alphabet.const(sign)
        for factor in tok.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed term {tok!r}")
            base, _, exp = factor.partition("^")
            e = int(exp) if exp else 1
            if base in alphabet:
                term = term * alphabet.var(base) ** e
            else:
                try:
                    term = term * Fraction(base) ** e
                except ValueError:
                    raise ValueError(f"unknown variable {base!r}") from None
        result = result + term
        sign, expect_term = 1, False
    if expect_term:
        raise ValueError("polynomial ends with an operator")
    return result


def iter_degrees(p: GradedPolynomial) -> Iterator[int]:
    yield from sorted(p.degrees())
