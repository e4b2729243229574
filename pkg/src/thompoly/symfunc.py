"""Partitions, Schur polynomials and symmetric-function rewriting."""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .polyring import (MASK, Alphabet, AlphabetError, GradedPolynomial, Substitution,
                       poly_det)


class Partition(tuple):
    """A weakly decreasing tuple of positive integers (trailing zeros dropped)."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """The ``i``-th part (0-based), zero past the end."""
        return self[i] if i < len(self) else 0

    def contains(self, other: Sequence[int]) -> bool:
        """Diagram containment: ``other[i] <= self[i]`` for every row."""
        other = Partition(other)
        return len(other) <= len(self) and all(b <= a for a, b in zip(self, other))

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def __repr__(self):
        return f"Partition({list(self)})"

    @classmethod
    def rectangle(cls, width: int, height: int) -> "Partition":
        return cls([width] * height if width > 0 else [])

    @classmethod
    def staircase(cls, top: int) -> "Partition":
        """``(top, top-1, ..., 1)``."""
        return cls(range(top, 0, -1))


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n

    def rec(left, cap):
        if left == 0:
            yield ()
            return
        for p in range(min(left, cap), 0, -1):
            for rest in rec(left - p, p):
                yield (p,) + rest

    for parts in rec(n, max_part):
        yield Partition(parts)


class DegreeMultiset:
    """A multiset of positive generator degrees, possibly with all degrees ``>= start`` unbounded.

    ``DegreeMultiset.all_degrees()`` models ``{1, 2, 3, ...}``.
    """

    def __init__(self, degrees: Iterable[int] = (), unbounded_from: int | None = None):
        self.degrees = tuple(sorted(int(d) for d in degrees))
        if any(d < 1 for d in self.degrees):
            raise ValueError("degrees must be positive")
        if unbounded_from is not None and unbounded_from < 1:
            raise ValueError("unbounded tail must start at a positive degree")
        self.unbounded_from = unbounded_from

    @classmethod
    def all_degrees(cls) -> "DegreeMultiset":
        return cls((), unbounded_from=1)

    @classmethod
    def unitary(cls, rank: int, copies: int = 1) -> "DegreeMultiset":
        """Generator degrees of ``copies`` factors ``U(rank)``."""
        return cls([d for d in range(1, rank + 1) for _ in range(copies)])

    def truncated(self, n: int) -> list[int]:
        out = [d for d in self.degrees if d <= n]
        if self.unbounded_from is not None:
            out.extend(range(self.unbounded_from, n + 1))
        return out

    def __eq__(self, other):
        if not isinstance(other, DegreeMultiset):
            return NotImplemented
        return self.degrees == other.degrees and self.unbounded_from == other.unbounded_from

    def __hash__(self):
        return hash((self.degrees, self.unbounded_from))

    def __repr__(self):
        tail = f", unbounded_from={self.unbounded_from}" if self.unbounded_from else ""
        return f"DegreeMultiset({list(self.degrees)}{tail})"

    def to_json(self):
        if self.unbounded_from is None:
            return list(self.degrees)
        return {"degrees": list(self.degrees), "unbounded_from": self.unbounded_from}

    @classmethod
    def from_json(cls, doc) -> "DegreeMultiset":
        if isinstance(doc, str):
            if doc != "all":
                raise ValueError(f"unknown degree set {doc!r}")
            return cls.all_degrees()
        if isinstance(doc, dict):
            return cls(doc.get("degrees", ()), doc.get("unbounded_from"))
        return cls(doc)


def partition_count(n: int, degrees: DegreeMultiset | Iterable[int]) -> int:
    """Number of monomials of weighted degree ``n`` in generators of the given degrees."""
    if n < 0:
        return 0
    if not isinstance(degrees, DegreeMultiset):
        degrees = DegreeMultiset(degrees)
    ways = [1] + [0] * n
    for d in degrees.truncated(n):
        for t in range(d, n + 1):
            ways[t] += ways[t - d]
    return ways[n]


# -- class families ---------------------------------------------------------------


def _entry(classes: Sequence, i: int):
    if i < 0 or i >= len(classes):
        return 0
    return classes[i]


def schur(lam: Sequence[int], classes: Sequence[GradedPolynomial]) -> GradedPolynomial:
    """Jacobi–Trudi determinant ``det(c_{lam_i + j - i})``.

    ``classes`` is the family ``[1, c_1, c_2, ...]``; indices past its end count as zero.
    """
    lam = Partition(lam)
    alphabet = next(c.alphabet for c in classes if isinstance(c, GradedPolynomial))
    n = len(lam)
    matrix = [[_entry(classes, lam[i] + j - i) for j in range(n)] for i in range(n)]
    det = poly_det(matrix)
    return det if isinstance(det, GradedPolynomial) else alphabet.const(det)


def quotient_series(numerator: Sequence[GradedPolynomial],
                    denominator: Sequence[GradedPolynomial],
                    max_degree: int) -> list[GradedPolynomial]:
    """Coefficients ``H_0..H_m`` of ``(1 + b_1 + ...)/(1 + a_1 + ...)``.

    Uses ``H_i = b_i - sum_{j>=1} a_j H_{i-j}``.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    alphabet = (numerator[0] if numerator else denominator[0]).alphabet
    H = [alphabet.one()]
    for i in range(1, max_degree + 1):
        h = _entry(numerator, i)
        h = h if isinstance(h, GradedPolynomial) else alphabet.const(h)
        for j in range(1, i + 1):
            a = _entry(denominator, j)
            if a:
                h = h - a * H[i - j]
        H.append(h)
    return H


def total_class_product(*families: Sequence[GradedPolynomial], max_degree: int) -> list[GradedPolynomial]:
    """Graded pieces of a product of total classes, truncated at ``max_degree``."""
    alphabet = families[0][0].alphabet
    out = [alphabet.one()] + [alphabet.zero()] * max_degree
    for fam in families:
        new = [alphabet.zero()] * (max_degree + 1)
        for i, x in enumerate(out):
            if not x:
                continue
            for j in range(0, max_degree + 1 - i):
                c = _entry(fam, j)
                if c:
                    new[i + j] = new[i + j] + x * c
        out = new
    return out


def elementary(values: Sequence) -> list:
    """Elementary symmetric functions ``[e_0, e_1, ..., e_N]`` of a sequence (numbers or polynomials)."""
    e = [1]
    for x in values:
        e = [a + (x * b if k else 0) for k, (a, b) in enumerate(zip(e + [0], [0] + e))]
    return e


# -- roots <-> classes ---------------------------------------------------------------


def class_alphabet_for(roots: Alphabet, class_names: dict[str, Sequence[str]] | None = None,
                       default_prefix: str = "c") -> Alphabet:
    """The class alphabet matching a root alphabet.

    Every root factor of rank ``m`` becomes a class factor with ``m`` class variables;
    other variables pass through unchanged.
    """
    from .polyring import Factor, Variable

    variables, factors = [], []
    for f in roots.factors:
        members = roots.factor_variables(f.tag)
        if f.kind == "root":
            names = (class_names or {}).get(f.tag)
            if names is None:
                names = [f"{f.tag}{default_prefix}{i}" for i in range(1, len(members) + 1)]
            if len(names) != len(members):
                raise AlphabetError(f"factor {f.tag!r} needs {len(members)} class names")
            factors.append(Factor(f.tag, len(members), "class", f.scale))
            variables.extend(Variable(n, i * f.scale, f.tag, "class")
                             for i, n in enumerate(names, start=1))
        else:
            factors.append(f)
            variables.extend(members)
    return Alphabet(tuple(variables), tuple(factors))


def classes_to_roots(classes: Alphabet, roots: Alphabet) -> Substitution:
    """Substitution ``c_i -> e_i(roots)`` factor by factor (by factor tag)."""
    images = {}
    for f in classes.factors:
        if f.kind != "class":
            raise AlphabetError("classes_to_roots expects a class alphabet")
        rf = roots.factor(f.tag)
        names = classes.factor_names(f.tag)
        if rf.kind == "root":
            root_vars = [roots.var(n) for n in roots.factor_names(f.tag)]
            e = elementary(root_vars)
            for i, n in enumerate(names, start=1):
                images[n] = e[i] if i < len(e) else roots.zero()
        else:
            for n in names:
                images[n] = roots.var(n)
    return Substitution(classes, roots, images)


class SymmetryError(ValueError):
    def __init__(self, factor: str, pair: tuple[str, str]):
        super().__init__(f"not symmetric in factor {factor!r}: swapping {pair[0]} and {pair[1]} changes it")
        self.factor = factor
        self.pair = pair


def roots_to_classes(p: GradedPolynomial, classes: Alphabet) -> GradedPolynomial:
    """Rewrite a polynomial symmetric in each root block as a polynomial in elementary classes.

    ``classes`` must have, for every root factor of ``p``'s alphabet, a class
    factor with the same tag and rank; non-root variables must occur in it by name.
    """
    roots = p.alphabet
    result_terms: dict[int, object] = {}
    root_factors = [f for f in roots.factors if f.kind == "root"]
    blocks = []
    for f in root_factors:
        names = roots.factor_names(f.tag)
        shifts = [roots._shifts[roots.index(n)] for n in names]
        for a, b in zip(range(len(names)), range(1, len(names))):
            sa, sb = shifts[a], shifts[b]
            swapped = {}
            for m, c in p.terms.items():
                ea, eb = (m >> sa) & MASK, (m >> sb) & MASK
                swapped[m + ((eb - ea) << sa) + ((ea - eb) << sb)] = c
            if swapped != p.terms:
                raise SymmetryError(f.tag, (names[a], names[b]))
        cf = classes.factor(f.tag)
        cnames = classes.factor_names(f.tag)
        if len(cnames) != len(names):
            raise AlphabetError(f"class factor {f.tag!r} has the wrong rank")
        blocks.append((shifts, [classes.unit(classes.index(n)) for n in cnames]))
    passthrough = []
    for v, s in zip(roots.variables, roots._shifts):
        if v.kind != "root":
            passthrough.append((s, classes.unit(classes.index(v.name))))

    # repeatedly peel off the lex-leading term; with a symmetric remainder its
    # exponents are weakly decreasing in each block and equal a product of e_i
    to_roots = classes_to_roots(classes, roots)
    remainder = dict(p.terms)
    cache: dict[int, GradedPolynomial] = {}
    while remainder:
        lead = max(remainder)
        c = remainder[lead]
        cm = 0
        for s, u in passthrough:
            cm += ((lead >> s) & MASK) * u
        for shifts, units in blocks:
            exps = [(lead >> s) & MASK for s in shifts]
            for i in range(len(exps)):
                nxt = exps[i + 1] if i + 1 < len(exps) else 0
                d = exps[i] - nxt
                if d < 0:
                    raise ValueError("leading term not dominant; input is not symmetric")
                cm += d * units[i]
        result_terms[cm] = result_terms.get(cm, 0) + c
        img = cache.get(cm)
        if img is None:
            img = to_roots(GradedPolynomial(classes, {cm: 1}))
            cache[cm] = img
        for m, a in img.terms.items():
            v = remainder.get(m, 0) - c * a
            if v:
                remainder[m] = v
            else:
                remainder.pop(m, None)
    return GradedPolynomial(classes, result_terms)
