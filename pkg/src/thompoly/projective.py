"""Projective Thom polynomials and degrees of projectivized orbit closures.

A one-parameter subgroup ``t -> (t^w_1, ..., t^w_n)`` of the maximal torus
acting on ``V`` as ``t^q`` times the identity turns the Thom polynomial of a
cone into the class of its projectivization: shift every Chern root
``a_i -> a_i + (w_i/q) xi``.  The top ``xi`` coefficient is the degree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping

from .polyring import MASK, Alphabet, Factor, GradedPolynomial, Substitution, Variable
from .repmodel import RepresentationModel
from .symfunc import class_alphabet_for, classes_to_roots, elementary, roots_to_classes
from .solver import solve_tp


class ProjectiveError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarData:
    """Exponent ``q`` of the scalar action and one integer weight per Chern root, per factor."""

    q: int
    weights: Mapping[str, tuple[int, ...]]

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q == 0:
            raise ProjectiveError("q must be a nonzero integer")
        object.__setattr__(self, "weights", {f: tuple(int(x) for x in w) for f, w in self.weights.items()})

    def check(self, ambient: Alphabet):
        for f in ambient.factors:
            if f.rank is None:
                raise ProjectiveError(f"factor {f.tag!r} has unbounded rank")
            if f.kind != "class" or f.scale != 1:
                raise ProjectiveError(f"factor {f.tag!r} is not a plain Chern-class factor")
            w = self.weights.get(f.tag)
            if w is None:
                raise ProjectiveError(f"no weights given for factor {f.tag!r}")
            if len(w) != f.rank:
                raise ProjectiveError(f"factor {f.tag!r} has rank {f.rank} but {len(w)} weights were given")
        extra = set(self.weights) - {f.tag for f in ambient.factors}
        if extra:
            raise ProjectiveError(f"weights given for unknown factors {sorted(extra)}")

    def to_json(self) -> dict:
        return {"q": self.q, "weights": {f: list(w) for f, w in self.weights.items()}}

    @classmethod
    def from_json(cls, doc) -> "ScalarData":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            return cls(int(doc["q"]), {str(f): list(w) for f, w in doc["weights"].items()})
        except (KeyError, TypeError, AttributeError) as e:
            raise ProjectiveError(f"scalar data needs 'q' and 'weights': {e}") from None


PRESETS = ("target-scaling", "diagonal", "bilinear")


def preset(model: RepresentationModel, name: str | None = None) -> ScalarData:
    """Standard scalar data for the built-in catalogs.

    ``target-scaling`` (linear maps, contact): scalars act on the target only.
    ``diagonal`` (binary forms): scalar matrices in ``GL(2)``, ``q = n``.
    ``bilinear`` (forms): scalar matrices in ``GL(n)``, ``q = 2``.
    """
    catalog = model.params.get("catalog")
    default = {"porteous": "target-scaling", "contact": "target-scaling", "gl2": "diagonal",
               "antisymmetric": "bilinear", "symmetric": "bilinear"}.get(catalog)
    name = name or default
    if name is None:
        raise ProjectiveError(f"model {model.name!r} has no preset scalar data; give weights")
    ranks = {f.tag: f.rank for f in model.ambient.factors}
    if name == "target-scaling" and catalog in ("porteous", "contact"):
        return ScalarData(1, {"source": [0] * ranks["source"], "target": [1] * ranks["target"]})
    if name == "diagonal" and catalog == "gl2":
        return ScalarData(model.params["n"], {"gl2": [1, 1]})
    if name == "bilinear" and catalog in ("antisymmetric", "symmetric"):
        return ScalarData(2, {"gl": [1] * ranks["gl"]})
    raise ProjectiveError(f"preset {name!r} does not apply to model {model.name!r}")


def projective_alphabet(ambient: Alphabet, xi: str = "xi") -> Alphabet:
    if xi in ambient:
        raise ProjectiveError(f"ambient alphabet already has a variable named {xi!r}")
    return Alphabet(ambient.variables + (Variable(xi, 1, xi),), ambient.factors + (Factor(xi, 1),))


def codim_below_dimension(model: RepresentationModel, orbit: str) -> bool | None:
    """Is the orbit's codimension below ``dim V`` (``None`` when the dimension is unknown)."""
    if model.dimension is None:
        return None
    return model.orbit(orbit).codim < model.dimension


def _uniform(w) -> bool:
    return len(set(w)) <= 1


def shift_substitution(ambient: Alphabet, sd: ScalarData, xi: str = "xi") -> Substitution | None:
    """Class-level form of the root shift, available when weights are constant within each factor.

    With all roots of a rank-``m`` factor shifted by ``t``:
    ``c_i -> sum_j binom(m-j, i-j) t^(i-j) c_j``.
    """
    if not all(_uniform(w) for w in sd.weights.values()):
        return None
    target = projective_alphabet(ambient, xi)
    x = target.var(xi)
    images = {}
    for f in ambient.factors:
        w = sd.weights[f.tag]
        t = Fraction(w[0] if w else 0, sd.q)
        cs = target.classes(f.tag)
        names = ambient.factor_names(f.tag)
        m = f.rank
        for i in range(1, m + 1):
            img = target.zero()
            for j in range(0, i + 1):
                img = img + cs[j] * x ** (i - j) * (comb(m - j, i - j) * t ** (i - j))
            images[names[i - 1]] = img
    return Substitution(ambient, target, images)


def shift_by_roots(p: GradedPolynomial, sd: ScalarData, xi: str = "xi") -> GradedPolynomial:
    """Expand into Chern roots, shift ``a_i -> a_i + (w_i/q) xi`` and re-symmetrize."""
    ambient = p.alphabet
    blocks = [(f.tag, [f"{f.tag}__r{i}" for i in range(1, f.rank + 1)], f.rank, "root")
              for f in ambient.factors]
    roots = Alphabet.build(*blocks)
    to_roots = classes_to_roots(ambient, roots)
    expanded = to_roots(p)
    shifted_roots = Alphabet(roots.variables + (Variable(xi, 1, xi),), roots.factors + (Factor(xi, 1),))
    x = shifted_roots.var(xi)
    images = {}
    for f in ambient.factors:
        for name, w in zip(roots.factor_names(f.tag), sd.weights[f.tag]):
            images[name] = shifted_roots.var(name) + x * Fraction(w, sd.q)
    shifted = Substitution(roots, shifted_roots, images)(expanded)
    names = {f.tag: ambient.factor_names(f.tag) for f in ambient.factors}
    return roots_to_classes(shifted, class_alphabet_for(shifted_roots, names)).embed(
        projective_alphabet(ambient, xi))


def projective_tp(model: RepresentationModel, orbit: str, sd: ScalarData,
                  tp: GradedPolynomial | None = None, method: str = "auto",
                  xi: str = "xi") -> GradedPolynomial:
    """Projective Thom polynomial over the ambient classes and ``xi``.

    ``method`` is ``"classes"`` (needs factor-wise constant weights), ``"roots"``
    or ``"auto"``.
    """
    sd.check(model.ambient)
    if tp is None:
        tp = solve_tp(model, orbit).polynomial
    if method not in ("auto", "classes", "roots"):
        raise ValueError(f"unknown method {method!r}")
    shift = shift_substitution(model.ambient, sd, xi) if method != "roots" else None
    if method == "classes" and shift is None:
        raise ProjectiveError("class-level shift needs constant weights within each factor")
    result = shift(tp) if shift is not None else shift_by_roots(tp, sd, xi)
    if not result.is_integral:
        raise ProjectiveError(f"projective Thom polynomial of {orbit!r} is not integral; "
                              "the scalar data does not match the representation")
    return result


def xi_coefficients(p: GradedPolynomial, xi: str = "xi") -> list[GradedPolynomial]:
    """Split ``p = sum_j p_j xi^j``; ``p_j`` over the alphabet without ``xi``."""
    alph = p.alphabet
    base = Alphabet(tuple(v for v in alph.variables if v.name != xi),
                    tuple(f for f in alph.factors if f.tag != xi))
    shift = alph._shifts[alph.index(xi)]
    parts: dict[int, dict] = {}
    for m, c in p.terms.items():
        e = (m >> shift) & MASK
        parts.setdefault(e, {})[m - (e << shift)] = c
    top = max(parts, default=0)
    out = []
    for j in range(top + 1):
        q = GradedPolynomial(alph, parts.get(j, {}))
        out.append(q.embed(base) if q else base.zero())
    return out


def degree(model: RepresentationModel, orbit: str, sd: ScalarData,
           tp: GradedPolynomial | None = None) -> int:
    """Degree of the projectivized orbit closure: ``tp(w) / q^d``."""
    sd.check(model.ambient)
    if tp is None:
        tp = solve_tp(model, orbit).polynomial
    values = {}
    for f in model.ambient.factors:
        e = elementary(sd.weights[f.tag])
        for i, name in enumerate(model.ambient.factor_names(f.tag), start=1):
            values[name] = e[i] if i < len(e) else 0
    d = model.orbit(orbit).codim
    value = Fraction(tp.evaluate(values)) / Fraction(sd.q) ** d
    if value.denominator != 1 or value < 0:
        raise ProjectiveError(f"tp(w)/q^d = {value} is not a nonnegative integer; invalid scalar data")
    return int(value)
