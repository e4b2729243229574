"""Representations with finitely many orbits, described by restriction data.

An orbit is recorded by the data the restriction equations need: its complex
codimension, the cohomology generators of its (maximal compact) stabilizer,
the restriction map from the ambient classes and the equivariant Euler class
of its normal slice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .polyring import Alphabet, AlphabetError, GradedPolynomial, Substitution
from .symfunc import (Partition, class_alphabet_for, quotient_series, roots_to_classes, schur,
                      total_class_product)


class ModelError(ValueError):
    """Invalid model data; the message starts with the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass(frozen=True, eq=False)
class OrbitDescriptor:
    name: str
    codim: int
    stabilizer: Alphabet
    restriction: Substitution
    euler: GradedPolynomial | None = None

    def __post_init__(self):
        if not isinstance(self.codim, int) or self.codim < 0:
            raise ModelError("codim", f"orbit {self.name!r}: codimension must be a nonnegative integer")
        if self.restriction.target != self.stabilizer:
            raise ModelError("restriction", f"orbit {self.name!r}: restriction must land in the stabilizer alphabet")
        if self.euler is not None:
            if self.euler.alphabet != self.stabilizer:
                raise ModelError("euler", f"orbit {self.name!r}: Euler class is not over the stabilizer alphabet")
            if self.euler.is_zero:
                raise ModelError("euler", f"orbit {self.name!r}: Euler class is zero")
            if not self.euler.is_homogeneous(self.codim):
                raise ModelError("euler", f"orbit {self.name!r}: Euler class is not homogeneous of degree {self.codim}")

    def restrict(self, p: GradedPolynomial) -> GradedPolynomial:
        return self.restriction(p)


@dataclass(frozen=True, eq=False)
class RepresentationModel:
    name: str
    ambient: Alphabet
    orbits: tuple[OrbitDescriptor, ...]
    closure: frozenset[tuple[str, str]] | None = None
    partial: bool = False
    dimension: int | None = None
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "orbits", tuple(self.orbits))
        seen = set()
        zero_codim = 0
        for i, o in enumerate(self.orbits):
            if o.name in seen:
                raise ModelError(f"orbits[{i}].name", f"duplicate orbit name {o.name!r}")
            seen.add(o.name)
            if o.restriction.source != self.ambient:
                raise ModelError(f"orbits[{i}].restriction", "restriction source is not the ambient alphabet")
            zero_codim += o.codim == 0
        if zero_codim > 1:
            raise ModelError("orbits", "more than one orbit of codimension 0")
        if self.closure is not None:
            pairs = _transitive(self.closure)
            for lower, upper in sorted(pairs):
                for which, nm in (("lower", lower), ("upper", upper)):
                    if nm not in seen:
                        raise ModelError("closure", f"unknown orbit {nm!r} ({which})")
                if lower == upper:
                    raise ModelError("closure", f"orbit {lower!r} related to itself")
                if self.orbit(lower).codim >= self.orbit(upper).codim:
                    raise ModelError("closure", f"{upper!r} in the closure of {lower!r} needs a larger codimension")
            object.__setattr__(self, "closure", frozenset(pairs))

    def orbit(self, name: str) -> OrbitDescriptor:
        for o in self.orbits:
            if o.name == name:
                return o
        raise KeyError(f"model {self.name!r} has no orbit {name!r}; "
                       f"known: {', '.join(o.name for o in self.orbits)}")

    @property
    def orbit_names(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.orbits)

    def euler_condition_check(self) -> dict[str, bool]:
        """Per orbit with a stated Euler class: is it nonzero."""
        return {o.name: not o.euler.is_zero for o in self.orbits if o.euler is not None}

    def in_closure(self, of: str, other: str) -> bool:
        """Is orbit ``other`` contained in the closure of orbit ``of``."""
        if self.closure is None:
            raise ModelError("closure", f"model {self.name!r} has no closure order")
        return of == other or (of, other) in self.closure

    def outside_closure(self, of: str) -> list[OrbitDescriptor]:
        return [o for o in self.orbits if not self.in_closure(of, o.name)]


def _transitive(pairs: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    rel = {tuple(p) for p in pairs}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return rel


# -- helpers -------------------------------------------------------------------------


def _alphabet(*blocks) -> Alphabet:
    """Like ``Alphabet.build`` but silently drops empty factors."""
    return Alphabet.build(*(b for b in blocks if b[1]))


def _names(prefix: str, count: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(1, count + 1)]


def _classes(alphabet: Alphabet, tag: str) -> list[GradedPolynomial]:
    if any(f.tag == tag for f in alphabet.factors):
        return alphabet.classes(tag)
    return [alphabet.one()]


def _check(n, name, low):
    if not isinstance(n, int) or isinstance(n, bool) or n < low:
        raise ValueError(f"{name} must be an integer >= {low}, got {n!r}")


# -- linear maps ----------------------------------------------------------------------


def porteous_ambient(n: int, k: int) -> Alphabet:
    return _alphabet(("source", _names("R", n), n), ("target", _names("L", n + k), n + k))


def porteous_euler(s: int, k: int, stabilizer: Alphabet) -> GradedPolynomial:
    """Euler class of the corank-``s`` slice: the resultant ``det(H'_{s+k+i-j})`` of size ``s``."""
    if s == 0:
        return stabilizer.one()
    H = quotient_series(_classes(stabilizer, "B"), _classes(stabilizer, "A"), 2 * s + k - 1)
    return schur(Partition.rectangle(s + k, s), H)


def catalog_porteous(n: int, k: int) -> RepresentationModel:
    """``GL(n) x GL(n+k)`` acting on ``Hom(C^n, C^(n+k))``; orbits by corank ``s``."""
    _check(n, "n", 1)
    _check(k, "k", 0)
    ambient = porteous_ambient(n, k)
    orbits = []
    for s in range(n + 1):
        stab = _alphabet(("A", _names("A", s), s), ("B", _names("B", s + k), s + k),
                         ("C", _names("C", n - s), n - s))
        a, b, c = (_classes(stab, t) for t in "ABC")
        src = total_class_product(a, c, max_degree=n)
        tgt = total_class_product(b, c, max_degree=n + k)
        images = {f"R{i}": src[i] for i in range(1, n + 1)}
        images.update({f"L{i}": tgt[i] for i in range(1, n + k + 1)})
        orbits.append(OrbitDescriptor(
            f"Sigma_{s}", s * (s + k), stab, Substitution(ambient, stab, images),
            porteous_euler(s, k, stab)))
    closure = {(f"Sigma_{s}", f"Sigma_{t}") for s in range(n + 1) for t in range(s + 1, n + 1)}
    return RepresentationModel(f"porteous(n={n},k={k})", ambient, orbits, frozenset(closure),
                               dimension=n * (n + k), params={"catalog": "porteous", "n": n, "k": k})


def porteous_tp_formula(n: int, k: int, s: int) -> GradedPolynomial:
    """``det(H_{s+k+i-j})`` of size ``s`` with ``H = L/R`` over the ambient alphabet."""
    ambient = porteous_ambient(n, k)
    H = quotient_series(ambient.classes("target"), ambient.classes("source"), 2 * s + k - 1)
    return schur(Partition.rectangle(s + k, s), H)


# -- bilinear forms ------------------------------------------------------------------


def bilinear_codim(kind: str, r: int) -> int:
    return r * (r - 1) // 2 if kind == "antisymmetric" else r * (r + 1) // 2


def catalog_bilinear(kind: str, n: int) -> RepresentationModel:
    """``GL(n)`` acting on antisymmetric or symmetric forms; orbits by corank ``r``."""
    if kind not in ("antisymmetric", "symmetric"):
        raise ValueError(f"kind must be 'antisymmetric' or 'symmetric', got {kind!r}")
    _check(n, "n", 1)
    ambient = _alphabet(("gl", _names("c", n), n))
    coranks = range(n, -1, -2) if kind == "antisymmetric" else range(n, -1, -1)
    orbits = []
    for r in coranks:
        npont = (n - r) // 2
        stab = Alphabet.build(*(b for b in (("U", _names("c", r), r, "class", 1),
                                             ("O", _names("p", npont), npont, "class", 2))
                                if b[1]))
        cs = _classes(stab, "U")
        ps = _classes(stab, "O")
        images = {}
        for i in range(1, n + 1):
            img = stab.zero()
            for l in range(0, i // 2 + 1):
                if i - 2 * l < len(cs) and l < len(ps):
                    img = img + cs[i - 2 * l] * ps[l]
            images[f"c{i}"] = img
        if kind == "antisymmetric":
            euler = schur(Partition.staircase(r - 1), cs)
        else:
            euler = schur(Partition.staircase(r), cs) * 2 ** r
        sigma = f"Sigma^{r}"
        orbits.append(OrbitDescriptor(sigma, bilinear_codim(kind, r), stab,
                                      Substitution(ambient, stab, images), euler))
    closure = {(f"Sigma^{r}", f"Sigma^{t}") for r in coranks for t in coranks if t > r}
    dim = n * (n - 1) // 2 if kind == "antisymmetric" else n * (n + 1) // 2
    return RepresentationModel(f"{kind}(n={n})", ambient, orbits, frozenset(closure),
                               dimension=dim, params={"catalog": kind, "n": n})


def bilinear_tp_formula(kind: str, n: int, r: int) -> GradedPolynomial:
    ambient = _alphabet(("gl", _names("c", n), n))
    cs = ambient.classes("gl")
    if kind == "antisymmetric":
        return schur(Partition.staircase(r - 1), cs)
    return schur(Partition.staircase(r), cs) * 2 ** r


# -- binary forms --------------------------------------------------------------------


def catalog_gl2_sn(n: int) -> RepresentationModel:
    """``GL(2)`` acting on degree-``n`` binary forms (orbits with a torus in the stabilizer)."""
    _check(n, "n", 2)
    ambient = _alphabet(("gl2", ["c1", "c2"], 2))
    stab = _alphabet(("T", ["alpha"], 1))
    alpha = stab.var("alpha")
    orbits = [OrbitDescriptor("eta_0", n - 1, stab,
                              Substitution(ambient, stab, {"c1": alpha, "c2": stab.zero()}),
                              alpha ** (n - 1) * math.factorial(n))]
    for i in range(1, n // 2 + 1):
        orbits.append(OrbitDescriptor(
            f"eta_{i}", n - 2, stab,
            Substitution(ambient, stab, {"c1": alpha * (n - 2 * i), "c2": alpha ** 2 * (-i * (n - i))})))
    closure = {(f"eta_{i}", "eta_0") for i in range(1, n // 2 + 1)}
    return RepresentationModel(f"gl2_sn(n={n})", ambient, orbits, frozenset(closure),
                               partial=True, dimension=n + 1, params={"catalog": "gl2", "n": n})


def gl2_tp_formula(n: int) -> GradedPolynomial:
    """``n * prod_i (i(n-i) c1^2 + (n-2i)^2 c2)`` over ``0 < i < n/2``, with an extra ``c1`` for even ``n``."""
    ambient = _alphabet(("gl2", ["c1", "c2"], 2))
    c1, c2 = ambient.gens()
    p = ambient.const(n)
    for i in range(1, (n + 1) // 2):
        p = p * (c1 ** 2 * (i * (n - i)) + c2 * (n - 2 * i) ** 2)
    if n % 2 == 0:
        p = p * c1 * (n // 2)
    return p


# -- contact singularities -------------------------------------------------------------


def contact_ambient(k: int) -> Alphabet:
    return _alphabet(("source", ["a"], 1), ("target", _names("B", k + 1), k + 1))


def closed_form_an(m: int, k: int) -> GradedPolynomial:
    """``prod_{j=0..k} prod_{i=1..m} (b_j - i a)`` rewritten in the target classes ``B``."""
    _check(m, "m", 0)
    _check(k, "k", 0)
    roots = Alphabet.build(("source", ["a"], 1), ("target", [f"b{j}" for j in range(k + 1)], k + 1, "root"))
    a = roots.var("a")
    p = roots.one()
    for j in range(k + 1):
        b = roots.var(f"b{j}")
        for i in range(1, m + 1):
            p = p * (b - a * i)
    classes = class_alphabet_for(roots, {"target": _names("B", k + 1)})
    return roots_to_classes(p, classes).embed(contact_ambient(k))


def catalog_contact_an(k: int, m_max: int) -> RepresentationModel:
    """Contact orbits ``A_0..A_{m_max}`` of germs ``(C^n,0) -> (C^(n+k),0)``."""
    _check(k, "k", 0)
    _check(m_max, "m_max", 1)
    ambient = contact_ambient(k)
    stab = _alphabet(("alpha", ["alpha"], 1), ("beta", _names("beta", k), k))
    alpha = stab.var("alpha")
    beta = _classes(stab, "beta")
    orbits = []
    for m in range(m_max + 1):
        tgt = total_class_product([stab.one(), alpha * (m + 1)], beta, max_degree=k + 1)
        images = {"a": alpha}
        images.update({f"B{i}": tgt[i] for i in range(1, k + 2)})
        restriction = Substitution(ambient, stab, images)
        orbits.append(OrbitDescriptor(f"A_{m}", m * (k + 1), stab, restriction,
                                      restriction(closed_form_an(m, k))))
    closure = {(f"A_{m}", f"A_{t}") for m in range(m_max + 1) for t in range(m + 1, m_max + 1)}
    return RepresentationModel(f"contact_an(k={k},m_max={m_max})", ambient, orbits,
                               frozenset(closure), params={"catalog": "contact", "k": k, "m_max": m_max})


# -- serialisation ----------------------------------------------------------------------


def serialize(model: RepresentationModel) -> dict:
    doc = {
        "name": model.name,
        "ambient": model.ambient.to_json(),
        "orbits": [{
            "name": o.name,
            "codim": o.codim,
            "stabilizer": o.stabilizer.to_json(),
            "restriction": o.restriction.to_json(),
            "euler": None if o.euler is None else o.euler.to_json(),
        } for o in model.orbits],
        "closure": None if model.closure is None else [list(p) for p in sorted(model.closure)],
    }
    if model.partial:
        doc["partial"] = True
    if model.dimension is not None:
        doc["dimension"] = model.dimension
    return doc


def dumps(model: RepresentationModel) -> str:
    return json.dumps(serialize(model), indent=2, sort_keys=False)


def _poly(alphabet: Alphabet, doc, path: str) -> GradedPolynomial:
    if not isinstance(doc, list):
        raise ModelError(path, "polynomial must be a list of terms")
    for i, term in enumerate(doc):
        if not isinstance(term, Mapping) or "coeff" not in term:
            raise ModelError(f"{path}[{i}]", "term needs a 'coeff' entry")
        coeff = term["coeff"]
        if isinstance(coeff, Mapping):
            if not isinstance(coeff.get("num"), int) or not isinstance(coeff.get("den", 1), int) \
                    or coeff.get("den", 1) == 0:
                raise ModelError(f"{path}[{i}].coeff", "coefficient needs integer 'num' and nonzero 'den'")
        elif not isinstance(coeff, int):
            raise ModelError(f"{path}[{i}].coeff", "coefficient must be an integer or {num, den}")
        exps = term.get("exps", {})
        if not isinstance(exps, Mapping):
            raise ModelError(f"{path}[{i}].exps", "exponents must be an object")
        for name, e in exps.items():
            if name not in alphabet:
                raise ModelError(f"{path}[{i}].exps", f"unknown variable {name!r}")
            if not isinstance(e, int) or e < 0:
                raise ModelError(f"{path}[{i}].exps.{name}", "exponent must be a nonnegative integer")
    return GradedPolynomial.from_json(alphabet, doc)


def _alphabet_doc(doc, path: str) -> Alphabet:
    if not isinstance(doc, Mapping) or not isinstance(doc.get("variables"), list) \
            or not isinstance(doc.get("factors"), list):
        raise ModelError(path, "alphabet needs 'variables' and 'factors' lists")
    for i, v in enumerate(doc["variables"]):
        if not isinstance(v, Mapping) or not {"name", "degree", "factor"} <= set(v):
            raise ModelError(f"{path}.variables[{i}]", "variable needs name, degree and factor")
    for i, f in enumerate(doc["factors"]):
        if not isinstance(f, Mapping) or not {"tag", "rank"} <= set(f):
            raise ModelError(f"{path}.factors[{i}]", "factor needs tag and rank")
    try:
        return Alphabet.from_json(doc)
    except (AlphabetError, TypeError, ValueError) as e:
        raise ModelError(path, str(e)) from None


def load_model(document: str | Mapping) -> RepresentationModel:
    """Parse and validate a model document (JSON text or an already parsed object)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ModelError("", f"invalid JSON: {e}") from None
    if not isinstance(document, Mapping):
        raise ModelError("", "model document must be a JSON object")
    for key in ("name", "ambient", "orbits"):
        if key not in document:
            raise ModelError(key, "missing")
    ambient = _alphabet_doc(document["ambient"], "ambient")
    if not isinstance(document["orbits"], list):
        raise ModelError("orbits", "must be a list")
    orbits = []
    for i, od in enumerate(document["orbits"]):
        path = f"orbits[{i}]"
        if not isinstance(od, Mapping):
            raise ModelError(path, "orbit must be an object")
        for key in ("name", "codim", "stabilizer", "restriction"):
            if key not in od:
                raise ModelError(f"{path}.{key}", "missing")
        if not isinstance(od["codim"], int) or od["codim"] < 0:
            raise ModelError(f"{path}.codim", "must be a nonnegative integer")
        stab = _alphabet_doc(od["stabilizer"], f"{path}.stabilizer")
        if not isinstance(od["restriction"], Mapping):
            raise ModelError(f"{path}.restriction", "must map ambient variables to polynomials")
        images = {}
        for var, pd in od["restriction"].items():
            if var not in ambient:
                raise ModelError(f"{path}.restriction.{var}", "not an ambient variable")
            images[var] = _poly(stab, pd, f"{path}.restriction.{var}")
        try:
            restriction = Substitution(ambient, stab, images)
        except AlphabetError as e:
            raise ModelError(f"{path}.restriction", str(e)) from None
        euler = None
        if od.get("euler") is not None:
            euler = _poly(stab, od["euler"], f"{path}.euler")
        try:
            orbits.append(OrbitDescriptor(od["name"], od["codim"], stab, restriction, euler))
        except ModelError as e:
            raise ModelError(f"{path}.{e.path}", str(e).split(": ", 1)[-1]) from None
    closure = document.get("closure")
    if closure is not None:
        if not isinstance(closure, list) or not all(
                isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in closure):
            raise ModelError("closure", "must be a list of [lower, upper] name pairs")
        closure = frozenset(tuple(p) for p in closure)
    dimension = document.get("dimension")
    return RepresentationModel(str(document["name"]), ambient, tuple(orbits), closure,
                               partial=bool(document.get("partial", False)), dimension=dimension)


def models_equal(a: RepresentationModel, b: RepresentationModel) -> bool:
    """Structural equality (names, alphabets, restriction images, Euler classes, closure)."""
    if (a.name, a.ambient, a.closure, a.partial, a.dimension) != \
            (b.name, b.ambient, b.closure, b.partial, b.dimension):
        return False
    if a.orbit_names != b.orbit_names:
        return False
    for x, y in zip(a.orbits, b.orbits):
        if (x.codim, x.stabilizer) != (y.codim, y.stabilizer):
            return False
        if x.restriction.images != y.restriction.images or x.euler != y.euler:
            return False
    return True


CATALOGS = {
    "porteous": "linear maps C^n -> C^(n+k) by corank (params n, k)",
    "antisymmetric": "antisymmetric bilinear forms on C^n by corank (param n)",
    "symmetric": "symmetric bilinear forms on C^n by corank (param n)",
    "gl2": "GL(2) on degree-n binary forms, orbits with a torus stabilizer (param n)",
    "contact": "contact orbits A_0..A_m of maps with relative dimension k (params k, m)",
}


def build_catalog(name: str, **params) -> RepresentationModel:
    if name == "porteous":
        return catalog_porteous(params["n"], params["k"])
    if name in ("antisymmetric", "symmetric"):
        return catalog_bilinear(name, params["n"])
    if name == "gl2":
        return catalog_gl2_sn(params["n"])
    if name == "contact":
        return catalog_contact_an(params["k"], params["m"])
    raise KeyError(f"unknown catalog {name!r}")
