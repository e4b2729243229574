"""Restriction equations: solving, verification, avoiding ideals, quotient variables."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polyring import Alphabet, GradedPolynomial, Substitution, linear_solve, monomial_basis
from .repmodel import RepresentationModel
from .symfunc import quotient_series


class SolverError(ValueError):
    pass


@dataclass
class TpResult:
    polynomial: GradedPolynomial
    orbit: str
    degree: int
    num_equations: int
    num_unknowns: int
    kernel_dimension: int
    orbits_used: list[str]
    kernel: list[GradedPolynomial] = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return self.kernel_dimension == 0

    @property
    def status(self) -> str:
        return "unique" if self.unique else "non-unique"

    def to_json(self) -> dict:
        doc = {
            "orbit": self.orbit,
            "degree": self.degree,
            "polynomial": self.polynomial.to_json(),
            "diagnostics": {
                "equations": self.num_equations,
                "unknowns": self.num_unknowns,
                "kernel_dim": self.kernel_dimension,
                "orbits_used": list(self.orbits_used),
            },
        }
        if self.kernel:
            doc["kernel"] = [k.to_json() for k in self.kernel]
        return doc


def equation_orbits(model: RepresentationModel, orbit: str):
    """Orbits giving equations for ``orbit``: itself, then the others with codim <= its codim.

    The others come in descending codimension, which keeps the block-wise
    elimination small.
    """
    target = model.orbit(orbit)
    others = [o for o in model.orbits if o.name != orbit and o.codim <= target.codim]
    others.sort(key=lambda o: -o.codim)
    return target, others


def solve_tp(model: RepresentationModel, orbit: str, include_principal: bool = True,
             require_integral: bool = True) -> TpResult:
    """Solve the principal and homogeneous restriction equations of ``orbit``.

    With ``include_principal=False`` only the homogeneous equations are used;
    the result is then the zero solution and ``kernel`` spans the solution space.
    """
    target, others = equation_orbits(model, orbit)
    if include_principal and target.euler is None:
        raise SolverError(f"orbit {orbit!r} has no Euler class")
    d = target.codim
    conditions = []
    if include_principal:
        if target.euler.is_zero:
            raise SolverError(f"Euler class of {orbit!r} is zero")
        conditions.append((target.restriction, target.euler))
    conditions.extend((o.restriction, None) for o in others)
    sol = linear_solve(conditions, d, model.ambient)
    used = ([orbit] if include_principal else []) + [o.name for o in others]
    if sol.status == "inconsistent":
        raise SolverError(f"restriction equations for {orbit!r} are inconsistent; the model data is wrong")
    result = TpResult(sol.solution, orbit, d, sol.num_equations, sol.num_unknowns,
                      sol.kernel_dimension, used, sol.kernel)
    if include_principal and result.unique and require_integral and not sol.solution.is_integral:
        raise SolverError(f"unique solution for {orbit!r} is not integral: {sol.solution}")
    return result


def restrict(model: RepresentationModel, orbit: str, p: GradedPolynomial) -> GradedPolynomial:
    return model.orbit(orbit).restriction(p)


@dataclass
class EquationCheck:
    orbit: str
    kind: str  # "principal" | "homogeneous" | "outside-closure"
    passed: bool
    residual: GradedPolynomial

    def to_json(self) -> dict:
        return {"orbit": self.orbit, "kind": self.kind, "pass": self.passed,
                "residual": self.residual.to_json()}


@dataclass
class VerifyReport:
    orbit: str
    checks: list[EquationCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[EquationCheck]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"orbit": self.orbit, "pass": self.passed, "equations": [c.to_json() for c in self.checks]}


def verify_tp(model: RepresentationModel, orbit: str, candidate: GradedPolynomial) -> VerifyReport:
    """Check every restriction equation of ``orbit`` on ``candidate``.

    When the model has a closure order, vanishing is also checked on every
    orbit outside the closure of ``orbit`` regardless of codimension.
    """
    target, others = equation_orbits(model, orbit)
    if candidate.alphabet != model.ambient:
        raise SolverError("candidate is not over the model's ambient alphabet")
    if not candidate.is_homogeneous(target.codim):
        raise SolverError(f"candidate must be homogeneous of degree {target.codim}")
    checks = []
    if target.euler is not None:
        res = target.euler - target.restriction(candidate)
        checks.append(EquationCheck(orbit, "principal", res.is_zero, res))
    for o in others:
        img = o.restriction(candidate)
        checks.append(EquationCheck(o.name, "homogeneous", img.is_zero, img))
    if model.closure is not None:
        done = {c.orbit for c in checks}
        for o in model.outside_closure(orbit):
            if o.name not in done:
                img = o.restriction(candidate)
                checks.append(EquationCheck(o.name, "outside-closure", img.is_zero, img))
    return VerifyReport(orbit, checks)


def avoiding_ideal_contains(model: RepresentationModel, orbit: str,
                            p: GradedPolynomial) -> tuple[bool, tuple[str, GradedPolynomial] | None]:
    """Does ``p`` restrict to zero on every orbit outside the closure of ``orbit``.

    Returns ``(True, None)`` or ``(False, (first failing orbit, its restriction))``.
    """
    if model.closure is None:
        raise SolverError(f"model {model.name!r} has no closure order")
    if not p.is_homogeneous():
        raise SolverError("polynomial must be homogeneous")
    model.orbit(orbit)
    for o in sorted(model.outside_closure(orbit), key=lambda o: -o.codim):
        img = o.restriction(p)
        if img:
            return False, (o.name, img)
    return True, None


# -- quotient variables ----------------------------------------------------------------


def h_alphabet(d: int) -> Alphabet:
    return Alphabet.build(("h", [f"h{i}" for i in range(1, d + 1)], None))


def quotient_map(ambient: Alphabet, source: str, target: str, d: int) -> Substitution:
    """``h_i -> H_i``, the degree-``i`` part of (total target class)/(total source class)."""
    H = quotient_series(ambient.classes(target), ambient.classes(source), d)
    return Substitution(h_alphabet(d), ambient, {f"h{i}": H[i] for i in range(1, d + 1)})


def _target_to_quotient_coordinates(alph: Alphabet, source: str, target: str) -> Substitution:
    """``L_i -> sum_j R_j g_(i-j)``, with ``g_i`` stored in the target variables."""
    R, L = alph.classes(source), alph.classes(target)
    images = {name: alph.var(name) for name in alph.names}
    for i, name in enumerate(alph.factor_names(target), start=1):
        images[name] = sum((R[j] * L[i - j] for j in range(1, min(i, len(R) - 1) + 1)), L[i])
    return Substitution(alph, alph, images)


def _quotient_in_coordinates(alph: Alphabet, source: str, target: str, d: int) -> list[GradedPolynomial]:
    """``H_0..H_d`` in the coordinates ``(R, g)``: ``H_i = g_i`` up to the target rank, then ``L_i = 0``."""
    R, L = alph.classes(source), alph.classes(target)
    H = list(L[:d + 1])
    for i in range(len(L), d + 1):
        H.append(-sum((R[j] * H[i - j] for j in range(1, min(i, len(R) - 1) + 1)), alph.zero()))
    return H


@dataclass
class QuotientResult:
    polynomial: GradedPolynomial | None
    in_subring: bool
    rank_truncated: bool
    kernel_dimension: int

    @property
    def status(self) -> str:
        if not self.in_subring:
            return "not in subring"
        return "rank-truncated" if self.rank_truncated else "ok"


def quotient_reduce(p: GradedPolynomial, source: str = "source", target: str = "target") -> QuotientResult:
    """Express ``p`` as a polynomial in the quotient variables ``h_1, h_2, ...``.

    ``p`` lives over an alphabet with a ``source`` and a ``target`` class factor.
    When several h-polynomials map to ``p`` (ranks small relative to the
    degree) one of them is returned and ``rank_truncated`` is set.
    """
    if not p.is_homogeneous():
        raise SolverError("polynomial must be homogeneous")
    d = p.degree or 0
    hs = h_alphabet(max(d, 1))
    if d == 0:
        return QuotientResult(hs.const(p.constant_term()), True, False, 0)
    alph = p.alphabet
    if alph.factor(target).rank is None or alph.factor(source).rank is None:
        phi = quotient_map(alph, source, target, d)
    else:
        # coordinates (R, g) with L = R*g: the low h_i become plain variables
        to_g = _target_to_quotient_coordinates(alph, source, target)
        phi = Substitution(hs, alph, {f"h{i}": g for i, g in
                                      enumerate(_quotient_in_coordinates(alph, source, target, d)[1:], 1)})
        p = to_g(p)
    sol = _solve_image(phi, p, d)
    if sol is None:
        return QuotientResult(None, False, False, 0)
    q, kernel = sol
    return QuotientResult(q, True, kernel > 0, kernel)


def _solve_image(phi: Substitution, p: GradedPolynomial, d: int):
    from .polyring import _Echelon, _combine

    basis = monomial_basis(phi.source, d)
    ech = _Echelon()
    relations = 0
    for i, b in enumerate(basis):
        if not ech.insert(dict(phi(b).terms), {i: 1}):
            relations += 1
    combo: dict = {}
    if ech.reduce(dict(p.terms), combo) is not None:
        return None
    q = _combine(basis, {i: -c for i, c in combo.items()}, phi.source)
    return q, relations


def expand_quotient(q: GradedPolynomial, ambient: Alphabet, source: str = "source",
                    target: str = "target") -> GradedPolynomial:
    """Substitute ``h_i -> H_i`` back into a quotient-variable polynomial."""
    d = len(q.alphabet)
    return quotient_map(ambient, source, target, d)(q)


def unfold_pullback(p: GradedPolynomial, n: int, nk: int, source: str = "source",
                    target: str = "target") -> GradedPolynomial:
    """Kill source classes above index ``n`` and target classes above index ``nk``."""
    alph = p.alphabet
    images = {}
    for tag, bound in ((source, n), (target, nk)):
        for i, name in enumerate(alph.factor_names(tag), start=1):
            if i > bound:
                images[name] = alph.zero()
    for name in alph.names:
        images.setdefault(name, alph.var(name))
    return Substitution(alph, alph, images)(p)


def is_rational_multiple(a: GradedPolynomial, b: GradedPolynomial) -> Fraction | None:
    """Return ``r`` with ``a == r*b`` if it exists (``b`` nonzero)."""
    if b.is_zero:
        return None
    m = next(iter(b.terms))
    r = Fraction(a.terms.get(m, 0)) / Fraction(b.terms[m])
    return r if a == b * r else None
