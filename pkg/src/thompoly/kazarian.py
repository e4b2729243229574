"""Rank bookkeeping on the first page of the codimension-filtration spectral sequence.

Column ``col`` of the page holds the cohomology of the classifying space of
the stabilizer of its strata, shifted up by the codimension.  Only ranks of
free parts are tracked.  Degrees are complex degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .repmodel import RepresentationModel
from .symfunc import DegreeMultiset, partition_count


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class ColumnSpec:
    codim: int
    degrees: DegreeMultiset
    multiplicity: int = 1
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.degrees, DegreeMultiset):
            object.__setattr__(self, "degrees", DegreeMultiset(self.degrees))
        if self.codim < 0:
            raise SpectralError("codimension must be nonnegative")
        if self.multiplicity < 1:
            raise SpectralError("multiplicity must be positive")

    def rank(self, t: int) -> int:
        """Rank contributed in total degree ``t``."""
        return self.multiplicity * partition_count(t - self.codim, self.degrees)

    def to_json(self) -> dict:
        doc = {"codim": self.codim, "degrees": self.degrees.to_json(),
               "multiplicity": self.multiplicity}
        if self.label:
            doc["label"] = self.label
        return doc

    @classmethod
    def from_json(cls, doc) -> "ColumnSpec":
        try:
            return cls(int(doc["codim"]), DegreeMultiset.from_json(doc.get("degrees", [])),
                       int(doc.get("multiplicity", 1)), str(doc.get("label", "")))
        except (KeyError, TypeError) as e:
            raise SpectralError(f"bad column {doc!r}: {e}") from None


@dataclass(frozen=True)
class RankTable:
    columns: tuple[ColumnSpec, ...]
    max_t: int

    def entry(self, t: int, col: int) -> int:
        return self.columns[col].rank(t)

    def rows(self) -> list[list[int]]:
        """``rows()[t][col]`` for total degree ``t = 0..max_t``."""
        return [[c.rank(t) for c in self.columns] for t in range(self.max_t + 1)]

    def fiber_rows(self, max_j: int) -> list[list[int]]:
        """Ranks by fiber degree: ``[j][col]`` is the column's rank in total degree ``codim + j``."""
        return [[c.rank(c.codim + j) for c in self.columns] for j in range(max_j + 1)]

    def diagonal_sums(self) -> list[int]:
        return [sum(r) for r in self.rows()]

    def to_json(self) -> dict:
        return {"columns": [c.to_json() for c in self.columns], "max_t": self.max_t,
                "ranks": self.rows()}

    def render(self, by_fiber: bool = False) -> str:
        """Aligned text; rows from the top degree down, one column per stratum column."""
        rows = self.fiber_rows(self.max_t) if by_fiber else self.rows()
        heads = [c.label or f"codim {c.codim}" for c in self.columns]
        width = max([len(h) for h in heads] + [len(str(x)) for r in rows for x in r] + [1])
        lead = len(str(len(rows) - 1)) + 1
        out = []
        for t in range(len(rows) - 1, -1, -1):
            cells = " ".join(str(x).rjust(width) if x else ".".rjust(width) for x in rows[t])
            out.append(f"{str(t).rjust(lead)} | {cells}")
        out.append(" " * lead + "-+-" + "-" * (len(heads) * (width + 1) - 1))
        out.append(" " * lead + "   " + " ".join(h.rjust(width) for h in heads))
        return "\n".join(out)


def e1_ranks(columns: Sequence[ColumnSpec], max_t: int) -> RankTable:
    if max_t < 0:
        raise SpectralError("max_t must be nonnegative")
    return RankTable(tuple(columns), max_t)


def diagonal_check(table: RankTable | Sequence[ColumnSpec], ambient: DegreeMultiset | Iterable[int],
                   max_t: int | None = None) -> list[int]:
    """``residual[t] = pi(t, ambient) - sum of column ranks in total degree t``."""
    if not isinstance(table, RankTable):
        table = e1_ranks(table, max_t if max_t is not None else 0)
    if max_t is None:
        max_t = table.max_t
    return [partition_count(t, ambient) - sum(c.rank(t) for c in table.columns)
            for t in range(max_t + 1)]


def predict_stratum_count(known: Sequence[ColumnSpec], ambient: DegreeMultiset | Iterable[int],
                          target_codim: int) -> int:
    """Number of codim-``target_codim`` strata forced by the skew-diagonal sums.

    Assumes each unknown stratum contributes exactly rank one at its corner.
    """
    if any(c.codim >= target_codim for c in known):
        raise SpectralError("known columns must have codimension below the target")
    residual = diagonal_check(known, ambient, target_codim)
    bad = [t for t in range(target_codim) if residual[t] != 0]
    if bad:
        raise SpectralError(f"known columns are inconsistent below the target: residual {residual[bad[0]]} at degree {bad[0]}")
    if residual[target_codim] < 0:
        raise SpectralError(f"negative residual {residual[target_codim]} at the target degree")
    return residual[target_codim]


def euler_identity_check(n: int) -> bool:
    """``p(n) == sum_{s>=1} pi(n - s^2, two copies of 1..s)``.

    The sum starts at ``s = 1``, so ``n = 0`` gives ``1 == 0`` and returns False.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    rhs, s = 0, 1
    while s * s <= n:
        rhs += partition_count(n - s * s, DegreeMultiset.unitary(s, 2))
        s += 1
    return partition_count(n, DegreeMultiset.all_degrees()) == rhs


# -- standard column sets --------------------------------------------------------------


def corank_columns(s_max: int, k: int = 0) -> list[ColumnSpec]:
    """Stable linear maps by corank ``s``: codim ``s(s+k)``, generators of ``U(s) x U(s+k)``."""
    return [ColumnSpec(s * (s + k),
                       DegreeMultiset(list(range(1, s + 1)) + list(range(1, s + k + 1))),
                       label=f"s={s}")
            for s in range(s_max + 1)]


def columns_from_model(model: RepresentationModel, drop: Sequence[str] = ()) -> list[ColumnSpec]:
    """One column per orbit: its codimension and the degrees of its stabilizer generators.

    Factors listed in ``drop`` are left out (the stable ``U(infinity)`` normalization).
    """
    cols = []
    for o in model.orbits:
        degs = [v.degree for v in o.stabilizer.variables if v.factor not in drop]
        cols.append(ColumnSpec(o.codim, DegreeMultiset(degs), label=o.name))
    return cols


def singularity_columns(max_codim: int = 3) -> list[ColumnSpec]:
    """``A_0..A_m`` of equidimensional germs: a trivial column then one ``U(1)`` column each."""
    return [ColumnSpec(0, DegreeMultiset(), label="A_0")] + [
        ColumnSpec(c, DegreeMultiset([1]), label=f"A_{c}") for c in range(1, max_codim + 1)]
