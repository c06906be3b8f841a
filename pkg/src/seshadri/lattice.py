"""Integer intersection lattices, divisor classes and positivity tests.

A lattice is a symmetric integer Gram matrix with labeled basis vectors.
Nef testing is always relative to a declared finite curve-generator set
whose completeness the caller vouches for; that trust boundary is an
explicit flag on the generator set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class IntersectionLattice:
    rank: int
    gram: Tuple[Tuple[int, ...], ...]
    basis_labels: Tuple[str, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise LatticeError(f"rank must be positive, got {self.rank}")
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        if len(gram) != self.rank or any(len(row) != self.rank for row in gram):
            raise LatticeError(f"gram matrix is not {self.rank}x{self.rank}")
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(
                        f"gram matrix not symmetric at ({i},{j}): "
                        f"{gram[i][j]} != {gram[j][i]}"
                    )
        if len(self.basis_labels) != self.rank:
            raise LatticeError("basis_labels length differs from rank")
        if len(set(self.basis_labels)) != self.rank:
            raise LatticeError("basis_labels are not distinct")

    def divisor(self, coords: Sequence[int]) -> "DivisorClass":
        return DivisorClass(self, tuple(int(c) for c in coords))

    def basis_vector(self, label: str) -> "DivisorClass":
        i = self.basis_labels.index(label)
        return self.divisor(tuple(1 if j == i else 0 for j in range(self.rank)))


@dataclass(frozen=True)
class DivisorClass:
    lattice: IntersectionLattice
    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.lattice.rank:
            raise LatticeError(
                f"coordinate length {len(coords)} differs from rank {self.lattice.rank}"
            )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _require_same_lattice(self, other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _require_same_lattice(self, other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(k * c for c in self.coords))

    def __repr__(self) -> str:
        terms = [f"{c}*{l}" for c, l in zip(self.coords, self.lattice.basis_labels) if c]
        return "DivisorClass(" + (" + ".join(terms) if terms else "0") + ")"


def _require_same_lattice(u: DivisorClass, v: DivisorClass) -> None:
    if u.lattice != v.lattice:
        raise LatticeError("divisor classes live on different lattices")


def pair(u: DivisorClass, v: DivisorClass) -> int:
    """Intersection number u.v = u^T * gram * v, exactly."""
    _require_same_lattice(u, v)
    gram = u.lattice.gram
    total = 0
    for i, a in enumerate(u.coords):
        if a == 0:
            continue
        row = gram[i]
        total += a * sum(row[j] * b for j, b in enumerate(v.coords) if b)
    return total


@dataclass(frozen=True)
class CurveGeneratorSet:
    """Finite list of curve classes asserted (or not) to generate the
    effective curve cone.  Nef verdicts are only certificates when the
    completeness flag is set."""

    generators: Tuple[Tuple[str, DivisorClass], ...]
    completeness_assertion: bool = True

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for label, cls in self.generators:
            if cls.is_zero():
                raise LatticeError(f"generator {label!r} is the zero class")


def is_nef_against(D: DivisorClass, gens: CurveGeneratorSet) -> bool:
    """True iff D.C >= 0 for every generator C.  Meaningful as a nef
    certificate only under gens.completeness_assertion."""
    if not gens.completeness_assertion:
        raise LatticeError("nef test requires a completeness-asserted generator set")
    return all(pair(D, cls) >= 0 for _, cls in gens.generators)


def is_strictly_positive_against(D: DivisorClass, gens: Iterable[DivisorClass]) -> bool:
    """Strict positivity D.C > 0 against every listed class, plus D^2 > 0:
    the plausible-ampleness gate for a supplied polarization."""
    if pair(D, D) <= 0:
        return False
    return all(pair(D, cls) > 0 for cls in gens)


def extend_blowup(lat: IntersectionLattice, label: str) -> IntersectionLattice:
    """Rank+1 lattice of a point blow-up: new basis vector with
    self-intersection -1, orthogonal to the old block."""
    if label in lat.basis_labels:
        raise LatticeError(f"duplicate basis label {label!r}")
    n = lat.rank
    gram = [list(row) + [0] for row in lat.gram]
    gram.append([0] * n + [-1])
    return IntersectionLattice(
        rank=n + 1,
        gram=tuple(tuple(row) for row in gram),
        basis_labels=lat.basis_labels + (label,),
    )


def lift(extended: IntersectionLattice, D: DivisorClass) -> DivisorClass:
    """Total transform of an old class in the blow-up lattice (append a
    zero exceptional coordinate)."""
    if extended.rank != D.lattice.rank + 1:
        raise LatticeError("lift target must have rank one higher")
    return extended.divisor(D.coords + (0,))


def pushforward(base: IntersectionLattice, D: DivisorClass) -> DivisorClass:
    """Image of a blow-up class downstairs (drop the exceptional
    coordinate)."""
    if D.lattice.rank != base.rank + 1:
        raise LatticeError("pushforward source must have rank one higher")
    return base.divisor(D.coords[:-1])
