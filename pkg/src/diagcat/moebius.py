"""Moebius idempotents on the coarsening lattice and symmetrizers.

x(f) inverts the coarsening order: f = sum of x(f') over coarsenings f' of
f, so x(f) = f - sum of x(f') over proper coarsenings.  Coefficients are
integers (Moebius numbers of the partition lattice), computed once per
diagram and cached; the cache is only ever filled idempotently, so sharing
it between threads is safe.

x'(f) is the variant that only merges the "active" blocks of f: the blocks
containing lower points, or, for diagrams without lower points, the blocks
of odd size.  Merged groups stay active.  Equivalently, in closed form,

    x'(f) = sum over partitions pi of the active blocks of
            mu(pi) * (f with each group of pi merged)

with mu the partition-lattice Moebius function mu(pi) = prod over groups B
of (-1)^(|B|-1) (|B|-1)!.  Stated as a recursion: x'(f) = f - sum of
x'(f') over proper coarsenings f' obtained by merging active blocks only.
The closed form is what the absorption and computation identities pin down;
the recursion over intrinsically-defined active blocks would differ once a
merge of odd blocks produces an even block, and fails those identities.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from itertools import permutations

from . import partition
from .partition import PartitionDiagram
from .homspace import LinMorphism
from .scalar import FieldSpec

_x_cache: dict[PartitionDiagram, dict[PartitionDiagram, Fraction]] = {}


def _x_terms(f: PartitionDiagram) -> dict[PartitionDiagram, Fraction]:
    cached = _x_cache.get(f)
    if cached is not None:
        return cached
    terms = {f: Fraction(1)}
    for f2 in partition.coarsenings(f, proper=True):
        for d, c in _x_terms(f2).items():
            terms[d] = terms.get(d, Fraction(0)) - c
    terms = {d: c for d, c in terms.items() if c}
    _x_cache[f] = terms
    return terms


def moebius_x(f: PartitionDiagram, field: FieldSpec) -> LinMorphism:
    """x(f): the Moebius inverse of f along the coarsening order."""
    return LinMorphism(
        f.m, f.n, {d: field.rational(c) for d, c in _x_terms(f).items()}
    )


def _partition_moebius(grouping) -> int:
    out = 1
    for group in grouping:
        k = len(group)
        out *= (-1) ** (k - 1) * factorial(k - 1)
    return out


def active_blocks(f: PartitionDiagram):
    """Indices of the blocks x' may merge."""
    if f.n > 0:
        return [i for i, b in enumerate(f.blocks) if f.lower_count(b) > 0]
    return [i for i, b in enumerate(f.blocks) if len(b) % 2 == 1]


def moebius_x_prime(f: PartitionDiagram, field: FieldSpec) -> LinMorphism:
    """x'(f): Moebius inversion merging only the active blocks of f."""
    active = active_blocks(f)
    terms = {}
    for grouping in partition.set_partitions(active):
        c = Fraction(_partition_moebius(grouping))
        d = partition.merge_blocks(f, grouping)
        terms[d] = terms.get(d, Fraction(0)) + c
    return LinMorphism(f.m, f.n, {d: field.rational(c) for d, c in terms.items()})


def symmetrizer(j: int, field: FieldSpec) -> LinMorphism:
    """e_j = (1/j!) sum of all permutation diagrams on j strands."""
    coeff = field.rational(Fraction(1, factorial(j)))
    terms = {}
    for sigma in permutations(range(j)):
        terms[PartitionDiagram.permutation(sigma)] = coeff
    return LinMorphism(j, j, terms)


def x_j(j: int, field: FieldSpec) -> LinMorphism:
    """x(id_[j])."""
    return moebius_x(PartitionDiagram.identity(j), field)


def x_e(j: int, field: FieldSpec) -> LinMorphism:
    """The commuting product x_j e_j, an idempotent on [j]."""
    return x_j(j, field).compose(symmetrizer(j, field), field)


def special_morphisms(name: str, j: int, field: FieldSpec) -> LinMorphism:
    """Named distinguished morphisms.

    p_j: the diagram in P_{j,0} with every point a singleton.
    e_1_sprime: (1/t) * the diagram {{1}, {1'}}, the unit-summand idempotent
    on [1] in the even-many-odd-blocks class; needs t != 0.
    """
    if name == "p_j":
        return LinMorphism.from_diagram(PartitionDiagram.singletons(j), field)
    if name == "e_1_sprime":
        if j != 1:
            raise ValueError("e_1_sprime lives on the word [1]")
        field.require_nonzero_t("e_1_sprime")
        d = PartitionDiagram(1, 1, [(1,), (2,)])
        return LinMorphism(1, 1, {d: field.t_power(1).inv()})
    raise ValueError(f"unknown special morphism {name!r}")
