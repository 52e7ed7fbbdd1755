"""Linear combinations of diagrams and exact linear algebra over the field.

LinMorphism is a formal sum of partition diagrams of one shape with
FieldElement coefficients.  Bilinear composition and tensor extend the
diagram operations, with each loop contributing a factor of t.

ExactMatrix implements Gaussian elimination over the exact field with no
tolerances: rank, kernel, solving, bijectivity.  Subspace is an incremental
row-reduced basis used for span filtering and coordinate queries; it is the
workhorse behind compressed hom-space bases.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from . import partition
from .partition import DiagramClass, PartitionDiagram
from .scalar import FieldElement, FieldSpec


class LinMorphism:
    """A finite formal sum of diagrams in Hom([dom], [cod])."""

    __slots__ = ("dom", "cod", "terms")

    def __init__(self, dom, cod, terms):
        self.dom = dom
        self.cod = cod
        clean = {}
        for d, c in terms.items():
            if d.m != dom or d.n != cod:
                raise ValueError(
                    f"term shape ({d.m},{d.n}) does not match morphism ({dom},{cod})"
                )
            if not c.is_zero():
                clean[d] = c
        self.terms = clean

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, {})

    @classmethod
    def from_diagram(cls, d: PartitionDiagram, field: FieldSpec, coeff=None):
        return cls(d.m, d.n, {d: field.one() if coeff is None else coeff})

    def is_zero(self):
        return not self.terms

    def coefficient(self, d, field: FieldSpec):
        return self.terms.get(d, field.zero())

    def support(self):
        return sorted(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LinMorphism):
            return NotImplemented
        if (self.dom, self.cod) != (other.dom, other.cod):
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[d] == other.terms[d] for d in self.terms)

    __hash__ = None

    def __add__(self, other):
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ValueError("shape mismatch in addition")
        terms = dict(self.terms)
        for d, c in other.terms.items():
            cur = terms.get(d)
            terms[d] = c if cur is None else cur + c
        return LinMorphism(self.dom, self.cod, terms)

    def __neg__(self):
        return LinMorphism(self.dom, self.cod, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: FieldElement):
        if c.is_zero():
            return LinMorphism.zero(self.dom, self.cod)
        return LinMorphism(self.dom, self.cod, {d: c * v for d, v in self.terms.items()})

    def compose(self, other: "LinMorphism", field: FieldSpec) -> "LinMorphism":
        """self after other, bilinear, loops becoming powers of t."""
        if other.cod != self.dom:
            raise ValueError(
                f"shape mismatch: cannot compose ({self.dom},{self.cod}) after "
                f"({other.dom},{other.cod})"
            )
        terms = {}
        for df, cf in other.terms.items():
            for dg, cg in self.terms.items():
                res = partition.compose(dg, df)
                c = cf * cg * field.t_power(res.loops)
                cur = terms.get(res.diagram)
                terms[res.diagram] = c if cur is None else cur + c
        return LinMorphism(other.dom, self.cod, terms)

    def tensor(self, other: "LinMorphism", field: FieldSpec) -> "LinMorphism":
        terms = {}
        for df, cf in self.terms.items():
            for dg, cg in other.terms.items():
                d = partition.tensor(df, dg)
                c = cf * cg
                cur = terms.get(d)
                terms[d] = c if cur is None else cur + c
        return LinMorphism(self.dom + other.dom, self.cod + other.cod, terms)

    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms):
            c = self.terms[d]
            if c.is_one():
                parts.append(f"1 * {d.to_text()}")
            else:
                parts.append(f"{c.to_text()} * {d.to_text()}")
        return " + ".join(parts)

    def __repr__(self):
        return f"LinMorphism({self.dom}, {self.cod}, {self.to_text()!r})"


def lin_bilinear(op: str, a: LinMorphism, b: LinMorphism, field: FieldSpec):
    """Dispatch bilinear 'compose' (a after b) or 'tensor' (a beside b)."""
    if op == "compose":
        return a.compose(b, field)
    if op == "tensor":
        return a.tensor(b, field)
    raise ValueError(f"unknown bilinear operation {op!r}")


def _split_top_level(text, sep=" + "):
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            parts.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


def parse_linmorphism(text, field: FieldSpec, dom=None, cod=None) -> LinMorphism:
    """Parse "c1 * <diagram> + c2 * <diagram> + ..." text."""
    from .scalar import parse_field_element

    stripped = text.strip()
    if stripped == "0":
        if dom is None or cod is None:
            raise ValueError("parsing the zero morphism needs an explicit shape")
        return LinMorphism.zero(dom, cod)
    terms = {}
    for part in _split_top_level(stripped):
        if " * " in part:
            coeff_text, _, diagram_text = part.partition(" * ")
            coeff = parse_field_element(coeff_text, field)
        else:
            coeff, diagram_text = field.one(), part
        d = PartitionDiagram.parse(diagram_text)
        cur = terms.get(d)
        terms[d] = coeff if cur is None else cur + coeff
    shapes = {(d.m, d.n) for d in terms}
    if len(shapes) > 1:
        raise ValueError(f"mixed term shapes {sorted(shapes)} in {text!r}")
    (m, n), = shapes
    if dom is not None and (m, n) != (dom, cod):
        raise ValueError(
            f"term shape ({m},{n}) does not match requested ({dom},{cod})"
        )
    return LinMorphism(m, n, terms)


class HomBasis:
    """The canonical diagram basis of Hom([m], [n]) in a diagram class."""

    __slots__ = ("cls", "m", "n", "diagrams")

    def __init__(self, cls: DiagramClass, m, n):
        self.cls = cls
        self.m = m
        self.n = n
        self.diagrams = tuple(
            sorted(d for d in partition.all_diagrams(m, n) if cls.member(d))
        )

    def __len__(self):
        return len(self.diagrams)

    def __iter__(self):
        return iter(self.diagrams)

    def index(self, d):
        lo, hi = 0, len(self.diagrams)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.diagrams[mid] < d:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.diagrams) and self.diagrams[lo] == d:
            return lo
        raise KeyError(d)


_hom_basis_cache: dict = {}


def hom_basis(cls: DiagramClass, m, n) -> HomBasis:
    key = (cls, m, n)
    basis = _hom_basis_cache.get(key)
    if basis is None:
        basis = _hom_basis_cache[key] = HomBasis(cls, m, n)
    return basis


class Subspace:
    """Incrementally built subspace of a coordinate space, exact arithmetic.

    Rows are kept sparse (index -> coefficient dicts) in echelon form with
    unit leading entries.  Every accepted generator records how its row was
    produced, so membership queries can return coordinates over the accepted
    generators.
    """

    def __init__(self, field: FieldSpec):
        self.field = field
        self.rows = []  # (lead index, row dict, expression over generators)
        self.ngens = 0

    def _reduce(self, vec):
        vec = dict(vec)
        expr = {}
        for lead, row, rexpr in self.rows:
            c = vec.get(lead)
            if c is None or c.is_zero():
                continue
            for j, v in row.items():
                cur = vec.get(j)
                nv = (-c * v) if cur is None else cur - c * v
                if nv.is_zero():
                    vec.pop(j, None)
                else:
                    vec[j] = nv
            for g, v in rexpr.items():
                cur = expr.get(g)
                nv = c * v if cur is None else cur + c * v
                if nv.is_zero():
                    expr.pop(g, None)
                else:
                    expr[g] = nv
        return vec, expr

    def add(self, vec) -> bool:
        """Add a generator; returns True if it enlarged the span."""
        residue, expr = self._reduce(vec)
        gen_index = self.ngens
        self.ngens += 1
        if not residue:
            return False
        lead = min(residue)
        inv = residue[lead].inv()
        row = {j: inv * v for j, v in residue.items()}
        rexpr = {g: -inv * v for g, v in expr.items()}
        rexpr[gen_index] = inv
        self.rows.append((lead, row, rexpr))
        self.rows.sort(key=lambda r: r[0])
        return True

    def dimension(self):
        return len(self.rows)

    def contains(self, vec) -> bool:
        residue, _ = self._reduce(vec)
        return not residue

    def coordinates_of(self, vec):
        """Coordinates over all generators ever added, or None if outside."""
        residue, expr = self._reduce(vec)
        if residue:
            return None
        return expr


class CompressedBasis:
    """Linearly independent subfamily of a spanning set of LinMorphisms.

    Used for idempotent-compressed hom spaces: feed it e ∘ d ∘ e' over the
    diagram basis and it keeps a basis plus coordinate queries in it.
    """

    def __init__(self, candidates: Iterable[LinMorphism], field: FieldSpec):
        candidates = list(candidates)
        index = {}
        for lin in candidates:
            for d in lin.terms:
                if d not in index:
                    index[d] = len(index)
        self.diagram_index = index
        self.field = field
        self.space = Subspace(field)
        self.elements = []
        self._gen_to_element = {}
        for lin in candidates:
            vec = {index[d]: c for d, c in lin.terms.items()}
            gen = self.space.ngens
            if self.space.add(vec):
                self._gen_to_element[gen] = len(self.elements)
                self.elements.append(lin)

    def __len__(self):
        return len(self.elements)

    def _vector_of(self, lin: LinMorphism):
        vec = {}
        for d, c in lin.terms.items():
            j = self.diagram_index.get(d)
            if j is None:
                return None, d
            vec[j] = c
        return vec, None

    def coordinates_of(self, lin: LinMorphism):
        """Coefficients over the chosen basis, or None if lin is outside."""
        vec, escape = self._vector_of(lin)
        if vec is None:
            return None
        expr = self.space.coordinates_of(vec)
        if expr is None:
            return None
        out = [self.field.zero()] * len(self.elements)
        for gen, c in expr.items():
            out[self._gen_to_element[gen]] = c
        return out


class ExactMatrix:
    """Dense matrix over the exact field with elimination-based solvers."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, rows, cols, entries, field: FieldSpec):
        self.rows = rows
        self.cols = cols
        self.entries = [list(r) for r in entries]
        self.field = field
        if len(self.entries) != rows or any(len(r) != cols for r in self.entries):
            raise ValueError("entry grid does not match declared shape")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[FieldElement]], rows, field):
        entries = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(rows, len(columns), entries, field)

    def _rref(self, augmented=None):
        zero = self.field.zero()
        work = [list(r) for r in self.entries]
        aug = [list(r) for r in augmented] if augmented is not None else None
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot_row = None
            for i in range(r, self.rows):
                if not work[i][c].is_zero():
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            work[r], work[pivot_row] = work[pivot_row], work[r]
            if aug is not None:
                aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
            inv = work[r][c].inv()
            if not inv.is_one():
                work[r] = [v * inv for v in work[r]]
                if aug is not None:
                    aug[r] = [v * inv for v in aug[r]]
            nz = [j for j in range(c, self.cols) if not work[r][j].is_zero()]
            for i in range(self.rows):
                if i == r:
                    continue
                factor = work[i][c]
                if factor.is_zero():
                    continue
                rowr, rowi = work[r], work[i]
                for j in nz:
                    rowi[j] = rowi[j] - factor * rowr[j]
                if aug is not None:
                    ar, ai = aug[r], aug[i]
                    for j in range(len(ar)):
                        if not ar[j].is_zero():
                            ai[j] = ai[j] - factor * ar[j]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return work, pivots, aug

    def rank(self) -> int:
        _, pivots, _ = self._rref()
        return len(pivots)

    def kernel_basis(self):
        """Basis vectors (as lists) of the right kernel."""
        work, pivots, _ = self._rref()
        zero, one = self.field.zero(), self.field.one()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        out = []
        for fc in free:
            vec = [zero] * self.cols
            vec[fc] = one
            for r, pc in enumerate(pivots):
                v = work[r][fc]
                if not v.is_zero():
                    vec[pc] = -v
            out.append(vec)
        return out

    def solve(self, b: Sequence[FieldElement]):
        """A particular solution of A x = b (free variables zero), or None."""
        if len(b) != self.rows:
            raise ValueError("right-hand side length mismatch")
        work, pivots, aug = self._rref(augmented=[[v] for v in b])
        zero = self.field.zero()
        for i in range(len(pivots), self.rows):
            if not aug[i][0].is_zero():
                return None
        x = [zero] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = aug[r][0]
        return x

    def is_bijective(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def multiply_vector(self, x):
        if len(x) != self.cols:
            raise ValueError("vector length mismatch")
        zero = self.field.zero()
        out = []
        for i in range(self.rows):
            acc = zero
            row = self.entries[i]
            for j, v in enumerate(x):
                if not v.is_zero() and not row[j].is_zero():
                    acc = acc + row[j] * v
            out.append(acc)
        return out


def solve_exact(matrix: ExactMatrix, mode: str, rhs=None):
    """Dispatch: mode in {rank, kernel, solve, is_bijective}."""
    if mode == "rank":
        return matrix.rank()
    if mode == "kernel":
        return matrix.kernel_basis()
    if mode == "solve":
        return matrix.solve(rhs)
    if mode == "is_bijective":
        return matrix.is_bijective()
    raise ValueError(f"unknown solve mode {mode!r}")


def matrix_of(
    fn: Callable[[LinMorphism], LinMorphism],
    domain,
    codomain,
    field: FieldSpec,
) -> ExactMatrix:
    """Matrix of a linear map given by fn on a domain basis.

    domain: HomBasis or sequence of LinMorphisms; codomain: HomBasis (diagram
    coordinates) or CompressedBasis.  If an image does not lie in the span of
    the codomain, raises with the offending diagram.
    """
    if isinstance(domain, HomBasis):
        dom_elems = [LinMorphism.from_diagram(d, field) for d in domain]
    else:
        dom_elems = list(domain)
    columns = []
    if isinstance(codomain, HomBasis):
        rows = len(codomain)
        lookup = {d: i for i, d in enumerate(codomain.diagrams)}
        for elem in dom_elems:
            image = fn(elem)
            col = [field.zero()] * rows
            for d, c in image.terms.items():
                i = lookup.get(d)
                if i is None:
                    raise ValueError(
                        f"image escapes codomain span at diagram {d.to_text()!r}"
                    )
                col[i] = c
            columns.append(col)
    else:
        rows = len(codomain)
        for elem in dom_elems:
            image = fn(elem)
            coords = codomain.coordinates_of(image)
            if coords is None:
                offender = image.support()[0] if image.terms else None
                raise ValueError(
                    "image escapes codomain span"
                    + (f" at diagram {offender.to_text()!r}" if offender else "")
                )
            columns.append(coords)
    return ExactMatrix.from_columns(columns, rows, field)
