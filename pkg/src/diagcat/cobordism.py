"""Normal-form 2d cobordisms over a Frobenius algebra datum.

A morphism [m] -> [n] is a disjoint union of connected oriented surfaces,
remembered only up to the invariant that survives the relations: which
boundary circles each component carries and its genus.  A datum (alpha, u)
fixes the scalars: a closed genus-i component becomes the scalar alpha(i),
and a handle polynomial u caps the genus, with x^g reduced mod u.

Gluing is union-find over the shared interface circles; the genus of a
merged component comes from additivity of the Euler characteristic,
g = 1 - (r + sum_i (2 - 2 g_i - b_i)) / 2, where r counts the surviving
boundary circles.  The formula is exercised against the torus and
pair-of-pants examples in the test suite before anything else trusts it.
"""

from __future__ import annotations

from fractions import Fraction

from .partition import PartitionDiagram, _UnionFind, DiagramParseError
from .scalar import FieldElement, FieldSpec, Poly, poly_divmod


class FrobeniusDatum:
    """Genus scalars alpha(i) generated by initial values and a monic u."""

    __slots__ = ("field", "alpha_init", "u", "_alpha")

    def __init__(self, field: FieldSpec, alpha_init, u: Poly):
        if u.degree() < 1:
            raise ValueError("u must have degree at least 1")
        if not u.is_monic():
            raise ValueError("u must be monic")
        if len(alpha_init) != u.degree():
            raise ValueError(
                f"need {u.degree()} initial alpha values, got {len(alpha_init)}"
            )
        self.field = field
        self.alpha_init = tuple(alpha_init)
        self.u = u
        self._alpha = list(self.alpha_init)

    def degree(self) -> int:
        return self.u.degree()

    def alpha(self, i: int) -> FieldElement:
        """alpha_i, extended by alpha_{j+d} = -sum_{i<d} u_i alpha_{i+j}."""
        if i < 0:
            raise ValueError("alpha index must be nonnegative")
        d = self.degree()
        while len(self._alpha) <= i:
            j = len(self._alpha) - d
            acc = self.field.zero()
            for k in range(d):
                c = self.u.coeffs[k]
                if c:
                    acc = acc + self.field.rational(c) * self._alpha[j + k]
            self._alpha.append(-acc)
        return self._alpha[i]

    def genus_expansion(self, g: int):
        """Coefficients c_i with x^g = sum c_i x^i mod u, i < deg u."""
        _, rem = poly_divmod(Poly.x_power(g), self.u)
        return rem.coeffs

    def describe(self) -> str:
        from .scalar import poly_text

        init = ", ".join(a.to_text() for a in self.alpha_init)
        return f"alpha=({init}), u={poly_text(self.u, 'x')}"


def validate_datum(alpha_init, u: Poly, field: FieldSpec) -> FrobeniusDatum:
    return FrobeniusDatum(field, alpha_init, u)


def st_datum(field: FieldSpec) -> FrobeniusDatum:
    """alpha = (t, t, ...), u = x - 1."""
    return FrobeniusDatum(field, (field.t(),), Poly((Fraction(-1), Fraction(1))))


def fibonacci_datum(field: FieldSpec) -> FrobeniusDatum:
    """alpha = (1, 2, 3, 5, ...), u = x^2 - x - 1."""
    one = field.one()
    two = field.rational(Fraction(2))
    return FrobeniusDatum(
        field, (one, two), Poly((Fraction(-1), Fraction(-1), Fraction(1)))
    )


class Cobordism:
    """Components (circle tuple, genus) over circles 1..m upper, then lower.

    Closed components (empty circle tuple) and large genera are allowed so
    that intermediate gluing results are representable; normal form under a
    datum additionally demands no closed components and genus < deg u.
    """

    __slots__ = ("m", "n", "components")

    def __init__(self, m: int, n: int, components):
        comps = []
        seen = set()
        for circles, genus in components:
            circles = tuple(sorted(circles))
            if genus < 0:
                raise ValueError("genus must be nonnegative")
            for p in circles:
                if not 1 <= p <= m + n:
                    raise ValueError(f"circle {p} out of range for ({m},{n})")
                if p in seen:
                    raise ValueError(f"circle {p} used twice")
                seen.add(p)
            comps.append((circles, genus))
        if len(seen) != m + n:
            missing = min(set(range(1, m + n + 1)) - seen, default=0)
            raise ValueError(f"boundary circle {missing} not covered")
        self.m = m
        self.n = n
        self.components = tuple(sorted(comps))

    @classmethod
    def identity(cls, n: int) -> "Cobordism":
        return cls(n, n, [((i, n + i), 0) for i in range(1, n + 1)])

    @classmethod
    def from_partition(cls, d: PartitionDiagram) -> "Cobordism":
        return cls(d.m, d.n, [(b, 0) for b in d.blocks])

    def is_normal_form(self, datum: FrobeniusDatum) -> bool:
        return all(
            circles and genus < datum.degree() for circles, genus in self.components
        )

    def key(self):
        return (self.m, self.n, self.components)

    def __eq__(self, other):
        return isinstance(other, Cobordism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def _label(self, p: int) -> str:
        return str(p) if p <= self.m else f"{p - self.m}'"

    def to_text(self) -> str:
        if not self.components:
            return "<empty>"
        parts = []
        for circles, genus in self.components:
            body = " ".join(self._label(p) for p in circles)
            parts.append(f"g={genus}: {body}" if body else f"g={genus}:")
        return " | ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Cobordism":
        text = text.strip()
        if text == "<empty>":
            return cls(0, 0, [])
        raw = []
        max_upper = 0
        max_lower = 0
        for part in text.split("|"):
            part = part.strip()
            if ":" not in part:
                raise DiagramParseError(f"component missing 'g=..:' prefix: {part!r}")
            head, _, body = part.partition(":")
            head = head.strip()
            if not head.startswith("g=") or not head[2:].isdigit():
                raise DiagramParseError(f"bad genus prefix {head!r}")
            genus = int(head[2:])
            circles = []
            for tok in body.split():
                if tok.endswith("'") and tok[:-1].isdigit() and int(tok[:-1]) > 0:
                    circles.append(("lower", int(tok[:-1])))
                    max_lower = max(max_lower, int(tok[:-1]))
                elif tok.isdigit() and int(tok) > 0:
                    circles.append(("upper", int(tok)))
                    max_upper = max(max_upper, int(tok))
                else:
                    raise DiagramParseError(f"bad token {tok!r}")
            raw.append((circles, genus))
        comps = [
            (
                tuple(p if side == "upper" else max_upper + p for side, p in circles),
                genus,
            )
            for circles, genus in raw
        ]
        return cls(max_upper, max_lower, comps)

    def __repr__(self):
        return f'Cobordism({self.m}, {self.n}, "{self.to_text()}")'


def generator(name: str) -> Cobordism:
    """The structure maps: unit, counit, product, coproduct, handle."""
    table = {
        "eta": (0, 1, [((1,), 0)]),
        "eps": (1, 0, [((1,), 0)]),
        "mu": (2, 1, [((1, 2, 3), 0)]),
        "delta": (1, 2, [((1, 2, 3), 0)]),
        "phi": (1, 1, [((1, 2), 1)]),
    }
    if name not in table:
        raise ValueError(f"unknown generator {name!r}")
    return Cobordism(*table[name])


class CobLin:
    """A formal FieldElement-weighted sum of cobordisms [dom] -> [cod]."""

    __slots__ = ("dom", "cod", "terms")

    def __init__(self, dom: int, cod: int, terms):
        self.dom = dom
        self.cod = cod
        clean = {}
        for c, coeff in terms.items():
            if (c.m, c.n) != (dom, cod):
                raise ValueError(
                    f"term shape ({c.m},{c.n}) does not match morphism ({dom},{cod})"
                )
            if not coeff.is_zero():
                clean[c] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, {})

    @classmethod
    def from_cobordism(cls, c: Cobordism, field: FieldSpec, coeff=None):
        return cls(c.m, c.n, {c: field.one() if coeff is None else coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, CobLin)
            and (self.dom, self.cod) == (other.dom, other.cod)
            and self.terms == other.terms
        )

    def __add__(self, other):
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ValueError("shape mismatch in sum")
        out = dict(self.terms)
        for c, coeff in other.terms.items():
            cur = out.get(c)
            out[c] = coeff if cur is None else cur + coeff
        return CobLin(self.dom, self.cod, out)

    def scale(self, coeff: FieldElement):
        return CobLin(
            self.dom, self.cod, {c: coeff * v for c, v in self.terms.items()}
        )

    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for c in sorted(self.terms):
            parts.append(f"{self.terms[c].to_text()} * {c.to_text()}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CobLin({self.dom}, {self.cod}, {self.to_text()!r})"


def reduce_normal_form(c: Cobordism, datum: FrobeniusDatum) -> CobLin:
    """Strip closed components via alpha and cap every genus below deg u."""
    field = datum.field
    d = datum.degree()
    branches = [([], field.one())]
    for circles, genus in c.components:
        if not circles:
            scalar = datum.alpha(genus)
            branches = [(comps, coeff * scalar) for comps, coeff in branches]
            continue
        if genus < d:
            for comps, _ in branches:
                comps.append((circles, genus))
            continue
        expansion = [
            (i, coeff)
            for i, coeff in enumerate(datum.genus_expansion(genus))
            if coeff
        ]
        new_branches = []
        for comps, coeff in branches:
            for g2, q in expansion:
                new_branches.append(
                    (comps + [(circles, g2)], coeff * field.rational(q))
                )
        branches = new_branches
    terms = {}
    for comps, coeff in branches:
        cob = Cobordism(c.m, c.n, comps)
        cur = terms.get(cob)
        terms[cob] = coeff if cur is None else cur + coeff
    return CobLin(c.m, c.n, terms)


def glue_raw(g: Cobordism, f: Cobordism) -> Cobordism:
    """Glue f's lower circles to g's upper circles; no reduction."""
    if f.n != g.m:
        raise ValueError(
            f"shape mismatch: cannot glue ({g.m},{g.n}) after ({f.m},{f.n})"
        )
    m, k, n = f.m, f.n, g.n
    # node ids: f components then g components
    uf = _UnionFind(len(f.components) + len(g.components))
    f_owner = {}
    for idx, (circles, _) in enumerate(f.components):
        for p in circles:
            if p > m:
                f_owner[p - m] = idx
    for idx, (circles, _) in enumerate(g.components):
        for p in circles:
            if p <= k:
                uf.union(f_owner[p], len(f.components) + idx)
    groups = {}
    for idx, comp in enumerate(f.components):
        groups.setdefault(uf.find(idx), []).append(("f", comp))
    for idx, comp in enumerate(g.components):
        groups.setdefault(uf.find(len(f.components) + idx), []).append(("g", comp))
    out = []
    for members in groups.values():
        chi = 0
        free = []
        for side, (circles, genus) in members:
            chi += 2 - 2 * genus - len(circles)
            for p in circles:
                if side == "f" and p <= m:
                    free.append(p)
                elif side == "g" and p > k:
                    free.append(m + (p - k))
        r = len(free)
        if (r + chi) % 2:
            raise AssertionError("odd Euler characteristic sum in gluing")
        genus = 1 - (r + chi) // 2
        if genus < 0:
            raise AssertionError("negative genus in gluing")
        out.append((tuple(sorted(free)), genus))
    return Cobordism(m, n, out)


def glue(g: Cobordism, f: Cobordism, datum: FrobeniusDatum) -> CobLin:
    return reduce_normal_form(glue_raw(g, f), datum)


def cob_compose(g: CobLin, f: CobLin, datum: FrobeniusDatum) -> CobLin:
    """Bilinear extension of glue; g after f."""
    if f.cod != g.dom:
        raise ValueError("shape mismatch in composition")
    out = CobLin.zero(f.dom, g.cod)
    for cf, af in f.terms.items():
        for cg, ag in g.terms.items():
            out = out + glue(cg, cf, datum).scale(af * ag)
    return out


def cob_tensor(a: Cobordism, b: Cobordism) -> Cobordism:
    comps = []
    for circles, genus in a.components:
        comps.append(
            (tuple(p if p <= a.m else p + b.m for p in circles), genus)
        )
    for circles, genus in b.components:
        comps.append(
            (
                tuple(p + a.m if p <= b.m else p + a.m + a.n for p in circles),
                genus,
            )
        )
    return Cobordism(a.m + b.m, a.n + b.n, comps)


def partition_to_cob(d: PartitionDiagram) -> Cobordism:
    return Cobordism.from_partition(d)


def cob_to_partition(c: Cobordism) -> PartitionDiagram:
    for circles, genus in c.components:
        if not circles:
            raise ValueError("closed component has no partition counterpart")
        if genus:
            raise ValueError("positive genus has no partition counterpart")
    return PartitionDiagram(c.m, c.n, [circles for circles, _ in c.components])


def partition_crosscheck(f: PartitionDiagram, g: PartitionDiagram) -> bool:
    """Compare f after g through partitions against the S_t cobordism route."""
    from .partition import compose

    field = FieldSpec.generic()
    datum = st_datum(field)
    diagram, loops = compose(f, g)
    expected = CobLin.from_cobordism(
        partition_to_cob(diagram), field, field.t_power(loops)
    )
    got = glue(partition_to_cob(f), partition_to_cob(g), datum)
    return got == expected
