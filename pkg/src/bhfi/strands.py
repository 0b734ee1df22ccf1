"""Pointed matched circles and the weight-0 summand of their strands algebras.

Everything is exact arithmetic over F2.  A basis element of the algebra is a
strand diagram: a set of moving strands (strictly increasing arcs between
marked points) together with a set of "smeared" horizontal strands, one per
matched pair.  Products and differentials are computed by expanding each
smeared diagram into its point-level placements, applying the usual strands
composition / crossing-resolution rules there, and re-collecting.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field


def _as_pairs(matching):
    return tuple(sorted(tuple(sorted(p)) for p in matching))


@dataclass(frozen=True)
class PointedMatchedCircle:
    """A circle with 4k marked points and a 2-to-1 matching.

    Points are linearly ordered 1..4k (the basepoint sits between 4k and 1
    and is never crossed by a chord).  Matched pairs are labeled 1..2k in
    order of their smallest point.
    """

    k: int
    matching: tuple = ()
    reversed_orientation: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("genus must be a positive integer")
        matching = _as_pairs(self.matching)
        object.__setattr__(self, "matching", matching)
        points = [p for pair in matching for p in pair]
        if sorted(points) != list(range(1, 4 * self.k + 1)):
            raise ValueError("matching must pair up the points 1..4k")
        if len(matching) != 2 * self.k:
            raise ValueError("matching must consist of 2k pairs")

    @property
    def n_points(self):
        return 4 * self.k

    @property
    def pairs(self):
        """Pair labels, 1..2k."""
        return tuple(range(1, 2 * self.k + 1))

    def pair_label(self, point):
        for idx, pair in enumerate(self.matching, start=1):
            if point in pair:
                return idx
        raise ValueError(f"no such point: {point}")

    def pair_points(self, label):
        return self.matching[label - 1]

    def reflect_point(self, point):
        return self.n_points + 1 - point

    def reflect_pair_label(self, label):
        a, b = self.pair_points(label)
        return self.pair_label(self.reflect_point(a))

    def reverse(self):
        """Orientation reverse; reversing twice gives back the original."""
        refl = [(self.reflect_point(a), self.reflect_point(b))
                for a, b in self.matching]
        return PointedMatchedCircle(self.k, _as_pairs(refl),
                                    not self.reversed_orientation)

    def to_json(self):
        return {"k": self.k, "matching": [list(p) for p in self.matching]}

    @staticmethod
    def from_json(data):
        return PointedMatchedCircle(int(data["k"]),
                                    tuple(map(tuple, data["matching"])))

    def __repr__(self):
        tag = "-" if self.reversed_orientation else ""
        return f"PMC({tag}k={self.k})"


def split_pmc(k):
    """The split circle of genus k: pairs {4i+1, 4i+3} and {4i+2, 4i+4}."""
    if k < 1:
        raise ValueError("genus must be a positive integer")
    matching = []
    for i in range(k):
        matching.append((4 * i + 1, 4 * i + 3))
        matching.append((4 * i + 2, 4 * i + 4))
    return PointedMatchedCircle(k, tuple(matching))


# ---------------------------------------------------------------------------
# point-level diagrams: frozensets of strands (i, j) with i <= j; i == j is a
# horizontal strand pinned at one point.

def _inversions(strands):
    inv = 0
    for (i1, j1), (i2, j2) in itertools.combinations(sorted(strands), 2):
        if (i1 - i2) * (j1 - j2) < 0:
            inv += 1
    return inv


def _mul_points(x, y):
    """Compose two point-level diagrams; None when the product vanishes."""
    if {j for _, j in x} != {i for i, _ in y}:
        return None
    cont = {i: j for i, j in y}
    out = frozenset((i, cont[j]) for i, j in x)
    if _inversions(out) != _inversions(x) + _inversions(y):
        return None
    return out


def _diff_points(x):
    """Single-crossing resolutions that drop the crossing number by one."""
    strands = sorted(x)
    inv_x = _inversions(x)
    out = []
    for s1, s2 in itertools.combinations(strands, 2):
        (i1, j1), (i2, j2) = s1, s2
        if (i1 - i2) * (j1 - j2) >= 0:
            continue
        res = (x - {s1, s2}) | {(i1, j2), (i2, j1)}
        if len(res) == len(x) and _inversions(res) == inv_x - 1:
            out.append(res)
    return out


@dataclass(frozen=True)
class StrandDiagram:
    """Basis element of the weight-0 strands algebra of a matched circle.

    ``moving`` holds the strictly increasing strands on points; ``horizontal``
    the matched-pair labels carrying a smeared horizontal strand.  The left
    and right idempotents are derived data.
    """

    circle: PointedMatchedCircle
    moving: tuple = ()
    horizontal: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        moving = tuple(sorted(tuple(s) for s in self.moving))
        horizontal = frozenset(self.horizontal)
        object.__setattr__(self, "moving", moving)
        object.__setattr__(self, "horizontal", horizontal)
        Z = self.circle
        srcs = [Z.pair_label(i) for i, _ in moving]
        dsts = [Z.pair_label(j) for _, j in moving]
        for i, j in moving:
            if not 1 <= i < j <= Z.n_points:
                raise ValueError(f"strand {(i, j)} is not strictly increasing")
        if len(set(i for i, _ in moving)) != len(moving) or \
           len(set(j for _, j in moving)) != len(moving):
            raise ValueError("moving strands must have distinct endpoints")
        if len(set(srcs)) != len(moving) or len(set(dsts)) != len(moving):
            raise ValueError("two strands occupy one matched pair")
        if horizontal & set(srcs) or horizontal & set(dsts):
            raise ValueError("horizontal pair clashes with a moving strand")
        if len(moving) + len(horizontal) != Z.k:
            raise ValueError("not a weight-0 diagram (need k occupied pairs)")

    @property
    def left_idem(self):
        Z = self.circle
        return frozenset(Z.pair_label(i) for i, _ in self.moving) | self.horizontal

    @property
    def right_idem(self):
        Z = self.circle
        return frozenset(Z.pair_label(j) for _, j in self.moving) | self.horizontal

    @property
    def is_idempotent(self):
        return not self.moving

    def sort_key(self):
        return (tuple(sorted(self.left_idem)), self.moving,
                tuple(sorted(self.horizontal)))

    def expansions(self):
        """All point-level placements of the smeared horizontal strands."""
        Z = self.circle
        choices = [Z.pair_points(p) for p in sorted(self.horizontal)]
        out = []
        for pick in itertools.product(*choices):
            out.append(frozenset(self.moving) |
                       frozenset((p, p) for p in pick))
        return out

    @property
    def label(self):
        parts = [f"r{i}.{j}" for i, j in self.moving]
        parts += [f"h{p}" for p in sorted(self.horizontal)]
        return "_".join(parts)

    def reflect(self):
        """The corresponding diagram of the orientation-reversed circle,
        written back in the coordinates of the (reflection-symmetric) circle."""
        Z = self.circle
        moving = tuple(sorted((Z.reflect_point(j), Z.reflect_point(i))
                              for i, j in self.moving))
        horizontal = frozenset(Z.reflect_pair_label(p) for p in self.horizontal)
        return StrandDiagram(Z, moving, horizontal)

    def to_json(self):
        return {"left_idem": sorted(self.left_idem),
                "moving": [list(s) for s in self.moving],
                "horizontal": sorted(self.horizontal)}

    def __repr__(self):
        return self.label


@dataclass(frozen=True)
class AlgebraElement:
    """An F2 linear combination of strand diagrams over one circle."""

    circle: PointedMatchedCircle
    terms: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "terms", frozenset(self.terms))
        for t in self.terms:
            if t.circle != self.circle:
                raise ValueError("terms over a different circle")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.circle, self.terms ^ other.terms)

    def __mul__(self, other):
        self._check(other)
        alg = algebra(self.circle)
        acc = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= alg.mul_basis(a, b)
        return AlgebraElement(self.circle, frozenset(acc))

    def d(self):
        alg = algebra(self.circle)
        acc = set()
        for a in self.terms:
            acc ^= alg.diff_basis(a)
        return AlgebraElement(self.circle, frozenset(acc))

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.circle != self.circle:
            raise ValueError("operands lie over different circles")

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms, key=StrandDiagram.sort_key)

    def to_json(self):
        return [t.to_json() for t in self.sorted_terms()]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(t.label for t in self.sorted_terms())


def _collect(circle, point_diagrams):
    """Regroup an F2 set of point-level diagrams into smeared basis terms.

    The weight-0 algebra is closed under product and differential, so every
    group of placements must be complete; anything else is a logic error.
    """
    groups = {}
    for pd in point_diagrams:
        moving = tuple(sorted((i, j) for i, j in pd if i < j))
        horiz = frozenset(circle.pair_label(i) for i, j in pd if i == j)
        groups.setdefault((moving, horiz), set()).add(pd)
    out = set()
    for (moving, horiz), got in groups.items():
        diag = StrandDiagram(circle, moving, horiz)
        if set(diag.expansions()) != got:
            raise AssertionError("incomplete smeared group; not in the algebra")
        out.add(diag)
    return frozenset(out)


class StrandsAlgebra:
    """The weight-0 summand of the strands algebra of a matched circle.

    Caches the canonical basis together with product / differential tables
    and the reverse lookups the relation checkers need.
    """

    def __init__(self, circle):
        self.circle = circle
        self._mul_cache = {}
        self._diff_cache = {}
        self._tables = None

    # -- basis ---------------------------------------------------------

    @property
    def basis(self):
        return self._basis()

    def _basis(self):
        if not hasattr(self, "_basis_cached"):
            self._basis_cached = tuple(sorted(self._enumerate_basis(),
                                              key=StrandDiagram.sort_key))
        return self._basis_cached

    def _enumerate_basis(self):
        Z = self.circle
        strands = [(i, j) for i in range(1, Z.n_points + 1)
                   for j in range(i + 1, Z.n_points + 1)]
        out = []
        for m in range(Z.k + 1):
            for combo in itertools.combinations(strands, m):
                srcs = [Z.pair_label(i) for i, _ in combo]
                dsts = [Z.pair_label(j) for _, j in combo]
                if len(set(i for i, _ in combo)) != m or \
                   len(set(j for _, j in combo)) != m:
                    continue
                if len(set(srcs)) != m or len(set(dsts)) != m:
                    continue
                free = [p for p in Z.pairs if p not in srcs and p not in dsts]
                for horiz in itertools.combinations(free, Z.k - m):
                    out.append(StrandDiagram(Z, combo, frozenset(horiz)))
        return out

    @property
    def idempotent_diagrams(self):
        return tuple(d for d in self.basis if d.is_idempotent)

    def idempotent(self, pairs):
        """The basic idempotent occupying the given matched pairs."""
        return StrandDiagram(self.circle, (), frozenset(pairs))

    def unit(self):
        return AlgebraElement(self.circle,
                              frozenset(self.idempotent_diagrams))

    def element(self, diagrams):
        return AlgebraElement(self.circle, frozenset(diagrams))

    def zero(self):
        return AlgebraElement(self.circle)

    # -- ring operations -------------------------------------------------

    def mul_basis(self, a, b):
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        acc = set()
        if a.right_idem == b.left_idem:
            for xa in a.expansions():
                for xb in b.expansions():
                    prod = _mul_points(xa, xb)
                    if prod is not None:
                        acc ^= {prod}
        out = _collect(self.circle, acc)
        self._mul_cache[key] = out
        return out

    def diff_basis(self, a):
        hit = self._diff_cache.get(a)
        if hit is not None:
            return hit
        acc = set()
        for xa in a.expansions():
            for res in _diff_points(xa):
                acc ^= {res}
        out = _collect(self.circle, acc)
        self._diff_cache[a] = out
        return out

    def mul_many(self, factors):
        """Fold a nonempty list of basis elements; F2 set of basis terms."""
        acc = {factors[0]}
        for b in factors[1:]:
            nxt = set()
            for a in acc:
                nxt ^= self.mul_basis(a, b)
            acc = nxt
            if not acc:
                break
        return frozenset(acc)

    # -- idempotent bookkeeping (generic-algebra interface) ---------------

    is_trivial = False

    @staticmethod
    def left_idem_of(a):
        return a.left_idem

    @staticmethod
    def right_idem_of(a):
        return a.right_idem

    @staticmethod
    def is_idem(a):
        return a.is_idempotent

    @staticmethod
    def sort_key(a):
        return a.sort_key()

    @staticmethod
    def label_of(a):
        return a.label

    @staticmethod
    def idem_sort_key(idem):
        return tuple(sorted(idem))

    def idem_element(self, idem_key):
        return self.idempotent(idem_key)

    @property
    def idem_keys(self):
        return tuple(d.left_idem for d in self.idempotent_diagrams)

    def basis_between(self, left, right):
        """Canonically ordered basis elements with the given idempotents."""
        self._ensure_tables()
        return self._between.get((frozenset(left), frozenset(right)), ())

    # -- reverse lookup tables for relation checking ----------------------

    def _ensure_tables(self):
        if self._tables is not None:
            return
        mul_pre = {}
        diff_pre = {}
        between = {}
        for a in self.basis:
            between.setdefault((a.left_idem, a.right_idem), []).append(a)
            for c in self.diff_basis(a):
                diff_pre.setdefault(c, []).append(a)
        for a in self.basis:
            for b in self.basis:
                if a.right_idem != b.left_idem:
                    continue
                for c in self.mul_basis(a, b):
                    mul_pre.setdefault(c, []).append((a, b))
        self._between = {k: tuple(v) for k, v in between.items()}
        self._mul_pre = {k: tuple(v) for k, v in mul_pre.items()}
        self._diff_pre = {k: tuple(v) for k, v in diff_pre.items()}
        self._tables = True

    def mul_preimages(self, c):
        self._ensure_tables()
        return self._mul_pre.get(c, ())

    def diff_preimages(self, c):
        self._ensure_tables()
        return self._diff_pre.get(c, ())

    # -- named elements ----------------------------------------------------

    def chord(self, i, j):
        """a(rho_{i,j}): one moving strand i -> j, all horizontal completions."""
        Z = self.circle
        if not 1 <= i < j <= Z.n_points:
            raise ValueError("chord endpoints must satisfy 1 <= i < j <= 4k")
        occupied = {Z.pair_label(i), Z.pair_label(j)}
        free = [p for p in Z.pairs if p not in occupied]
        terms = [StrandDiagram(Z, ((i, j),), frozenset(h))
                 for h in itertools.combinations(free, Z.k - 1)]
        return AlgebraElement(Z, frozenset(terms))

    def chords(self):
        """All chord elements a(rho_{i,j}), i < j, in lexicographic order."""
        Z = self.circle
        return [self.chord(i, j)
                for i in range(1, Z.n_points + 1)
                for j in range(i + 1, Z.n_points + 1)]


_ALGEBRAS = {}


def algebra(circle):
    alg = _ALGEBRAS.get(circle)
    if alg is None:
        alg = _ALGEBRAS[circle] = StrandsAlgebra(circle)
    return alg


# ---------------------------------------------------------------------------
# public operations


def algebra_basis(circle):
    """All weight-0 basic strand diagrams, canonically ordered."""
    return list(algebra(circle).basis)


def chord_element(circle, i, j):
    return algebra(circle).chord(i, j)


def multiply(x, y):
    return x * y


def differential(x):
    return x.d()


def chord_nilpotency_bound(circle):
    """Any product of more than 2k(4k-1) chords vanishes."""
    return 2 * circle.k * (4 * circle.k - 1)


def include_split(elements):
    """Embed a k-tuple of genus-1 elements block-diagonally into genus k."""
    if not elements:
        raise ValueError("need at least one tensor factor")
    k = len(elements)
    z1 = split_pmc(1)
    for e in elements:
        if e.circle != z1:
            raise ValueError("factors must lie over the genus-1 split circle")
    zk = split_pmc(k)
    acc = {()}
    for e in elements:
        acc = {prefix + (t,) for prefix in acc for t in e.terms}
    out = set()
    for combo in acc:
        moving = []
        horiz = set()
        for idx, diag in enumerate(combo):
            moving += [(i + 4 * idx, j + 4 * idx) for i, j in diag.moving]
            horiz |= {p + 2 * idx for p in diag.horizontal}
        out ^= {StrandDiagram(zk, tuple(moving), frozenset(horiz))}
    return AlgebraElement(zk, frozenset(out))


def split_factors(diagram):
    """Decompose a split-circle diagram into genus-1 blocks, or None.

    Fails (None) when a strand crosses a block boundary or the occupied
    slots do not distribute one per block.
    """
    Z = diagram.circle
    k = Z.k
    z1 = split_pmc(1)
    factors = [[[], set()] for _ in range(k)]
    for i, j in diagram.moving:
        block = (i - 1) // 4
        if block != (j - 1) // 4:
            return None
        factors[block][0].append((i - 4 * block, j - 4 * block))
    for p in diagram.horizontal:
        block = (p - 1) // 2
        factors[block][1].add(p - 2 * block)
    if any(len(m) + len(h) != 1 for m, h in factors):
        return None
    return tuple(StrandDiagram(z1, tuple(m), frozenset(h))
                 for m, h in factors)


def project_split(x):
    """Project a genus-k element onto the image of the block inclusion.

    Returns the F2 set of k-tuples of genus-1 diagrams; diagrams that do not
    stay within a single block are sent to zero.
    """
    out = set()
    for t in x.terms:
        fac = split_factors(t)
        if fac is not None:
            out ^= {fac}
    return frozenset(out)
