"""Exact linear and homological algebra over F2.

Matrices are stored column-major as Python integers (bit i of column j is
the (i, j) entry), which makes row operations single XORs of arbitrary
width.  All eliminations pivot on the first available row in index order, so
every result is reproducible across runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field


def _lowbit(x):
    return (x & -x).bit_length() - 1


@dataclass(frozen=True)
class F2Matrix:
    """A dense F2 matrix; columns as bitmasks."""

    nrows: int
    ncols: int
    cols: tuple = ()

    def __post_init__(self):
        cols = tuple(self.cols) if self.cols else tuple([0] * self.ncols)
        if len(cols) != self.ncols:
            raise ValueError("column count mismatch")
        mask = (1 << self.nrows) - 1
        object.__setattr__(self, "cols", tuple(c & mask for c in cols))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nrows, ncols):
        return F2Matrix(nrows, ncols, tuple([0] * ncols))

    @staticmethod
    def identity(n):
        return F2Matrix(n, n, tuple(1 << i for i in range(n)))

    @staticmethod
    def from_entries(nrows, ncols, entries):
        """entries: iterable of (row, col) positions holding a 1."""
        cols = [0] * ncols
        for r, c in entries:
            cols[c] ^= 1 << r
        return F2Matrix(nrows, ncols, tuple(cols))

    @staticmethod
    def from_rows(rows, ncols):
        nrows = len(rows)
        cols = [0] * ncols
        for r, rowmask in enumerate(rows):
            m = rowmask
            while m:
                c = _lowbit(m)
                m &= m - 1
                cols[c] ^= 1 << r
        return F2Matrix(nrows, ncols, tuple(cols))

    # -- basic operations ----------------------------------------------------

    def entry(self, r, c):
        return (self.cols[c] >> r) & 1

    def apply(self, vec):
        """Matrix times column vector (vector = bitmask over columns)."""
        out = 0
        m = vec
        while m:
            c = _lowbit(m)
            m &= m - 1
            out ^= self.cols[c]
        return out

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return F2Matrix(self.nrows, self.ncols,
                        tuple(a ^ b for a, b in zip(self.cols, other.cols)))

    def __mul__(self, other):
        """self ∘ other (apply other first)."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch for composition")
        return F2Matrix(self.nrows, other.ncols,
                        tuple(self.apply(c) for c in other.cols))

    def transpose(self):
        rows = [0] * self.nrows
        for c, colmask in enumerate(self.cols):
            m = colmask
            while m:
                r = _lowbit(m)
                m &= m - 1
                rows[r] ^= 1 << c
        return F2Matrix(self.ncols, self.nrows, tuple(rows))

    def is_zero(self):
        return all(c == 0 for c in self.cols)

    def to_lists(self):
        return [[self.entry(r, c) for c in range(self.ncols)]
                for r in range(self.nrows)]

    # -- elimination ---------------------------------------------------------

    def _echelon(self):
        """Column echelon data: (pivot row of each reduced column, columns,
        transform T with self * T = reduced)."""
        cols = list(self.cols)
        trans = [1 << j for j in range(self.ncols)]
        pivots = {}
        order = []
        for j in range(self.ncols):
            cur = cols[j]
            t = trans[j]
            while cur:
                r = _lowbit(cur)
                if r in pivots:
                    k = pivots[r]
                    cur ^= cols[k]
                    t ^= trans[k]
                else:
                    pivots[r] = j
                    order.append((r, j))
                    break
            cols[j] = cur
            trans[j] = t
        return pivots, cols, trans, order

    def rank(self):
        pivots, _, _, _ = self._echelon()
        return len(pivots)

    def nullspace_basis(self):
        """Vectors (bitmasks over columns) spanning the kernel, in order."""
        _, cols, trans, _ = self._echelon()
        return [trans[j] for j in range(self.ncols) if cols[j] == 0]

    def image_basis(self):
        pivots, cols, _, order = self._echelon()
        return [cols[j] for _, j in order]

    def solve(self, target):
        """A preimage bitmask with self * x = target, or None."""
        pivots, cols, trans, _ = self._echelon()
        cur, x = target, 0
        while cur:
            r = _lowbit(cur)
            j = pivots.get(r)
            if j is None:
                return None
            cur ^= cols[j]
            x ^= trans[j]
        return x


@dataclass(frozen=True)
class ChainComplex:
    """A based F2 chain complex with optional named scalar actions.

    ``shift`` is bookkeeping only (mapping cones tag a degree shift); no
    absolute grading is computed.
    """

    generators: tuple
    d: F2Matrix
    actions: dict = field(default_factory=dict)
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        n = len(self.generators)
        if self.d.nrows != n or self.d.ncols != n:
            raise ValueError("differential must be square on the generators")
        if not (self.d * self.d).is_zero():
            raise ValueError("differential does not square to zero")
        for name, mat in self.actions.items():
            if (mat.nrows, mat.ncols) != (n, n):
                raise ValueError(f"action {name!r} has the wrong shape")
            if not (mat * self.d + self.d * mat).is_zero():
                raise ValueError(f"action {name!r} does not commute with d")
            if name == "Q" and not (mat * mat).is_zero():
                raise ValueError("Q action must square to zero")

    @property
    def dim(self):
        return len(self.generators)

    def index(self, label):
        return self.generators.index(label)

    def vector(self, labels):
        out = 0
        for l in labels:
            out ^= 1 << self.index(l)
        return out

    def support_blocks(self):
        """Connected components of the differential's support graph,
        as sorted tuples of generator indices."""
        n = self.dim
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for j in range(n):
            m = self.d.cols[j]
            while m:
                r = _lowbit(m)
                m &= m - 1
                ra, rb = find(j), find(r)
                if ra != rb:
                    parent[ra] = rb
        groups = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return tuple(tuple(sorted(g)) for g in
                     sorted(groups.values(), key=lambda g: g[0]))

    def to_json(self):
        return {
            "generators": list(self.generators),
            "differential": [sorted(_bits(self.d.cols[j]))
                             for j in range(self.dim)],
            "actions": {name: [sorted(_bits(mat.cols[j]))
                               for j in range(self.dim)]
                        for name, mat in sorted(self.actions.items())},
        }


def _bits(mask):
    out = []
    while mask:
        out.append(_lowbit(mask))
        mask &= mask - 1
    return out


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    matrix: F2Matrix

    def __post_init__(self):
        if self.matrix.ncols != self.source.dim or \
           self.matrix.nrows != self.target.dim:
            raise ValueError("matrix shape does not match the complexes")
        if not (self.matrix * self.source.d +
                self.target.d * self.matrix).is_zero():
            raise ValueError("not a chain map")

    def compose(self, then):
        if then.source is not self.target and \
           then.source.generators != self.target.generators:
            raise ValueError("endpoint mismatch")
        return ChainMap(self.source, then.target, then.matrix * self.matrix)


@dataclass(frozen=True)
class HomologyData:
    dimension: int
    cycles: tuple        # explicit cycle representatives, one per class
    blocks: tuple        # generator-index blocks the classes live in

    def __iter__(self):
        return iter((self.dimension, list(self.cycles)))


def homology(C):
    """Homology dimension plus explicit, deterministic cycle representatives.

    Representatives are found block by block in the support graph of the
    differential, so each comes from a single block (the grading surrogate
    used downstream by the equivalence search).
    """
    cycles = []
    block_of = []
    for block in C.support_blocks():
        sub = _restrict_columns(C.d, block)
        ker = sub.nullspace_basis()
        im = sub.image_basis()
        chosen = _complete_basis(im, ker)
        for v in chosen:
            cycles.append(_unrestrict(v, block))
            block_of.append(block)
    return HomologyData(len(cycles), tuple(cycles), tuple(block_of))


def _restrict_columns(mat, block):
    pos = {g: i for i, g in enumerate(block)}
    cols = []
    for g in block:
        m, out = mat.cols[g], 0
        while m:
            r = _lowbit(m)
            m &= m - 1
            out ^= 1 << pos[r]
        cols.append(out)
    return F2Matrix(len(block), len(block), tuple(cols))


def _unrestrict(vec, block):
    out, m = 0, vec
    while m:
        i = _lowbit(m)
        m &= m - 1
        out ^= 1 << block[i]
    return out


def _complete_basis(inside, ambient):
    """Extend a basis of the boundary space to the cycle space; returns the
    new vectors only (homology representatives)."""
    basis = {}

    def insert(vec):
        cur = vec
        while cur:
            r = _lowbit(cur)
            if r in basis:
                cur ^= basis[r]
            else:
                basis[r] = cur
                return True
        return False

    for v in inside:
        insert(v)
    out = []
    for v in ambient:
        if insert(v):
            out.append(v)
    return out


def express_in_homology(C, hom, vec):
    """Coordinates of a cycle's class in the basis ``hom.cycles``; None if
    the vector is not a cycle class combination (should not happen)."""
    n = C.dim
    k = len(hom.cycles)
    cols = list(hom.cycles) + list(C.d.cols)
    sol = F2Matrix(n, k + n, tuple(cols)).solve(vec)
    if sol is None:
        return None
    return sol & ((1 << k) - 1)


def mapping_cone(f):
    """Cone of a chain map; source copy shifted, f in the off-diagonal block."""
    ns, nt = f.source.dim, f.target.dim
    gens = tuple(f"S:{g}" for g in f.source.generators) + \
        tuple(f"T:{g}" for g in f.target.generators)
    cols = []
    for j in range(ns):
        cols.append(f.source.d.cols[j] | (f.matrix.cols[j] << ns))
    for j in range(nt):
        cols.append(f.target.d.cols[j] << ns)
    return ChainComplex(gens, F2Matrix(ns + nt, ns + nt, tuple(cols)),
                        shift=f.source.shift - 1)


def is_quasi_isomorphism(f):
    return homology(mapping_cone(f)).dimension == 0


@dataclass(frozen=True)
class Reduction:
    reduced: ChainComplex
    to_reduced: ChainMap
    from_reduced: ChainMap
    homotopy: F2Matrix    # h on the original complex: dh + hd = id + from*to


def reduce(C):
    """Cancel the differential completely (always possible over a field).

    Returns the reduced complex (zero differential), the mutually inverse
    homotopy equivalences, and a homotopy h on the original complex with
    dh + hd = id + from_reduced . to_reduced.  One Gaussian cancellation per
    step; the maps compose via the usual transfer bookkeeping, all in the
    coordinates of the original complex.
    """
    n = C.dim
    dcols = list(C.d.cols)
    alive = list(range(n))
    P = [1 << g for g in range(n)]   # to_reduced so far, column per orig gen
    I = [1 << g for g in range(n)]   # from_reduced so far, column per alive gen
    H = [0] * n

    while True:
        pair = None
        for x in alive:
            m = dcols[x] & ~(1 << x)
            if m:
                pair = (x, _lowbit(m))
                break
        if pair is None:
            break
        x, y = pair
        dx = dcols[x]
        removed = (1 << x) | (1 << y)
        eps = (dx ^ (1 << y)) & ~removed
        betas = [s for s in alive if s != x and (dcols[s] >> y) & 1]
        # homotopy step folds in as I_prev . (y -> x) . P_prev
        Ix = I[x]
        for g in range(n):
            if (P[g] >> y) & 1:
                H[g] ^= Ix
        # from_reduced: i(s) = s + x whenever d(s) hits y
        for s in betas:
            I[s] ^= Ix
        # to_reduced: kill x, reroute y through the rest of d(x)
        py = 0
        m = eps
        while m:
            t = _lowbit(m)
            m &= m - 1
            py ^= P[t]
        for g in range(n):
            col = P[g]
            if (col >> x) & 1:
                col ^= 1 << x
            if (col >> y) & 1:
                col ^= (1 << y) ^ py
            P[g] = col
        # differential: d'(s) = d(s) + d(x), away from the cancelled pair
        for s in betas:
            dcols[s] ^= dx
        for s in alive:
            dcols[s] &= ~removed
        dcols[x] = dcols[y] = 0
        alive = [g for g in alive if g != x and g != y]

    pos = {g: i for i, g in enumerate(alive)}
    m_red = len(alive)
    red = ChainComplex(tuple(C.generators[g] for g in alive),
                       F2Matrix.zero(m_red, m_red), shift=C.shift)

    def project(col):
        out, mm = 0, col
        while mm:
            g = _lowbit(mm)
            mm &= mm - 1
            out ^= 1 << pos[g]
        return out

    to_mat = F2Matrix(m_red, n, tuple(project(P[g]) for g in range(n)))
    from_mat = F2Matrix(n, m_red, tuple(I[g] for g in alive))
    return Reduction(red,
                     ChainMap(C, red, to_mat),
                     ChainMap(red, C, from_mat),
                     F2Matrix(n, n, tuple(H)))
