"""Bordered structures: type D, A-infinity, DA and DD objects over strands
algebras, with box tensor products, morphism complexes, duals, relation
checkers and cancellation.

Every structure kind is stored the same way: a finite list of generators
carrying an idempotent on the algebra-output side and one on the
algebra-input side, plus a finite F2 set of operations

    (source, algebra inputs, algebra output, target)

with basis-element coefficients.  Type D structures have no inputs,
A-infinity modules have trivial output, DD bimodules output into a tensor
algebra, chain complexes have both sides trivial.  All of the calculus
(box tensors, structure relations, morphism calculus, cancellation) is
written once against this shape.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

from .errors import DivergenceError, RelationViolation
from .homology import ChainComplex, ChainMap, F2Matrix
from .strands import AlgebraElement, algebra


def generator_cap():
    return int(os.environ.get("BHFI_MAX_GENERATORS", "200000"))


# ---------------------------------------------------------------------------
# the two auxiliary algebras of the generic interface


class TrivialAlgebra:
    """The ground field F2 as a one-element 'algebra' for absent sides."""

    is_trivial = True
    UNIT = "1"

    basis = (UNIT,)
    idem_keys = (UNIT,)

    @staticmethod
    def mul_basis(a, b):
        return frozenset({TrivialAlgebra.UNIT})

    @staticmethod
    def diff_basis(a):
        return frozenset()

    @staticmethod
    def left_idem_of(a):
        return TrivialAlgebra.UNIT

    right_idem_of = left_idem_of

    @staticmethod
    def is_idem(a):
        return True

    @staticmethod
    def sort_key(a):
        return (0,)

    @staticmethod
    def label_of(a):
        return "1"

    @staticmethod
    def idem_sort_key(idem):
        return (0,)

    @staticmethod
    def idem_element(idem_key):
        return TrivialAlgebra.UNIT

    @staticmethod
    def mul_preimages(c):
        return ((TrivialAlgebra.UNIT, TrivialAlgebra.UNIT),)

    @staticmethod
    def diff_preimages(c):
        return ()

    @staticmethod
    def basis_between(left, right):
        return (TrivialAlgebra.UNIT,)


TRIVIAL = TrivialAlgebra()


class TensorAlgebra:
    """Tensor product of two strands algebras; basis = pairs of diagrams."""

    is_trivial = False

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self._mul_cache = {}

    def mul_basis(self, a, b):
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = frozenset(itertools.product(
                self.left.mul_basis(a[0], b[0]),
                self.right.mul_basis(a[1], b[1])))
            self._mul_cache[key] = hit
        return hit

    def diff_basis(self, a):
        out = {(c, a[1]) for c in self.left.diff_basis(a[0])}
        out ^= {(a[0], c) for c in self.right.diff_basis(a[1])}
        return frozenset(out)

    def left_idem_of(self, a):
        return (self.left.left_idem_of(a[0]), self.right.left_idem_of(a[1]))

    def right_idem_of(self, a):
        return (self.left.right_idem_of(a[0]), self.right.right_idem_of(a[1]))

    def is_idem(self, a):
        return self.left.is_idem(a[0]) and self.right.is_idem(a[1])

    def sort_key(self, a):
        return (self.left.sort_key(a[0]), self.right.sort_key(a[1]))

    def label_of(self, a):
        return f"{self.left.label_of(a[0])}*{self.right.label_of(a[1])}"

    def idem_sort_key(self, idem):
        return (self.left.idem_sort_key(idem[0]),
                self.right.idem_sort_key(idem[1]))

    def idem_element(self, idem_key):
        return (self.left.idem_element(idem_key[0]),
                self.right.idem_element(idem_key[1]))

    @property
    def idem_keys(self):
        return tuple(itertools.product(self.left.idem_keys,
                                       self.right.idem_keys))

    def mul_preimages(self, c):
        return tuple(((a1, a2), (b1, b2))
                     for a1, b1 in self.left.mul_preimages(c[0])
                     for a2, b2 in self.right.mul_preimages(c[1]))

    def diff_preimages(self, c):
        out = [((s, c[1])) for s in self.left.diff_preimages(c[0])]
        out += [((c[0], s)) for s in self.right.diff_preimages(c[1])]
        return tuple(out)

    def basis_between(self, left, right):
        return tuple(itertools.product(
            self.left.basis_between(left[0], right[0]),
            self.right.basis_between(left[1], right[1])))


_TENSOR_CACHE = {}


def tensor_algebra(left, right):
    key = (id(left), id(right))
    alg = _TENSOR_CACHE.get(key)
    if alg is None:
        alg = _TENSOR_CACHE[key] = TensorAlgebra(left, right)
    return alg


# ---------------------------------------------------------------------------
# the common structure container


def _coefficient_terms(value):
    """Normalize a coefficient to its F2 list of basis terms."""
    if isinstance(value, AlgebraElement):
        return value.sorted_terms()
    return [value]


class BorderedObject:
    """Common container for all structure kinds; see the module docstring."""

    def __init__(self, out_alg, in_alg, generators, out_idem, in_idem, ops):
        self.out_alg = out_alg
        self.in_alg = in_alg
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator labels")
        self.out_idem = dict(out_idem)
        self.in_idem = dict(in_idem)
        self.ops = frozenset(ops)
        for (src, ins, out, dst) in self.ops:
            if src not in self.out_idem or dst not in self.out_idem:
                raise ValueError(f"operation references unknown generator "
                                 f"{src!r} or {dst!r}")
        self._by_src = None
        self._by_dst = None
        self._by_src_out = None

    # -- structural views ---------------------------------------------------

    @property
    def kind(self):
        o = not self.out_alg.is_trivial
        i = not self.in_alg.is_trivial
        if o and i:
            return "DA"
        if o:
            return "DD" if isinstance(self.out_alg, TensorAlgebra) else "D"
        if i:
            return "A"
        return "CX"

    @property
    def max_arity(self):
        return max((len(op[1]) for op in self.ops), default=0) + 1

    def op_sort_key(self, op):
        src, ins, out, dst = op
        return (src, tuple(self.in_alg.sort_key(b) for b in ins),
                self.out_alg.sort_key(out), dst)

    def sorted_ops(self):
        return sorted(self.ops, key=self.op_sort_key)

    def _indexes(self):
        if self._by_src is None:
            by_src, by_dst, by_src_out = {}, {}, {}
            for op in self.ops:
                by_src.setdefault(op[0], []).append(op)
                by_dst.setdefault(op[3], []).append(op)
                by_src_out.setdefault((op[0], op[2]), []).append(op)
            self._by_src = by_src
            self._by_dst = by_dst
            self._by_src_out = by_src_out
        return self._by_src, self._by_dst, self._by_src_out

    def ops_from(self, src):
        return self._indexes()[0].get(src, ())

    def ops_into(self, dst):
        return self._indexes()[1].get(dst, ())

    def ops_from_with_out(self, src, out):
        return self._indexes()[2].get((src, out), ())

    def relabeled(self, mapping):
        return BorderedObject(
            self.out_alg, self.in_alg,
            tuple(mapping[g] for g in self.generators),
            {mapping[g]: v for g, v in self.out_idem.items()},
            {mapping[g]: v for g, v in self.in_idem.items()},
            frozenset((mapping[s], ins, out, mapping[t])
                      for s, ins, out, t in self.ops))

    def __repr__(self):
        return (f"<{self.kind} structure: {len(self.generators)} generators, "
                f"{len(self.ops)} operations>")

    def __eq__(self, other):
        return (isinstance(other, BorderedObject)
                and self.out_alg is other.out_alg
                and self.in_alg is other.in_alg
                and self.generators == other.generators
                and self.out_idem == other.out_idem
                and self.in_idem == other.in_idem
                and self.ops == other.ops)

    def __hash__(self):
        return hash((self.generators, self.ops))


# ---------------------------------------------------------------------------
# spec-facing structure kinds


class TypeDStructure(BorderedObject):
    """Type D structure: generators with one idempotent, delta with algebra
    coefficients on the left."""

    def __init__(self, circle, generators, delta):
        self.circle = circle
        alg = algebra(circle)
        gens = [g for g, _ in generators]
        out_idem = {g: frozenset(i) for g, i in generators}
        in_idem = {g: TRIVIAL.UNIT for g in gens}
        ops = set()
        for src, coeff, dst in delta:
            for term in _coefficient_terms(coeff):
                ops ^= {(src, (), term, dst)}
        super().__init__(alg, TRIVIAL, gens, out_idem, in_idem, ops)

    def delta1(self):
        """The delta map as (source, AlgebraElement, target) triples."""
        grouped = {}
        for src, _, out, dst in self.ops:
            grouped.setdefault((src, dst), set()).add(out)
        return [(s, AlgebraElement(self.circle, frozenset(v)), t)
                for (s, t), v in sorted(grouped.items())]


class AInfModule(BorderedObject):
    """A-infinity module: operations m_{1+j} against algebra inputs."""

    def __init__(self, circle, generators, operations, max_arity=None):
        self.circle = circle
        alg = algebra(circle)
        gens = [g for g, _ in generators]
        in_idem = {g: frozenset(i) for g, i in generators}
        out_idem = {g: TRIVIAL.UNIT for g in gens}
        ops = set()
        for entry in operations:
            src, ins, dst = entry
            words = [()]
            for a in ins:
                words = [w + (t,) for w in words
                         for t in _coefficient_terms(a)]
            for w in words:
                ops ^= {(src, w, TRIVIAL.UNIT, dst)}
        super().__init__(TRIVIAL, alg, gens, out_idem, in_idem, ops)
        self.declared_arity = max_arity if max_arity is not None \
            else self.max_arity


class DABimodule(BorderedObject):
    """Type DA bimodule: algebra output on one circle, inputs on another."""

    def __init__(self, out_circle, in_circle, generators, operations):
        self.out_circle = out_circle
        self.in_circle = in_circle
        out_alg = algebra(out_circle)
        in_alg = algebra(in_circle)
        gens = [g for g, _, _ in generators]
        out_idem = {g: frozenset(o) for g, o, _ in generators}
        in_idem = {g: frozenset(i) for g, _, i in generators}
        ops = set()
        for src, ins, out, dst in operations:
            words = [()]
            for a in ins:
                words = [w + (t,) for w in words
                         for t in _coefficient_terms(a)]
            for term in _coefficient_terms(out):
                for w in words:
                    ops ^= {(src, w, term, dst)}
        super().__init__(out_alg, in_alg, gens, out_idem, in_idem, ops)


class DDBimodule(BorderedObject):
    """Type DD bimodule: a type D structure over a tensor of two algebras."""

    def __init__(self, circle_left, circle_right, generators, delta):
        self.circle_left = circle_left
        self.circle_right = circle_right
        out_alg = tensor_algebra(algebra(circle_left), algebra(circle_right))
        gens = [g for g, _, _ in generators]
        out_idem = {g: (frozenset(a), frozenset(b)) for g, a, b in generators}
        in_idem = {g: TRIVIAL.UNIT for g in gens}
        ops = set()
        for src, (ca, cb), dst in delta:
            for ta in _coefficient_terms(ca):
                for tb in _coefficient_terms(cb):
                    ops ^= {(src, (), (ta, tb), dst)}
        super().__init__(out_alg, TRIVIAL, gens, out_idem, in_idem, ops)


def as_bordered(out_alg, in_alg, generators, out_idem, in_idem, ops):
    return BorderedObject(out_alg, in_alg, generators, out_idem, in_idem, ops)


# ---------------------------------------------------------------------------
# relation checking (fully symbolic: the residues below vanish identically
# if and only if the relations hold for every choice of algebra inputs)


def _toggle(acc, op):
    if op in acc:
        acc.discard(op)
    else:
        acc.add(op)


def structure_residue(S):
    """Leftover terms of the structure relation, as operations."""
    acc = set()
    out_alg, in_alg = S.out_alg, S.in_alg
    for op1 in S.ops:
        x, w1, a, y = op1
        for op2 in S.ops_from(y):
            _, w2, b, z = op2
            for c in out_alg.mul_basis(a, b):
                _toggle(acc, (x, w1 + w2, c, z))
        for c in out_alg.diff_basis(a):
            _toggle(acc, (x, w1, c, y))
        for pos in range(len(w1)):
            for b in in_alg.diff_preimages(w1[pos]):
                _toggle(acc, (x, w1[:pos] + (b,) + w1[pos + 1:], a, y))
            for b1, b2 in in_alg.mul_preimages(w1[pos]):
                _toggle(acc, (x, w1[:pos] + (b1, b2) + w1[pos + 1:], a, y))
    return acc


def idempotent_violations(S):
    """Operations whose coefficients do not match the generator idempotents."""
    bad = []
    for op in S.sorted_ops():
        src, ins, out, dst = op
        if S.out_alg.left_idem_of(out) != S.out_idem[src] or \
           S.out_alg.right_idem_of(out) != S.out_idem[dst]:
            bad.append(op)
            continue
        chain = [S.in_idem[src]]
        for b in ins:
            if S.in_alg.left_idem_of(b) != chain[-1]:
                bad.append(op)
                break
            chain.append(S.in_alg.right_idem_of(b))
        else:
            if chain[-1] != S.in_idem[dst]:
                bad.append(op)
    return bad


def check_structure(S):
    """All violations: idempotent mismatches plus structure-relation residue.

    The relation residue is computed symbolically, which covers every input
    word at once; words longer than twice the stored arity cannot support a
    nonzero term, so the check is complete for finitely presented structures.
    """
    violations = [("idempotent", op) for op in idempotent_violations(S)]
    if not violations:
        residue = structure_residue(S)
        violations += [("relation", op)
                       for op in sorted(residue, key=S.op_sort_key)]
    return violations


def require_valid(S, what="structure"):
    bad = check_structure(S)
    if bad:
        raise RelationViolation(f"{what} fails {len(bad)} relation checks; "
                                f"first: {bad[0]}")
    return S


def validate_bounded(S):
    """Check operational boundedness of a no-input structure.

    Walks the state graph of (generator, accumulated coefficient product)
    pairs; a directed cycle there is exactly an infinite delta iteration with
    nonvanishing product.
    """
    if not S.in_alg.is_trivial:
        raise ValueError("boundedness applies to no-input structures")
    out_alg = S.out_alg
    edges = {}

    def successors(state):
        g, c = state
        hit = edges.get(state)
        if hit is None:
            hit = []
            for _, _, b, g2 in S.ops_from(g):
                for c2 in out_alg.mul_basis(c, b):
                    hit.append((g2, c2))
            edges[state] = hit
        return hit

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {}
    for g in S.generators:
        for op in S.ops_from(g):
            start = (op[3], op[2])
            if color.get(start, WHITE) == BLACK:
                continue
            stack = [(start, iter(successors(start)))]
            color[start] = GRAY
            while stack:
                state, it = stack[-1]
                advanced = False
                for nxt in it:
                    col = color.get(nxt, WHITE)
                    if col == GRAY:
                        raise DivergenceError(
                            "structure is not operationally bounded: "
                            f"delta iteration loops through {nxt[0]!r}")
                    if col == WHITE:
                        color[nxt] = GRAY
                        stack.append((nxt, iter(successors(nxt))))
                        advanced = True
                        break
                if not advanced:
                    color[state] = BLACK
                    stack.pop()
    return True


# ---------------------------------------------------------------------------
# box tensor products


def _chains_consuming(B2, start, outs):
    """All op-chains in B2 from ``start`` whose outputs read ``outs`` in
    order; yields (concatenated inputs, end generator)."""
    results = []

    def walk(at, idx, ins_acc):
        if idx == len(outs):
            results.append((ins_acc, at))
            return
        for op in B2.ops_from_with_out(at, outs[idx]):
            walk(op[3], idx + 1, ins_acc + op[1])

    walk(start, 0, ())
    return results


def box_tensor(B1, B2):
    """Box tensor product pairing B1's algebra inputs with B2's outputs."""
    if B1.in_alg is not B2.out_alg:
        raise ValueError("input algebra of the first factor must match the "
                         "output algebra of the second")
    gens = []
    out_idem, in_idem = {}, {}
    for g1 in B1.generators:
        for g2 in B2.generators:
            if B1.in_idem[g1] != B2.out_idem[g2]:
                continue
            label = f"{g1}|{g2}"
            gens.append(label)
            out_idem[label] = B1.out_idem[g1]
            in_idem[label] = B2.in_idem[g2]
    if len(gens) > generator_cap():
        raise DivergenceError("box tensor exceeds BHFI_MAX_GENERATORS")
    gen_set = set(gens)
    ops = set()
    for op in B1.ops:
        x, word, a, x2 = op
        for g2 in B2.generators:
            if f"{x}|{g2}" not in gen_set:
                continue
            for ins, end in _chains_consuming(B2, g2, word):
                _toggle(ops, (f"{x}|{g2}", ins, a, f"{x2}|{end}"))
    return BorderedObject(B1.out_alg, B2.in_alg, tuple(gens),
                          out_idem, in_idem, ops)


def to_chain_complex(S, actions=(), shift=0):
    """View a both-sides-trivial structure as a based chain complex."""
    if S.kind != "CX":
        raise ValueError("structure still carries algebra actions")
    n = len(S.generators)
    pos = {g: i for i, g in enumerate(S.generators)}
    entries = [(pos[dst], pos[src]) for src, _, _, dst in S.ops]
    return ChainComplex(S.generators, F2Matrix.from_entries(n, n, entries),
                        actions=dict(actions), shift=shift)


def box_tensor_AD(M, P):
    """Pair an A-infinity module with a type D structure; a chain complex."""
    validate_bounded(P)
    return to_chain_complex(box_tensor(M, P))


def box_tensor_DA_D(B, P):
    """Pair a DA bimodule with a type D structure; a type D structure."""
    validate_bounded(P)
    out = box_tensor(B, P)
    return out


def box_tensor_DD_side(B, X):
    """Pair a DA bimodule (or A-infinity module) with the left factor of a
    DD-type structure, carrying the right factor along.

    ``X`` is a no-input structure over a tensor algebra whose left factor is
    ``B``'s input algebra.  The result is a no-input structure over
    ``B.out_alg`` tensor the carried factor (the trivial output of an
    A-infinity module is dropped).
    """
    if not isinstance(X.out_alg, TensorAlgebra) or \
       X.out_alg.left is not B.in_alg:
        raise ValueError("left output factor must match the input algebra")
    carried = X.out_alg.right
    trivial_out = B.out_alg.is_trivial
    res_alg = carried if trivial_out else tensor_algebra(B.out_alg, carried)

    gens, out_idem, in_idem = [], {}, {}
    for b in B.generators:
        for x in X.generators:
            if B.in_idem[b] != X.out_idem[x][0]:
                continue
            label = f"{b}|{x}"
            gens.append(label)
            oi = X.out_idem[x][1] if trivial_out \
                else (B.out_idem[b], X.out_idem[x][1])
            out_idem[label] = oi
            in_idem[label] = TRIVIAL.UNIT
    gen_set = set(gens)

    # delta paths in X indexed by the left-factor coefficient sequence
    by_src_left = {}
    for op in X.ops:
        by_src_left.setdefault((op[0], op[2][0]), []).append(op)

    ops = set()
    for op in B.ops:
        bsrc, word, a, bdst = op
        for x in X.generators:
            if f"{bsrc}|{x}" not in gen_set:
                continue

            def walk(at, idx, prods):
                if idx == len(word):
                    for prod in prods:
                        coeff = prod if trivial_out else (a, prod)
                        _toggle(ops, (f"{bsrc}|{x}", (), coeff,
                                      f"{bdst}|{at}"))
                    return
                for xop in by_src_left.get((at, word[idx]), ()):
                    carry = xop[2][1]
                    nxt = set()
                    for p in prods:
                        nxt ^= carried.mul_basis(p, carry) if p is not None \
                            else {carry}
                    if nxt:
                        walk(xop[3], idx + 1, nxt)

            walk(x, 0, {None})
    # normalize: None product (no steps) means the carried idempotent
    fixed = set()
    for (src, ins, out, dst) in ops:
        if trivial_out and out is None:
            out = carried.idem_element(out_idem[dst])
        elif not trivial_out and out[1] is None:
            out = (out[0], carried.idem_element(out_idem[dst][1]))
        _toggle(fixed, (src, ins, out, dst))
    return BorderedObject(res_alg, TRIVIAL, tuple(gens), out_idem,
                          in_idem, fixed)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class Morphism:
    """A degree-0 collection of component maps between structures of one
    kind, stored exactly like structure operations."""

    source: BorderedObject
    target: BorderedObject
    comps: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.source.out_alg is not self.target.out_alg or \
           self.source.in_alg is not self.target.in_alg:
            raise ValueError("endpoint structures live over different algebras")
        object.__setattr__(self, "comps", frozenset(self.comps))
        for src, ins, out, dst in self.comps:
            if src not in self.source.out_idem or \
               dst not in self.target.out_idem:
                raise ValueError("component references unknown generators")

    def __add__(self, other):
        if self.source is not other.source or self.target is not other.target:
            if self.source.generators != other.source.generators or \
               self.target.generators != other.target.generators:
                raise ValueError("cannot add morphisms with different ends")
        return Morphism(self.source, self.target, self.comps ^ other.comps)

    def sorted_comps(self):
        return sorted(self.comps, key=self.source.op_sort_key)

    def then(self, other):
        """Composition: apply self first, then ``other``."""
        if other.source.generators != self.target.generators:
            raise ValueError("endpoint mismatch in composition")
        out_alg = self.source.out_alg
        by_src = {}
        for comp in other.comps:
            by_src.setdefault(comp[0], []).append(comp)
        acc = set()
        for (x, w1, a, m) in self.comps:
            for (_, w2, b, z) in by_src.get(m, ()):
                for c in out_alg.mul_basis(a, b):
                    _toggle(acc, (x, w1 + w2, c, z))
        return Morphism(self.source, other.target, acc)

    def differential(self):
        """The morphism-complex differential of this collection of maps."""
        S, T = self.source, self.target
        out_alg, in_alg = S.out_alg, S.in_alg
        comps_by_src = {}
        for comp in self.comps:
            comps_by_src.setdefault(comp[0], []).append(comp)
        acc = set()
        for (x, w1, a, y) in S.ops:
            for (_, w2, b, z) in comps_by_src.get(y, ()):
                for c in out_alg.mul_basis(a, b):
                    _toggle(acc, (x, w1 + w2, c, z))
        for (x, w1, a, y) in self.comps:
            for (_, w2, b, z) in T.ops_from(y):
                for c in out_alg.mul_basis(a, b):
                    _toggle(acc, (x, w1 + w2, c, z))
            for c in out_alg.diff_basis(a):
                _toggle(acc, (x, w1, c, y))
            for pos in range(len(w1)):
                for b in in_alg.diff_preimages(w1[pos]):
                    _toggle(acc, (x, w1[:pos] + (b,) + w1[pos + 1:], a, y))
                for b1, b2 in in_alg.mul_preimages(w1[pos]):
                    _toggle(acc, (x, w1[:pos] + (b1, b2) + w1[pos + 1:], a, y))
        return Morphism(S, T, acc)

    def is_cycle(self):
        return not self.differential().comps

    def cone(self):
        """Mapping cone, a structure of the same kind."""
        S, T = self.source, self.target
        gens = tuple(f"S:{g}" for g in S.generators) + \
            tuple(f"T:{g}" for g in T.generators)
        out_idem = {f"S:{g}": v for g, v in S.out_idem.items()}
        out_idem.update({f"T:{g}": v for g, v in T.out_idem.items()})
        in_idem = {f"S:{g}": v for g, v in S.in_idem.items()}
        in_idem.update({f"T:{g}": v for g, v in T.in_idem.items()})
        ops = {(f"S:{s}", w, a, f"S:{t}") for s, w, a, t in S.ops}
        ops |= {(f"T:{s}", w, a, f"T:{t}") for s, w, a, t in T.ops}
        ops |= {(f"S:{s}", w, a, f"T:{t}") for s, w, a, t in self.comps}
        return BorderedObject(S.out_alg, S.in_alg, gens, out_idem,
                              in_idem, ops)

    def as_chain_map(self, source_cx=None, target_cx=None):
        """Realize a morphism of both-sides-trivial structures as a ChainMap."""
        if self.source.kind != "CX":
            raise ValueError("not a morphism of chain complexes")
        source_cx = source_cx or to_chain_complex(self.source)
        target_cx = target_cx or to_chain_complex(self.target)
        spos = {g: i for i, g in enumerate(source_cx.generators)}
        tpos = {g: i for i, g in enumerate(target_cx.generators)}
        entries = [(tpos[dst], spos[src]) for src, _, _, dst in self.comps]
        mat = F2Matrix.from_entries(len(tpos), len(spos), entries)
        return ChainMap(source_cx, target_cx, mat)

    def __repr__(self):
        return f"<morphism: {len(self.comps)} components>"


def identity_morphism(S):
    comps = set()
    for g in S.generators:
        comps.add((g, (), S.out_alg.idem_element(S.out_idem[g]), g))
    return Morphism(S, S, comps)


def zero_morphism(S, T):
    return Morphism(S, T, frozenset())


def elementary_morphism(P, Q, src, coeff, dst):
    comps = set()
    for term in _coefficient_terms(coeff):
        comps ^= {(src, (), term, dst)}
    return Morphism(P, Q, comps)


def compose(f, g):
    """Apply f first, then g."""
    return f.then(g)


def morphism_from_generator_map(S, T, mapping):
    """The morphism induced by a label bijection (identity coefficients)."""
    comps = set()
    for g in S.generators:
        comps.add((g, (), S.out_alg.idem_element(S.out_idem[g]), mapping[g]))
    return Morphism(S, T, comps)


# -- tensoring morphisms with identities -------------------------------------


def box_morphism_left(f, P):
    """(f boxtimes Id_P): f between left-hand structures, P on the right."""
    B1, B2 = f.source, f.target
    box1 = box_tensor(B1, P)
    box2 = box_tensor(B2, P)
    gen1 = set(box1.generators)
    comps = set()
    for (b, word, a, b2) in f.comps:
        for p in P.generators:
            if f"{b}|{p}" not in gen1:
                continue
            for ins, end in _chains_consuming(P, p, word):
                _toggle(comps, (f"{b}|{p}", ins, a, f"{b2}|{end}"))
    return Morphism(box1, box2, comps)


def box_morphism_right(B, f):
    """(Id_B boxtimes f): B on the left, f between right-hand structures."""
    P1, P2 = f.source, f.target
    box1 = box_tensor(B, P1)
    box2 = box_tensor(B, P2)
    gen1 = set(box1.generators)
    fcomps_by_out = {}
    for comp in f.comps:
        fcomps_by_out.setdefault((comp[0], comp[2]), []).append(comp)
    comps = set()
    for (b, word, a, b2) in B.ops:
        for p in P1.generators:
            if f"{b}|{p}" not in gen1:
                continue
            # insert exactly one f component at position t of the chain
            def walk(at, idx, ins_acc, used):
                if idx == len(word):
                    if used:
                        _toggle(comps, (f"{b}|{p}", ins_acc, a,
                                        f"{b2}|{at}"))
                    return
                struct = P2 if used else P1
                for op in struct.ops_from_with_out(at, word[idx]):
                    walk(op[3], idx + 1, ins_acc + op[1], used)
                if not used:
                    for comp in fcomps_by_out.get((at, word[idx]), ()):
                        walk(comp[3], idx + 1, ins_acc + comp[1], True)

            walk(p, 0, (), False)
    return Morphism(box1, box2, comps)


def tensor_id_left(B, f):
    """Spec-facing alias: Id_B boxtimes f for a DA bimodule B."""
    return box_morphism_right(B, f)


# ---------------------------------------------------------------------------
# morphism complexes of type D structures


@dataclass(frozen=True)
class MorComplex:
    """The chain complex of type D structure morphisms P -> Q, with its
    basis of elementary morphisms."""

    P: BorderedObject
    Q: BorderedObject
    basis: tuple              # (p, coefficient diagram, q) triples
    complex: ChainComplex

    def index(self, comp):
        src, _, out, dst = comp
        return self._pos[(src, out, dst)]

    @property
    def _pos(self):
        if not hasattr(self, "_pos_cache"):
            object.__setattr__(self, "_pos_cache",
                               {t: i for i, t in enumerate(self.basis)})
        return self._pos_cache

    def vector_of(self, morphism):
        vec = 0
        for src, ins, out, dst in morphism.comps:
            vec ^= 1 << self._pos[(src, out, dst)]
        return vec

    def morphism_of(self, vec):
        comps = set()
        m = vec
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            p, a, q = self.basis[i]
            comps.add((p, (), a, q))
        return Morphism(self.P, self.Q, comps)


def mor_complex_DD(P, Q):
    """Morphism complex between two type D structures over one algebra."""
    if P.out_alg is not Q.out_alg or not P.in_alg.is_trivial \
       or not Q.in_alg.is_trivial:
        raise ValueError("morphism complexes need type D structures over "
                         "one algebra")
    alg = P.out_alg
    basis = []
    for p in P.generators:
        for q in Q.generators:
            for a in alg.basis_between(P.out_idem[p], Q.out_idem[q]):
                basis.append((p, a, q))
    basis = tuple(sorted(basis, key=lambda t: (t[0], alg.sort_key(t[1]), t[2])))
    pos = {t: i for i, t in enumerate(basis)}
    n = len(basis)
    entries = []
    for i, (p, a, q) in enumerate(basis):
        img = Morphism(P, Q, {(p, (), a, q)}).differential()
        for (src, _, out, dst) in img.comps:
            entries.append((pos[(src, out, dst)], i))
    gens = tuple(f"{p}>{alg.label_of(a)}>{q}" for p, a, q in basis)
    cx = ChainComplex(gens, F2Matrix.from_entries(n, n, entries))
    return MorComplex(P, Q, basis, cx)


# ---------------------------------------------------------------------------
# duals and identity bimodules


def dual_type_d(P):
    """The dual type D structure, written over the same (reflection
    symmetric) circle: arrows reverse and coefficients reflect."""
    circle = P.out_alg.circle
    refl = {}
    for g in P.generators:
        refl[g] = frozenset(circle.reflect_pair_label(p)
                            for p in P.out_idem[g])
    gens = tuple(f"{g}*" for g in P.generators)
    out_idem = {f"{g}*": refl[g] for g in P.generators}
    in_idem = {f"{g}*": TRIVIAL.UNIT for g in P.generators}
    ops = set()
    for (x, _, a, y) in P.ops:
        ops.add((f"{y}*", (), a.reflect(), f"{x}*"))
    return BorderedObject(P.out_alg, TRIVIAL, gens, out_idem, in_idem, ops)


def identity_da(circle):
    """The identity DA bimodule: one generator per idempotent, the right
    action feeding straight through."""
    alg = algebra(circle)
    gens, out_idem, in_idem = [], {}, {}
    for d in alg.idempotent_diagrams:
        label = f"e_{d.label}"
        gens.append(label)
        out_idem[label] = d.left_idem
        in_idem[label] = d.left_idem
    ops = set()
    for b in alg.basis:
        src = f"e_{alg.idempotent(b.left_idem).label}"
        dst = f"e_{alg.idempotent(b.right_idem).label}"
        ops.add((src, (b,), b, dst))
    return BorderedObject(alg, alg, tuple(gens), out_idem, in_idem, ops)


# ---------------------------------------------------------------------------
# cancellation


@dataclass(frozen=True)
class StructureReduction:
    reduced: BorderedObject
    from_reduced: Morphism | None
    to_reduced: Morphism | None
    trace: tuple


def reduce_structure(S, track_from=False, track_to=False):
    """Cancel length-zero idempotent-coefficient operations.

    Returns the reduced structure together with (optionally) the homotopy
    equivalences in and out of it, both honest morphisms of the same kind.

    Cancelling a pair with parallel operations requires a correction
    series; the series terminates exactly when no parallel operation
    carries an idempotent (unit-like) coefficient, because everything else
    multiplies into the nilpotent ideal.  Pairs whose series would not
    terminate are left alone, so the result can stop short of a minimal
    model for input-carrying structures (one-input minimal models honestly
    need infinitely many operations); for no-input structures the
    reduction always completes.
    """
    out_alg, in_alg = S.out_alg, S.in_alg
    ops = set(S.ops)
    alive = list(S.generators)
    by_src, by_dst = {}, {}
    cancellable = set()

    def is_candidate(op):
        return not op[1] and op[0] != op[3] and out_alg.is_idem(op[2])

    def add_op(op):
        if op in ops:
            ops.discard(op)
            by_src[op[0]].discard(op)
            by_dst[op[3]].discard(op)
            cancellable.discard(op)
        else:
            ops.add(op)
            by_src.setdefault(op[0], set()).add(op)
            by_dst.setdefault(op[3], set()).add(op)
            if is_candidate(op):
                cancellable.add(op)

    for op in S.ops:
        by_src.setdefault(op[0], set()).add(op)
        by_dst.setdefault(op[3], set()).add(op)
        if is_candidate(op):
            cancellable.add(op)

    # accumulated morphisms, indexed for cheap composition
    from_comps = {g: {(g, (), out_alg.idem_element(S.out_idem[g]), g)}
                  for g in S.generators} if track_from else None
    to_by_dst = {g: {(g, (), out_alg.idem_element(S.out_idem[g]), g)}
                 for g in S.generators} if track_to else None

    trace = []

    def chain_products(first_word, first_coeff, loops, cap=200):
        """Fold coefficient products along first.(loops)*; yields
        (input word, coefficient basis term) pairs."""
        results = []
        frontier = [(first_word, frozenset({first_coeff}))]
        depth = 0
        while frontier:
            depth += 1
            if depth > cap:
                raise DivergenceError("cancellation series does not terminate")
            nxt = []
            for word, coeffs in frontier:
                for c in coeffs:
                    results.append((word, c))
                for ell in loops:
                    folded = set()
                    for c in coeffs:
                        folded ^= out_alg.mul_basis(c, ell[2])
                    if folded:
                        nxt.append((word + ell[1], frozenset(folded)))
            frontier = nxt
        return results

    while True:
        step = None
        for op in sorted(cancellable, key=S.op_sort_key):
            x, _, unit_coeff, y = op
            loops = [o for o in by_src.get(x, ()) if o[3] == y and o != op]
            if any(out_alg.is_idem(l[2]) for l in loops):
                continue            # series provably fails to terminate
            step = (op, loops)
            break
        if step is None:
            break
        cancel_op, loops = step
        x, _, unit_coeff, y = cancel_op
        into_y = [o for o in by_dst.get(y, ()) if o[0] not in (x, y)]
        from_x = [o for o in by_src.get(x, ()) if o[3] not in (x, y)]
        trace.append((x, y))

        # everything that needs the series, computed before any mutation
        heads = []                   # A.(loops)*  chains
        for A in into_y:
            for word_a, coeff_a in chain_products(A[1], A[2], loops):
                heads.append((A[0], word_a, coeff_a))
        corrections = []
        for (src, word_a, coeff_a) in heads:
            for B in from_x:
                for c in out_alg.mul_basis(coeff_a, B[2]):
                    corrections.append((src, word_a + B[1], c, B[3]))
        pieces = None
        if track_to:
            pieces = []              # (loops)*.B  chains
            for word_l, coeff_l in chain_products((), unit_coeff, loops):
                for B in from_x:
                    for c in out_alg.mul_basis(coeff_l, B[2]):
                        pieces.append((word_l + B[1], c, B[3]))

        if track_from:
            tail_x = from_comps[x]
            for (s, w1, c1) in heads:
                acc = from_comps[s]
                for (_, w2, c2, orig) in tail_x:
                    for c in out_alg.mul_basis(c1, c2):
                        comp = (s, w1 + w2, c, orig)
                        if comp in acc:
                            acc.discard(comp)
                        else:
                            acc.add(comp)
            del from_comps[x]
            del from_comps[y]
        if track_to:
            for (orig, w0, c0, _) in list(to_by_dst.get(y, ())):
                for (w1, c1, tgt) in pieces:
                    for c in out_alg.mul_basis(c0, c1):
                        comp = (orig, w0 + w1, c, tgt)
                        bucket = to_by_dst.setdefault(tgt, set())
                        if comp in bucket:
                            bucket.discard(comp)
                        else:
                            bucket.add(comp)
            to_by_dst[y] = set()
            to_by_dst[x] = set()

        # apply corrections and drop the cancelled pair
        for op in list(by_src.get(x, set()) | by_dst.get(x, set())
                       | by_src.get(y, set()) | by_dst.get(y, set())):
            if op in ops:
                ops.discard(op)
                by_src[op[0]].discard(op)
                by_dst[op[3]].discard(op)
                cancellable.discard(op)
        for op in corrections:
            add_op(op)
        alive = [g for g in alive if g not in (x, y)]

    reduced = BorderedObject(out_alg, in_alg, tuple(alive),
                             {g: S.out_idem[g] for g in alive},
                             {g: S.in_idem[g] for g in alive}, ops)
    from_mor = None
    to_mor = None
    alive_set = set(alive)
    if track_from:
        comps = set()
        for g in alive:
            comps ^= from_comps[g]
        from_mor = Morphism(reduced, S, comps)
    if track_to:
        comps = set()
        for g, bucket in to_by_dst.items():
            if g in alive_set:
                comps ^= bucket
        to_mor = Morphism(S, reduced, comps)
    return StructureReduction(reduced, from_mor, to_mor, tuple(trace))


def is_contractible(S):
    """True when the structure cancels away completely.

    Structures with algebra inputs are first converted to the no-input side
    by pairing with the DD identity of the input circle, where cancellation
    provably terminates.
    """
    if not S.in_alg.is_trivial:
        from .standard import dd_identity
        S = box_tensor_DD_side(S, dd_identity(S.in_alg.circle))
    return not reduce_structure(S).reduced.generators
