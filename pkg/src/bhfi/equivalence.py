"""Finding and certifying homotopy equivalences.

Type D structures are compared through the homology of their morphism
complex: rigidity of the standard modules guarantees a unique equivalence
class, so the search walks homology classes (smallest combinations first)
and certifies each candidate by cancelling its mapping cone to nothing.

Input-carrying structures (A-infinity modules, DA bimodules) are compared
by cancelling both sides as far as the safe (series-free) reduction goes,
matching the reduced models, and transporting the result back along the
reduction equivalences; certification converts the cone to the no-input
side by pairing with the DD identity, where cancellation always terminates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InsufficientArityError, NotEquivalentError
from .homology import homology
from .strands import chord_nilpotency_bound
from .structures import (Morphism, box_tensor_DD_side, compose,
                         mor_complex_DD, morphism_from_generator_map,
                         reduce_structure)


@dataclass(frozen=True)
class EquivalenceCertificate:
    """A certified homotopy equivalence: the morphism, the elimination
    trace of its acyclic cone, and which basis combination produced it."""

    forward: Morphism
    evidence: tuple
    search_index: tuple

    def to_json(self):
        """Reproducibility record: components, selected classes, trace."""
        out_alg = self.forward.source.out_alg
        comps = []
        for src, ins, out, dst in self.forward.sorted_comps():
            comps.append({
                "src": src,
                "inputs": [[b.to_json()] for b in ins],
                "out": [out.to_json()] if hasattr(out, "to_json") else [],
                "dst": dst,
            })
        return {"components": comps,
                "search_index": list(self.search_index),
                "cone_trace": [list(pair) for pair in self.evidence]}

    def __repr__(self):
        return (f"<equivalence: {len(self.forward.comps)} components, "
                f"classes {self.search_index}>")


def homology_basis_of_mor(P, Q):
    """Cycle representatives of a homology basis of the morphism complex,
    one block of the differential's support graph at a time."""
    mc = mor_complex_DD(P, Q)
    data = homology(mc.complex)
    return [mc.morphism_of(v) for v in data.cycles]


def _acyclic_cone_trace(f):
    """Reduction trace of the cone when it cancels away; None otherwise."""
    cone = f.cone()
    if not cone.in_alg.is_trivial:
        from .standard import dd_identity
        cone = box_tensor_DD_side(cone, dd_identity(cone.in_alg.circle))
    red = reduce_structure(cone)
    if red.reduced.generators:
        return None
    return red.trace


def find_homotopy_equivalence(P, Q, max_sum_size=4):
    """The unique-up-to-homotopy equivalence between two type D structures.

    Walks F2 combinations of morphism-homology classes, singletons first,
    in canonical order; the first candidate whose cone cancels to nothing
    wins.  Raises NotEquivalentError when combinations up to the cap fail,
    which signals that the caller's equivalence claim was wrong.
    """
    classes = homology_basis_of_mor(P, Q)
    for size in range(1, max_sum_size + 1):
        for combo in itertools.combinations(range(len(classes)), size):
            candidate = classes[combo[0]]
            for i in combo[1:]:
                candidate = candidate + classes[i]
            trace = _acyclic_cone_trace(candidate)
            if trace is not None:
                return EquivalenceCertificate(candidate, trace, combo)
    raise NotEquivalentError(
        f"no equivalence among sums of up to {max_sum_size} of "
        f"{len(classes)} morphism homology classes")


def verify_morphism_bounded(f, ell):
    """Check the morphism relations with up to ell+1 algebra inputs.

    ``ell`` must reach the chord nilpotency bound of the input circle; at
    that point a bounded solution always extends, so a clean check
    certifies a genuine homomorphism.
    """
    in_alg = f.source.in_alg
    if in_alg.is_trivial:
        bound = 0
    else:
        bound = chord_nilpotency_bound(in_alg.circle)
    if ell < bound:
        raise InsufficientArityError(
            f"bounded verification needs ell >= {bound}")
    residue = f.differential()
    return all(len(op[1]) > ell + 1 for op in residue.comps)


# ---------------------------------------------------------------------------
# equivalences of input-carrying structures


def find_isomorphism(A, B):
    """A generator bijection matching idempotents and operation sets, or
    None.  Deterministic: candidates are tried in label order."""
    if len(A.generators) != len(B.generators):
        return None

    def bucket(S):
        out = {}
        for g in S.generators:
            key = (S.out_alg.idem_sort_key(S.out_idem[g]),
                   S.in_alg.idem_sort_key(S.in_idem[g]))
            out.setdefault(key, []).append(g)
        return out

    ba, bb = bucket(A), bucket(B)
    if set(ba) != set(bb) or any(len(ba[k]) != len(bb[k]) for k in ba):
        return None
    keys = sorted(ba)
    pools = [list(itertools.permutations(bb[k])) for k in keys]
    for assignment in itertools.product(*pools):
        mapping = {}
        for k, perm in zip(keys, assignment):
            mapping.update(dict(zip(ba[k], perm)))
        relabeled = frozenset((mapping[s], ins, out, mapping[t])
                              for s, ins, out, t in A.ops)
        if relabeled == B.ops:
            return mapping
    return None


def _chained_words(alg, start, end, max_len):
    """Idempotent-chained input words from ``start`` to ``end``."""
    by_left = {}
    for b in alg.basis:
        by_left.setdefault(alg.left_idem_of(b), []).append(b)
    words = []
    frontier = [((), start)]
    for _ in range(max_len):
        nxt = []
        for word, at in frontier:
            for b in by_left.get(at, ()):
                nxt.append((word + (b,), alg.right_idem_of(b)))
        frontier = nxt
        words += frontier
    return [w for w, at in [((), start)] + words if at == end]


def search_small_equivalence(A, B, max_arity=2, max_sum_size=4):
    """Bounded-arity equivalence search between two small structures.

    Solves the morphism-cycle condition as a linear system over the
    elementary components with at most ``max_arity - 1`` inputs, then walks
    combinations of the solution space looking for an acyclic cone.
    """
    out_alg, in_alg = A.out_alg, A.in_alg
    unknowns = []
    for src in A.generators:
        for dst in B.generators:
            for out in out_alg.basis_between(A.out_idem[src],
                                             B.out_idem[dst]):
                if in_alg.is_trivial:
                    words = [()]
                else:
                    words = _chained_words(in_alg, A.in_idem[src],
                                           B.in_idem[dst], max_arity - 1)
                for w in words:
                    unknowns.append((src, w, out, dst))
    unknowns.sort(key=A.op_sort_key)
    columns = []
    for e in unknowns:
        img = Morphism(A, B, {e}).differential()
        columns.append(frozenset(img.comps))
    # F2 elimination on sparse columns of residue terms
    pivots = {}
    reduced_cols = []
    combos = []
    kernel = []
    for j, col in enumerate(columns):
        cur, combo = set(col), {j}
        while cur:
            pick = min(cur, key=B.op_sort_key)
            hit = pivots.get(pick)
            if hit is None:
                pivots[pick] = (cur, combo)
                break
            cur, combo = cur ^ hit[0], combo ^ hit[1]
        if not cur:
            kernel.append(frozenset(combo))
    for size in range(1, max_sum_size + 1):
        for pick in itertools.combinations(range(len(kernel)), size):
            comps = set()
            for i in pick:
                for j in kernel[i]:
                    comps ^= {unknowns[j]}
            if not comps:
                continue
            cand = Morphism(A, B, comps)
            trace = _acyclic_cone_trace(cand)
            if trace is not None:
                return EquivalenceCertificate(cand, trace, pick)
    raise NotEquivalentError(
        f"no bounded-arity equivalence (arity {max_arity}, "
        f"{len(kernel)} cycle-space vectors)")


def find_structure_equivalence(A, B, max_arity=3):
    """An equivalence A -> B for input-carrying structures.

    Both sides are cancelled as far as the series-free reduction reaches;
    if the reduced models are isomorphic on the nose, the equivalence is
    the composite through them, otherwise a bounded-arity search bridges
    the small remainder.  The result is certified by cancelling its cone.
    """
    red_a = reduce_structure(A, track_to=True)
    red_b = reduce_structure(B, track_from=True)
    mapping = find_isomorphism(red_a.reduced, red_b.reduced)
    if mapping is not None:
        bridge = morphism_from_generator_map(red_a.reduced, red_b.reduced,
                                             mapping)
        index = ()
    else:
        cert = search_small_equivalence(red_a.reduced, red_b.reduced,
                                        max_arity=max_arity)
        bridge, index = cert.forward, cert.search_index
    forward = compose(compose(red_a.to_reduced, bridge), red_b.from_reduced)
    trace = _acyclic_cone_trace(forward)
    if trace is None:
        raise NotEquivalentError("composite through reduced models has a "
                                 "non-acyclic cone")
    return EquivalenceCertificate(forward, trace, index)


def omega_equivalence(circle):
    """The equivalence from the identity DA bimodule into the composite of
    the two interpolating-piece bimodules (reversed then standard).

    Tractable at genus one, where the composite cancels onto the identity
    bimodule on the nose.  At higher genus the tracked cancellation of the
    composite explodes; the involutive pairing avoids this operation by
    searching for the paired equivalence on the type D side instead.
    """
    from .standard import cfda_az, cfda_azbar
    from .structures import box_tensor, identity_da
    key = circle
    cert = _OMEGA_CACHE.get(key)
    if cert is None:
        composite = box_tensor(cfda_azbar(circle), cfda_az(circle))
        cert = find_structure_equivalence(identity_da(circle), composite)
        _OMEGA_CACHE[key] = cert
    return cert


_OMEGA_CACHE = {}
