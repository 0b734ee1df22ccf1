"""The conjugation involution on the hat Floer complex of a gluing, its
involutive homology with the Q-action, the two computation routes (the
morphism-space route and the involutive-pairing route), and the mapping
class group action pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass

from .equivalence import (find_homotopy_equivalence,
                          find_structure_equivalence)
from .errors import RelationViolation
from .homology import (ChainComplex, F2Matrix, express_in_homology, homology)
from .standard import cfda_az, cfda_azbar
from .structures import (Morphism, box_tensor, box_morphism_left,
                         box_morphism_right, compose, identity_da,
                         mor_complex_DD, morphism_from_generator_map,
                         tensor_id_left, to_chain_complex, validate_bounded)


@dataclass(frozen=True)
class InvolutiveTypeD:
    """A type D structure with a certified equivalence from its twist by
    the interpolating piece.  Construction checks the certificate: the
    map must be a cycle with a cone that cancels away."""

    structure: object
    psi: Morphism            # az boxtimes P -> P

    def __post_init__(self):
        if self.psi.target.generators != self.structure.generators:
            raise ValueError("psi must land in the underlying structure")
        _certify_psi(self.psi)


@dataclass(frozen=True)
class InvolutiveAInf:
    """An A-infinity module with a certified equivalence from its twist by
    the reversed interpolating piece.  Construction checks the certificate
    the same way as for the type D side."""

    module: object
    psi: Morphism            # M boxtimes azbar -> M

    def __post_init__(self):
        if self.psi.target.generators != self.module.generators:
            raise ValueError("psi must land in the underlying module")
        _certify_psi(self.psi)


def _certify_psi(psi):
    from .structures import is_contractible
    if not psi.is_cycle():
        raise RelationViolation("psi is not a morphism cycle")
    if not is_contractible(psi.cone()):
        raise RelationViolation("psi is not a homotopy equivalence "
                                "(its cone does not cancel)")


def standard_involutive_d(P):
    az = cfda_az(P.out_alg.circle)
    cert = find_homotopy_equivalence(box_tensor(az, P), P)
    return InvolutiveTypeD(P, cert.forward)


def standard_involutive_a(M):
    azb = cfda_azbar(M.in_alg.circle)
    cert = find_structure_equivalence(box_tensor(M, azb), M)
    return InvolutiveAInf(M, cert.forward)


@dataclass(frozen=True)
class IotaReport:
    """Everything the involutive pipeline reports for one pairing."""

    hf_dim: int
    iota_matrix: F2Matrix     # on the homology basis of the morphism complex
    ker_dim: int
    coker_dim: int
    hfi_dim: int
    q_action: F2Matrix        # on the homology basis of the involutive cone

    def to_json(self):
        return {
            "hf_dim": self.hf_dim,
            "iota": self.iota_matrix.to_lists(),
            "ker": self.ker_dim,
            "hfi_dim": self.hfi_dim,
            "Q": self.q_action.to_lists(),
        }


def _iota_pipeline(P0, P1, max_sum_size=4):
    """Steps shared by the involution report and the involutive complex.

    Computes the homology basis of the morphism complex, conjugates each
    representative through the interpolating piece using the two certified
    equivalences, and returns the basis data together with the images.
    """
    validate_bounded(P0)
    validate_bounded(P1)
    circle = P0.out_alg.circle
    az = cfda_az(circle)
    az_p0 = box_tensor(az, P0)
    az_p1 = box_tensor(az, P1)
    mc = mor_complex_DD(P0, P1)
    hom = homology(mc.complex)
    reps = [mc.morphism_of(v) for v in hom.cycles]
    psi0_inv = find_homotopy_equivalence(P0, az_p0,
                                         max_sum_size=max_sum_size).forward
    psi1 = find_homotopy_equivalence(az_p1, P1,
                                     max_sum_size=max_sum_size).forward
    images = []
    for f in reps:
        twisted = tensor_id_left(az, f)
        images.append(compose(compose(psi0_inv, twisted), psi1))
    return mc, hom, reps, images


def _involutive_cone(mc, hom, reps, images):
    """The involutive complex: cone of (inclusion + involution) from the
    homology of the morphism complex into the morphism complex, with the
    Q-action recorded as a named endomorphism."""
    n = len(hom.cycles)
    m = mc.complex.dim
    gens = tuple(f"H:{i}" for i in range(n)) + \
        tuple(f"M:{g}" for g in mc.complex.generators)
    cols = []
    for i in range(n):
        blocked = hom.cycles[i] ^ mc.vector_of(images[i])
        cols.append(blocked << n)
    for j in range(m):
        cols.append(mc.complex.d.cols[j] << n)
    d = F2Matrix(n + m, n + m, tuple(cols))
    q_cols = [hom.cycles[i] << n for i in range(n)] + [0] * m
    q = F2Matrix(n + m, n + m, tuple(q_cols))
    return ChainComplex(gens, d, actions={"Q": q}, shift=-1)


def iota_on_mor(P0, P1, max_sum_size=4):
    """The involution report for the pairing encoded by two type D
    structures over one circle."""
    mc, hom, reps, images = _iota_pipeline(P0, P1, max_sum_size)
    n = len(hom.cycles)
    cols = []
    for g in images:
        vec = express_in_homology(mc.complex, hom, mc.vector_of(g))
        if vec is None:
            raise RelationViolation("conjugated class is not a cycle class")
        cols.append(vec)
    iota = F2Matrix(n, n, tuple(cols))
    one_plus = iota + F2Matrix.identity(n)
    ker_dim = len(one_plus.nullspace_basis())
    coker_dim = n - one_plus.rank()
    cone = _involutive_cone(mc, hom, reps, images)
    cone_h = homology(cone)
    hfi_dim = cone_h.dimension
    if hfi_dim != ker_dim + coker_dim:
        raise RelationViolation(
            "involutive homology disagrees with the kernel/cokernel count")
    q_cols = []
    for z in cone_h.cycles:
        qz = cone.actions["Q"].apply(z)
        vec = express_in_homology(cone, cone_h, qz)
        if vec is None:
            raise RelationViolation("Q does not descend to homology")
        q_cols.append(vec)
    q_matrix = F2Matrix(hfi_dim, hfi_dim, tuple(q_cols))
    return IotaReport(hf_dim=n, iota_matrix=iota, ker_dim=ker_dim,
                      coker_dim=coker_dim, hfi_dim=hfi_dim,
                      q_action=q_matrix)


def cfi_hat(P0, P1, max_sum_size=4):
    """The involutive complex of the pairing, a complex over F2[Q]/(Q^2)."""
    mc, hom, reps, images = _iota_pipeline(P0, P1, max_sum_size)
    return _involutive_cone(mc, hom, reps, images)


# ---------------------------------------------------------------------------
# the involutive pairing route


def _cx_matrix(mor, source_cx, target_cx):
    spos = {g: i for i, g in enumerate(source_cx.generators)}
    tpos = {g: i for i, g in enumerate(target_cx.generators)}
    entries = [(tpos[dst], spos[src]) for src, _, _, dst in mor.comps]
    return F2Matrix.from_entries(len(tpos), len(spos), entries)


def involutive_pair(A, D):
    """The pairing of involutive structures: the cone of (identity plus the
    conjugation composite) on the box tensor complex, over F2[Q]/(Q^2).

    The insertion of the identity-to-composite equivalence is realized
    after pairing with the type D side: by rigidity there is a unique
    equivalence class from the paired identity into the paired composite,
    so it is found by the morphism-space search instead of materializing
    the bimodule-level equivalence (whose component count explodes at
    genus two).
    """
    from .equivalence import find_homotopy_equivalence
    from .structures import reduce_structure
    M, psi_m = A.module, A.psi
    P, psi_p = D.structure, D.psi
    circle = P.out_alg.circle
    az = cfda_az(circle)
    azb = cfda_azbar(circle)
    ident = identity_da(circle)

    base = box_tensor(M, P)
    id_p = box_tensor(ident, P)
    composite = box_tensor(azb, az)
    paired = box_tensor(composite, P)
    red = reduce_structure(paired, track_from=True)
    bridge = find_homotopy_equivalence(id_p, red.reduced)
    omega_p = bridge.forward.then(red.from_reduced)

    m_idp = box_tensor(M, id_p)
    relabel = {f"{m}|{p}": f"{m}|e_{_idem_label(P, p)}|{p}"
               for m in M.generators for p in P.generators
               if f"{m}|{p}" in set(base.generators)}
    step1 = morphism_from_generator_map(base, m_idp, relabel)
    step2 = box_morphism_right(M, omega_p)
    # strict associativity: M x (T x P) equals (M x azbar) x (az x P)
    m_azb = box_tensor(M, azb)
    az_p = box_tensor(az, P)
    regrouped = box_tensor(m_azb, az_p)
    if set(step2.target.generators) != set(regrouped.generators) or \
       step2.target.ops != regrouped.ops:
        raise RelationViolation("box tensor failed to reassociate strictly")
    step3 = Morphism(step2.target, regrouped,
                     identity_components(step2.target))
    step4 = box_morphism_right(m_azb, psi_p)
    step5 = box_morphism_left(psi_m, P)
    conj = step1.then(step2).then(step3).then(step4).then(step5)

    cx = to_chain_complex(base)
    conj_mat = _cx_matrix(conj, cx, cx)
    n = cx.dim
    gens = tuple(f"S:{g}" for g in cx.generators) + \
        tuple(f"T:{g}" for g in cx.generators)
    one_plus = conj_mat + F2Matrix.identity(n)
    cols = [cx.d.cols[j] | (one_plus.cols[j] << n) for j in range(n)]
    cols += [cx.d.cols[j] << n for j in range(n)]
    d = F2Matrix(2 * n, 2 * n, tuple(cols))
    q_cols = [(1 << (n + j)) for j in range(n)] + [0] * n
    q = F2Matrix(2 * n, 2 * n, tuple(q_cols))
    return ChainComplex(gens, d, actions={"Q": q}, shift=-1)


def _idem_label(P, p):
    alg = P.out_alg
    return alg.label_of(alg.idem_element(P.out_idem[p]))


def identity_components(A):
    """Identity components between equal structures with equal labels."""
    return {(g, (), A.out_alg.idem_element(A.out_idem[g]), g)
            for g in A.generators}


# ---------------------------------------------------------------------------
# mapping class group action


def mcg_action(M, P, chi, chi_inv):
    """The homology action of a mapping class supplied as a bimodule pair.

    Inserts the certified equivalence from the identity bimodule into
    chi boxtimes chi_inv, then contracts both halves with their unique
    equivalences; the result is the induced matrix on the homology of the
    pairing complex.
    """
    circle = P.out_alg.circle
    ident = identity_da(circle)
    composite = box_tensor(chi, chi_inv)
    insertion = find_structure_equivalence(ident, composite).forward
    theta1 = find_homotopy_equivalence(box_tensor(chi_inv, P), P).forward
    theta0 = find_structure_equivalence(box_tensor(M, chi), M).forward

    base = box_tensor(M, P)
    id_p = box_tensor(ident, P)
    m_idp = box_tensor(M, id_p)
    relabel = {f"{m}|{p}": f"{m}|e_{_idem_label(P, p)}|{p}"
               for m in M.generators for p in P.generators
               if f"{m}|{p}" in set(base.generators)}
    step1 = morphism_from_generator_map(base, m_idp, relabel)
    step2 = box_morphism_right(M, box_morphism_left(insertion, P))
    m_chi = box_tensor(M, chi)
    chi_inv_p = box_tensor(chi_inv, P)
    regrouped = box_tensor(m_chi, chi_inv_p)
    if set(step2.target.generators) != set(regrouped.generators) or \
       step2.target.ops != regrouped.ops:
        raise RelationViolation("box tensor failed to reassociate strictly")
    step3 = Morphism(step2.target, regrouped,
                     identity_components(step2.target))
    step4 = box_morphism_right(m_chi, theta1)
    step5 = box_morphism_left(theta0, P)
    action = step1.then(step2).then(step3).then(step4).then(step5)

    cx = to_chain_complex(base)
    mat = _cx_matrix(action, cx, cx)
    if not (mat * cx.d + cx.d * mat).is_zero():
        raise RelationViolation("mapping class composite is not a chain map")
    hom = homology(cx)
    cols = []
    for z in hom.cycles:
        vec = express_in_homology(cx, hom, mat.apply(z))
        if vec is None:
            raise RelationViolation("action does not descend to homology")
        cols.append(vec)
    return F2Matrix(hom.dimension, hom.dimension, tuple(cols))
