from bhfi import (build_triangle_data, check_structure, compose,
                  is_contractible, tensor_id_left, verify_hfi_triangle)
from bhfi.standard import cfa_zero_handlebody
from bhfi.structures import AInfModule


def comp_labels(morphism):
    return sorted((s, o.label, d) for s, i, o, d in morphism.comps)


class TestTriangleData:
    def test_builds_and_verifies(self):
        data = build_triangle_data()
        assert data.phi.is_cycle() and data.psi.is_cycle()

    def test_displayed_equivalence_values(self):
        data = build_triangle_data()
        assert comp_labels(data.psi_inf) == [
            ("r2.4|r", "r3.4", "r"), ("r3.4|r", "h2", "r")]
        assert comp_labels(data.psi_0) == [
            ("r1.3|n", "r2.3", "n"), ("r2.3|n", "h1", "n")]

    def test_homotopies_are_the_drawn_arrows(self):
        data = build_triangle_data()
        assert comp_labels(data.G) == [
            ("r1.2|r", "r2.4", "b"), ("r1.4|r", "h2", "b"),
            ("r2.4|r", "h1", "a")]
        assert comp_labels(data.H) == [
            ("r1.4|b", "r2.3", "n"), ("r2.4|b", "h1", "n")]

    def test_squares_commute_up_to_homotopy(self, az1):
        data = build_triangle_data()
        lhs = data.G.differential()
        rhs = compose(tensor_id_left(az1, data.phi), data.psi_m1) + \
            compose(data.psi_inf, data.phi)
        assert lhs.comps == rhs.comps

    def test_interchange_identity(self, az1):
        data = build_triangle_data()
        assert compose(data.G, data.psi).comps == \
            compose(tensor_id_left(az1, data.phi), data.H).comps

    def test_equivalences_have_acyclic_cones(self):
        data = build_triangle_data()
        for mor in (data.psi_inf, data.psi_m1, data.psi_0):
            assert is_contractible(mor.cone())


class TestHfiTriangle:
    def test_standard_module(self, cfa1):
        report = verify_hfi_triangle(cfa1)
        assert report.hat_dims == (1, 1, 2)
        assert report.involutive_dims == (2, 2, 4)
        assert report.hat_exact and report.involutive_exact
        assert report.levelwise_exact and report.chain_maps_ok

    def test_relabelled_module_gives_same_report(self, cfa1, z1):
        relabeled = [(f"g_{g}", cfa1.in_idem[g]) for g in cfa1.generators]
        ops = [(f"g_{s}", list(i), f"g_{d}") for s, i, _, d in cfa1.ops]
        M = AInfModule(z1, relabeled, ops)
        assert check_structure(M) == []
        report = verify_hfi_triangle(M)
        assert report.to_json() == verify_hfi_triangle(cfa1).to_json()

    def test_alternate_bounded_module(self, z1):
        # two disjoint copies of the handlebody module
        base = cfa_zero_handlebody(1)
        gens = [(f"{g}0", base.in_idem[g]) for g in base.generators]
        gens += [(f"{g}1", base.in_idem[g]) for g in base.generators]
        ops = [(f"{s}0", list(i), f"{d}0") for s, i, _, d in base.ops]
        ops += [(f"{s}1", list(i), f"{d}1") for s, i, _, d in base.ops]
        M = AInfModule(z1, gens, ops)
        report = verify_hfi_triangle(M)
        assert report.hat_dims == (2, 2, 4)
        assert report.hat_exact and report.involutive_exact
