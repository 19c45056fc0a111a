"""Optional stretch tier: Golay code parameters, Mathieu group orders and
the rank-3 Petersen-type geometry of Aut(M22)."""

import pytest

from geomforge import build, local, m22
from geomforge.geom import derived_graph, diagram, is_flag_transitive, is_geometry
from geomforge.natrep import um_dimension, verify_natural_representation
pytestmark = pytest.mark.stretch


@pytest.fixture(scope="module")
def p1():
    return build.m22_pipeline(seed=11)


class TestGolay:
    def test_weight_distribution(self):
        code = m22.golay_code()
        assert len(code.octads) == 759
        weights = {}
        for w in code.words:
            k = bin(w).count("1")
            weights[k] = weights.get(k, 0) + 1
        assert weights == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}

    def test_dimension(self):
        assert len(m22.golay_code().basis) == 12

    def test_manifest_tampering_detected(self, tmp_path, monkeypatch):
        import shutil

        src = m22.data_dir()
        work = tmp_path / "data"
        shutil.copytree(src, work)
        target = work / "golay_generator.json"
        target.write_text(target.read_text().replace("1", "0", 1))
        monkeypatch.setenv("GEOMFORGE_DATA", str(work))
        with pytest.raises(build.ConstructionError):
            m22._load_verified("golay_generator.json")


class TestMathieu:
    def test_m24_order(self):
        assert m22.mathieu_group_24().order() == 244823040

    def test_m24_generators_preserve_code(self):
        code = m22.golay_code()
        group = m22.mathieu_group_24()
        for g in group.generators:
            for b in code.basis:
                assert code.contains(m22._apply_perm_to_mask(g, b))

    def test_m24_is_5_transitive_on_orbits(self):
        group = m22.mathieu_group_24()
        assert len(group.point_orbit(0)) == 24

    def test_aut_m22_order(self):
        assert m22.aut_m22(seed=11).order() == 887040

    def test_aut_m22_fixes_duad(self):
        group = m22.aut_m22(seed=11)
        for g in group.generators:
            assert {g.images[22], g.images[23]} == {22, 23}


class TestP1Geometry:
    def test_counts(self, p1):
        counts = [len(p1.geometry.elements_of_type(t)) for t in (1, 2, 3)]
        assert counts == [231, 1155, 330]

    def test_axioms_and_transitivity(self, p1):
        assert is_geometry(p1.geometry).ok
        assert is_flag_transitive(p1.geometry, p1.action)

    def test_diagram_is_petersen_type(self, p1):
        report = diagram(p1.geometry)
        assert report.edge(1, 2) == "projective-plane-2"
        assert report.edge(2, 3) == "petersen-edge"
        assert report.edge(1, 3) == "digon"
        assert report.orders == {1: 2, 2: 2, 3: 1}

    def test_um_dimension_is_11(self, p1):
        result = um_dimension(p1.geometry)
        assert result.total_dim == 11

    def test_duad_representation_valid(self, p1):
        verdict = verify_natural_representation(p1.geometry, p1.natural_vectors)
        assert verdict.ok
        # conjugates of the heptad subspace need not span the whole module
        assert verdict.span_dim <= 11

    def test_derived_graph_girth_5(self, p1):
        graph = derived_graph(p1.geometry)
        assert graph.n == 330 and graph.is_regular() == 7
        assert local.girth(graph) == 5

    def test_hypothesis_61_passes(self, p1):
        graph = derived_graph(p1.geometry)
        action = p1.action.restricted(p1.geometry.elements_of_type(3))
        report = local.hypothesis_61_check(graph, action)
        assert report.verdict, report.first_failure
        assert report.local_order == 168  # L3(2) on the 7 neighbors
        assert report.kernel_order == 16
