"""Coset enumeration, fundamental groups, triangulability, homology and
finite covers."""

from itertools import combinations
from random import Random

import pytest

from geomforge.cover import (
    CoverCapacityError,
    Presentation,
    PresentationError,
    TriangleComplex,
    build_cover,
    homology_rank,
    is_triangulable,
    pi1_presentation,
    todd_coxeter,
)
from geomforge.geom import collinearity_graph
from geomforge.graphs import Graph, petersen_graph
from oracles import naive_rank


def cycle_graph(n):
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(range(n), list(combinations(range(n), 2)))


A5_RELATORS = ["aa", "bbb", "ababababab"]


class TestToddCoxeter:
    def test_a5_has_index_60(self):
        pres = Presentation.from_strings(["a", "b"], A5_RELATORS)
        outcome = todd_coxeter(pres)
        assert outcome.completed and outcome.index == 60

    def test_s3_over_a_has_index_3(self):
        pres = Presentation.from_strings(["a", "b"], ["aa", "bb", "ababab"], ["a"])
        outcome = todd_coxeter(pres)
        assert outcome.completed and outcome.index == 3

    def test_free_group_overflows(self):
        pres = Presentation.from_strings(["a"], [])
        outcome = todd_coxeter(pres, limit=100)
        assert outcome.status == "overflow" and outcome.limit == 100

    def test_index_invariant_under_relator_shuffles(self):
        rng = Random(424242)
        relators = list(A5_RELATORS)
        for _ in range(20):
            rng.shuffle(relators)
            pres = Presentation.from_strings(["a", "b"], relators)
            assert todd_coxeter(pres).index == 60

    def test_index_invariant_under_generator_renaming(self):
        pres = Presentation.from_strings(["x", "y"], ["xx", "yyy", "xyxyxyxyxy"])
        assert todd_coxeter(pres).index == 60

    def test_completed_table_traces_relators(self):
        pres = Presentation.from_strings(["a", "b"], ["aa", "bb", "abababab"])
        outcome = todd_coxeter(pres)
        assert outcome.index == 8  # dihedral of order 8
        table = outcome.table
        from geomforge.cover import _CosetTable

        for c in range(outcome.index):
            for word in pres.relators:
                cur = c
                for letter in word:
                    cur = table[cur][_CosetTable.column(letter)]
                assert cur == c

    def test_quaternion_group(self):
        # <a, b | a^4 = 1, b^2 = a^2, b^-1 a b = a^-1>
        pres = Presentation.from_strings(["a", "b"], ["aaaa", "bbAA", "Baba"])
        assert todd_coxeter(pres).index == 8

    def test_subgroup_words_fix_origin(self):
        # S3 = <a, b | a^2, b^2, (ab)^3> over the rotation subgroup <ab>
        pres = Presentation.from_strings(["a", "b"], ["aa", "bb", "ababab"], ["ab"])
        outcome = todd_coxeter(pres)
        assert outcome.index == 2

    def test_triangle_group_233_is_a4(self):
        pres = Presentation.from_strings(["a", "b"], ["aa", "bbb", "ababab"])
        assert todd_coxeter(pres).index == 12

    def test_limit_validation(self):
        pres = Presentation.from_strings(["a"], ["aa"])
        with pytest.raises(ValueError):
            todd_coxeter(pres, limit=0)

    def test_coset_permutations(self):
        pres = Presentation.from_strings(["a", "b"], ["aa", "bb", "ababab"])
        outcome = todd_coxeter(pres)
        perms = outcome.coset_permutations()
        assert len(perms) == 2
        for p in perms:
            assert sorted(p) == list(range(outcome.index))


class TestPresentationParsing:
    def test_uppercase_is_inverse(self):
        pres = Presentation.from_strings(["a"], ["aA"])
        assert pres.relators == ((1, -1),)

    def test_unknown_letter_rejected(self):
        with pytest.raises(PresentationError):
            Presentation.from_strings(["a"], ["ab"])

    def test_json_roundtrip(self):
        payload = {"generators": ["a", "b"], "relators": ["aa"], "subgroup": ["b"]}
        pres = Presentation.from_json(payload)
        assert pres.word_to_string(pres.relators[0]) == "aa"
        assert pres.subgroup == ((2,),)


class TestPi1:
    def test_five_cycle(self):
        pres = pi1_presentation(TriangleComplex(cycle_graph(5)))
        assert len(pres.generators) == 1 and not pres.relators

    def test_k4_full_triangles(self):
        k4 = complete_graph(4)
        complex_ = TriangleComplex(k4, tuple(k4.triangles()))
        pres = pi1_presentation(complex_)
        assert len(pres.generators) == 3
        assert len(pres.relators) == 4
        assert all(len(w) <= 3 for w in pres.relators)

    def test_tree_no_generators(self):
        tree = Graph(range(5), [(0, 1), (0, 2), (2, 3), (2, 4)])
        pres = pi1_presentation(TriangleComplex(tree))
        assert not pres.generators

    def test_disconnected_rejected(self):
        graph = Graph(range(4), [(0, 1), (2, 3)])
        with pytest.raises(ValueError):
            pi1_presentation(TriangleComplex(graph))

    def test_non_clique_triangle_rejected(self):
        with pytest.raises(ValueError):
            TriangleComplex(cycle_graph(5), ((0, 1, 2),))


class TestTriangulability:
    def test_k4_yes(self):
        k4 = complete_graph(4)
        verdict = is_triangulable(TriangleComplex(k4, tuple(k4.triangles())))
        assert verdict == "yes"

    def test_five_cycle_no_with_certificate(self):
        verdict = is_triangulable(TriangleComplex(cycle_graph(5)))
        assert verdict == "no"
        assert "GF(2)" in verdict.reason

    def test_petersen_no(self):
        complex_ = TriangleComplex(petersen_graph())
        assert homology_rank(complex_, 2) == 6
        verdict = is_triangulable(complex_)
        assert verdict == "no"

    def test_yes_implies_zero_homology(self):
        k4 = complete_graph(4)
        complex_ = TriangleComplex(k4, tuple(k4.triangles()))
        assert is_triangulable(complex_) == "yes"
        assert homology_rank(complex_, 2) == 0
        assert homology_rank(complex_, 3) == 0


class TestHomology:
    def test_five_cycle_rank_1(self):
        complex_ = TriangleComplex(cycle_graph(5))
        assert homology_rank(complex_, 2) == 1
        assert homology_rank(complex_, 3) == 1

    def test_k4_full_rank_0(self):
        k4 = complete_graph(4)
        complex_ = TriangleComplex(k4, tuple(k4.triangles()))
        assert homology_rank(complex_, 2) == 0

    def test_gq_line_triangles_gf3(self, gq22):
        graph = collinearity_graph(gq22.geometry)
        g = gq22.geometry
        triangles = []
        for line in g.elements_of_type(2):
            pts = tuple(
                sorted((p for p in g.pencil(line) if g.type_of[p] == 1), key=repr)
            )
            triangles.append(pts)
        complex_ = TriangleComplex(graph, tuple(triangles))
        assert graph.num_edges == 45 and graph.n == 15
        assert len(complex_.triangles) == 15
        # every 3-clique of a generalized quadrangle lies inside a line
        assert sorted(complex_.triangles) == sorted(graph.triangles())
        rank = homology_rank(complex_, 3)
        # independent oracle: 31 - rank of the boundary matrix over GF(3)
        edges = graph.edges()
        edge_index = {frozenset(e): i for i, e in enumerate(edges)}
        dense = [[0] * len(complex_.triangles) for _ in range(len(edges))]
        for col, (a, b, c) in enumerate(complex_.triangles):
            for u, v in ((a, b), (b, c), (c, a)):
                row = edge_index[frozenset((u, v))]
                oriented = tuple(sorted((u, v), key=repr)) == (u, v)
                dense[row][col] = 1 if oriented else 2
        oracle = (45 - 15 + 1) - naive_rank(dense, 3)
        assert rank == oracle
        assert rank >= 16


class TestCovers:
    def test_four_cycle_double_cover(self):
        complex_ = TriangleComplex(cycle_graph(4))
        cover, projection = build_cover(complex_, ["aa"])
        assert cover.graph.n == 8
        assert cover.graph.is_regular() == 2
        assert cover.graph.is_connected()

    def test_six_cycle_triple_cover(self):
        complex_ = TriangleComplex(cycle_graph(6))
        cover, _ = build_cover(complex_, ["aaa"])
        assert cover.graph.n == 18 and cover.graph.is_connected()

    def test_index_one_isomorphic_copy(self):
        k4 = complete_graph(4)
        complex_ = TriangleComplex(k4, tuple(k4.triangles()))
        cover, projection = build_cover(complex_, ["a", "b", "c"])
        assert cover.graph.n == 4 and cover.graph.num_edges == 6
        assert len(cover.triangles) == 4

    def test_neighborhood_bijection(self):
        complex_ = TriangleComplex(cycle_graph(4))
        cover, projection = build_cover(complex_, ["aa"])
        for v in cover.graph.vertices:
            down = sorted(projection[w] for w in cover.graph.neighbors(v))
            base = sorted(complex_.graph.neighbors(projection[v]))
            assert down == base

    def test_overflow_raises_capacity(self):
        complex_ = TriangleComplex(cycle_graph(4))
        with pytest.raises(CoverCapacityError):
            build_cover(complex_, [], limit=50)
