""" Test Smith normal form and the homology model. """

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from floerveer import errors, fixtures
from floerveer.homology import SNF, build_homology, class_of_cycle, diagonal
from floerveer.vbs import decompose_branch_loops, sector_boundary

manifest = fixtures.manifest()

matrices = st.integers(1, 4).flatmap(
    lambda rows: st.integers(1, 4).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-6, 6), min_size=cols, max_size=cols),
                              min_size=rows, max_size=rows)))


class TestSmithNormalForm:
    """ Test the elimination. """

    @settings(max_examples=60, deadline=None)
    @given(matrix=matrices)
    def test_decomposition(self, matrix):
        """ D = left M right with a divisibility chain on the diagonal. """

        D, left, right = SNF(matrix).get_smith_normal_form()
        M = np.array(matrix, dtype=object)
        assert (left.dot(M).dot(right) == D).all()
        for i in range(D.shape[0]):
            for j in range(D.shape[1]):
                if i != j:
                    assert D[i, j] == 0
        diag = diagonal(D)
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            assert (b == 0) if a == 0 else (b % a == 0)

    def test_known(self):
        """ A matrix with invariant factors 2 and 6. """

        D, _, _ = SNF([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).get_smith_normal_form()
        assert diagonal(D) == [2, 6, 12]


class TestHomologyModel:
    """ Test homology of the fixtures. """

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_ranks(self, name):
        """ Free rank and torsion match the manifest. """

        hm = build_homology(fixtures.surface(name))
        assert hm.free_rank == manifest[name]["free_rank"]
        assert list(hm.torsion_invariants) == manifest[name]["torsion"]

    def test_f8_cocycle(self):
        """ Spanning tree and edge classes of F8. """

        hm = build_homology(fixtures.surface("f8"))
        assert list(hm.tree_edges) == manifest["f8"]["spanning_tree"]
        assert [list(hm.edge_class(e).free) for e in range(4)] == manifest["f8"]["cocycle"]

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_sector_boundaries_vanish(self, name):
        """ Sector boundaries are null-homologous. """

        vbs = fixtures.surface(name)
        hm = build_homology(vbs)
        for s in vbs.sectors:
            assert class_of_cycle(hm, sector_boundary(vbs, s.id)).is_zero()

    @pytest.mark.parametrize("name", fixtures.NAMES)
    def test_branch_loops_nonnegative(self, name):
        """ Free coordinates are signed by the branch loops. """

        vbs = fixtures.surface(name)
        hm = build_homology(vbs)
        branch = decompose_branch_loops(vbs)
        classes = [class_of_cycle(hm, branch.edge_vector(i, len(vbs.edges))) for i in range(len(branch.loops))]
        for k in range(hm.free_rank):
            first = next((c.free[k] for c in classes if c.free[k]), 0)
            assert first >= 0

    def test_f8_branch_loop_classes(self):
        """ Both branch loops of F8 are the generator. """

        vbs = fixtures.surface("f8")
        hm = build_homology(vbs)
        branch = decompose_branch_loops(vbs)
        classes = [list(class_of_cycle(hm, branch.edge_vector(i, 4)).free) for i in range(2)]
        assert classes == manifest["f8"]["branch_loop_classes"]

    def test_torsion_reduced(self):
        """ Torsion coordinates are reduced modulo their invariants. """

        vbs = fixtures.surface("s1")
        hm = build_homology(vbs)
        loop = decompose_branch_loops(vbs).edge_vector(0, len(vbs.edges))
        value = class_of_cycle(hm, [3 * x for x in loop])
        assert all(0 <= t < 5 for t in value.torsion)

    def test_not_a_cycle(self):
        """ A single edge is not a cycle. """

        hm = build_homology(fixtures.surface("f8"))
        with pytest.raises(errors.NotACycle):
            class_of_cycle(hm, [1, 0, 0, 0])

    def test_class_arithmetic(self):
        """ Classes add, negate and scale. """

        hm = build_homology(fixtures.surface("f8"))
        a = class_of_cycle(hm, [1, 1, 0, 0])
        assert (a - a).is_zero()
        assert (2 * a).free == (2,)
        assert (a + a) == 2 * a
