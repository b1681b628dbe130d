""" Integer homology of a veering branched surface via Smith normal form """
import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np

from floerveer import errors
from floerveer.vbs import VeeringBranchedSurface, decompose_branch_loops, sector_boundary

log = logging.getLogger(__name__)


class SNF:
    """ Smith normal form of an integer matrix by repeated Euclidean elimination.

    Entries are kept as Python integers (object arrays) so nothing overflows.

    Parameters
    ----------
    matrix: array-like, (m, n)
        integer matrix
    """

    def __init__(self, matrix):
        self.A_org = np.array(matrix, dtype=object).reshape(np.shape(matrix))
        self.A_ = self.A_org.copy()
        self.left = identity(self.A_.shape[0])
        self.right = identity(self.A_.shape[1])

    @property
    def num_row(self):
        return self.A_.shape[0]

    @property
    def num_column(self):
        return self.A_.shape[1]

    def get_smith_normal_form(self):
        """
        Returns
        -------
        D: array, (m, n)
        left: array, (m, m)
        right: array, (n, n)
            D = left @ M @ right, left and right unimodular,
            diagonal entries nonnegative and each dividing the next.
        """
        s = 0
        while s < min(self.A_.shape):
            row, col = get_nonzero_min_abs(self.A_, s)
            if row is None:
                break
            self._swap_rows(s, row)
            self._swap_columns(s, col)

            for i in range(s + 1, self.num_row):
                k = self.A_[i, s] // self.A_[s, s]
                if k:
                    self._add_row(i, s, -k)
            for j in range(s + 1, self.num_column):
                k = self.A_[s, j] // self.A_[s, s]
                if k:
                    self._add_column(j, s, -k)

            if any(self.A_[i, s] for i in range(s + 1, self.num_row)) \
                    or any(self.A_[s, j] for j in range(s + 1, self.num_column)):
                # remainders left, pick a smaller pivot
                continue

            row_next = self._find_non_divisible_row(s)
            if row_next is not None:
                self._add_row(s, row_next, 1)
                continue
            if self.A_[s, s] < 0:
                self._change_sign_row(s)
            s += 1
        return self.A_, self.left, self.right

    def _find_non_divisible_row(self, s):
        for i in range(s + 1, self.num_row):
            for j in range(s + 1, self.num_column):
                if self.A_[i, j] % self.A_[s, s] != 0:
                    return i
        return None

    def _swap_rows(self, axis1, axis2):
        self.left[[axis1, axis2]] = self.left[[axis2, axis1]]
        self.A_[[axis1, axis2]] = self.A_[[axis2, axis1]]

    def _swap_columns(self, axis1, axis2):
        self.right[:, [axis1, axis2]] = self.right[:, [axis2, axis1]]
        self.A_[:, [axis1, axis2]] = self.A_[:, [axis2, axis1]]

    def _change_sign_row(self, axis):
        self.left[axis] *= -1
        self.A_[axis] *= -1

    def _add_row(self, axis1, axis2, k):
        """ add k times row axis2 to row axis1 """
        self.left[axis1] += self.left[axis2] * k
        self.A_[axis1] += self.A_[axis2] * k

    def _add_column(self, axis1, axis2, k):
        """ add k times column axis2 to column axis1 """
        self.right[:, axis1] += self.right[:, axis2] * k
        self.A_[:, axis1] += self.A_[:, axis2] * k


def identity(size: int):
    matrix = np.zeros((size, size), dtype=object)
    for i in range(size):
        matrix[i, i] = 1
    return matrix


def get_nonzero_min_abs(A, s):
    """
    return argmin_{i, j} abs(A[i, j]) s.t. i >= s, j >= s and A[i, j] != 0,
    (None, None) if the block is zero
    """
    idx = (None, None)
    valmin = None
    for i in range(s, A.shape[0]):
        for j in range(s, A.shape[1]):
            if A[i, j] == 0:
                continue
            if valmin is None or abs(A[i, j]) < valmin:
                idx = (i, j)
                valmin = abs(A[i, j])
    return idx


def diagonal(D):
    return [D[i, i] for i in range(min(D.shape))]


@dataclass(frozen=True)
class HomologyClass:
    """ Element of Z^b + torsion. Torsion coordinates are kept reduced. """

    free: tuple
    torsion: tuple = ()
    moduli: tuple = ()

    def __post_init__(self):
        reduced = tuple(int(x) % m for x, m in zip(self.torsion, self.moduli))
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(self, "torsion", reduced)

    def __add__(self, other):
        return HomologyClass(tuple(a + b for a, b in zip(self.free, other.free)),
                             tuple(a + b for a, b in zip(self.torsion, other.torsion)),
                             self.moduli)

    def __neg__(self):
        return HomologyClass(tuple(-a for a in self.free), tuple(-a for a in self.torsion), self.moduli)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return HomologyClass(tuple(k * a for a in self.free), tuple(k * a for a in self.torsion), self.moduli)

    def is_zero(self):
        return not any(self.free) and not any(self.torsion)

    def to_dict(self):
        return {"free": list(self.free), "torsion": list(self.torsion)}


@dataclass(frozen=True, eq=False)
class HomologyModel:
    """ H1(M) as H1(dual graph) modulo sector boundaries.

    Cycles are coordinatized by their values on the chords (non-tree edges) of
    a spanning tree; transform carries chord coordinates to Smith coordinates. """

    edge_ends: tuple
    vertex_count: int
    tree_edges: tuple
    chords: tuple
    transform: np.ndarray
    free_columns: tuple
    torsion_columns: tuple
    torsion_invariants: tuple

    @property
    def free_rank(self):
        return len(self.free_columns)

    def zero(self):
        return HomologyClass((0,) * self.free_rank, (0,) * len(self.torsion_invariants), self.torsion_invariants)

    def project(self, cycle):
        """ Smith coordinates of a cycle; no boundary check. """

        coords = np.array([cycle[c] for c in self.chords], dtype=object)
        w = coords.dot(self.transform) if len(self.chords) else coords
        return HomologyClass(tuple(w[k] for k in self.free_columns),
                             tuple(w[k] for k in self.torsion_columns),
                             self.torsion_invariants)

    def edge_class(self, e: int):
        """ Class of a single edge in the tree-based coordinates (0 on tree edges). """

        unit = [0] * len(self.edge_ends)
        unit[e] = 1
        return self.project(unit)

    def boundary(self, cycle):
        """ Vertex-indexed boundary (in minus out) of an edge vector. """

        result = [0] * self.vertex_count
        for e, (src, dst) in enumerate(self.edge_ends):
            result[dst] += cycle[e]
            result[src] -= cycle[e]
        return result


def spanning_tree_edges(vbs: VeeringBranchedSurface):
    """ Kruskal spanning tree of the undirected dual graph, ties broken by edge id. """

    graph = nx.MultiGraph()
    graph.add_nodes_from(range(vbs.n))
    for e in vbs.edges:
        graph.add_edge(e.src, e.dst, key=e.id, weight=e.id)
    tree = nx.minimum_spanning_edges(graph, algorithm="kruskal", weight="weight", keys=True, data=False)
    return tuple(sorted(key for _, _, key in tree))


def build_homology(vbs: VeeringBranchedSurface):
    """ Build the homology model of the surface's 3-manifold.

    Relations are the sector boundaries restricted to the chords. Free
    coordinates are signed so that the first branch loop with a nonzero value
    in a coordinate is positive there.

    Returns:
        HomologyModel: Free rank, torsion invariants and projection. """

    tree = spanning_tree_edges(vbs)
    chords = tuple(e.id for e in vbs.edges if e.id not in set(tree))
    relations = [[sector_boundary(vbs, s.id)[c] for c in chords] for s in vbs.sectors]

    D, _, right = SNF(relations).get_smith_normal_form()
    diag = diagonal(D)
    free_columns, torsion_columns, invariants = [], [], []
    for k in range(len(chords)):
        d = diag[k] if k < len(diag) else 0
        if d == 0:
            free_columns.append(k)
        elif d > 1:
            torsion_columns.append(k)
            invariants.append(d)

    transform = right.copy()
    edge_ends = tuple((e.src, e.dst) for e in vbs.edges)
    model = HomologyModel(edge_ends, vbs.n, tree, chords, transform,
                          tuple(free_columns), tuple(torsion_columns), tuple(invariants))

    branch = decompose_branch_loops(vbs)
    for k in free_columns:
        for i in range(len(branch.loops)):
            coords = np.array([branch.edge_vector(i, len(vbs.edges))[c] for c in chords], dtype=object)
            value = coords.dot(transform[:, k])
            if value:
                if value < 0:
                    transform[:, k] *= -1
                break

    log.debug("Homology of %s: b=%d torsion=%s", vbs.name, model.free_rank, list(invariants))
    return model


def class_of_cycle(hm: HomologyModel, cycle):
    """ Homology class of an integer 1-cycle of the dual graph.

    Raises:
        errors.NotACycle: The vector has nonzero boundary. """

    for vertex, value in enumerate(hm.boundary(cycle)):
        if value:
            raise errors.NotACycle(vertex, value)
    return hm.project(cycle)
