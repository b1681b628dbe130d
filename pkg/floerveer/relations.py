""" Lifted relation matrices, the taut/veering/anti-veering polynomials and their identities

Every column of a relation matrix is anchored at one vertex of the dual graph
(the tail of a face column's edge, the vertex of a tetrahedron column). The
entry of a sector is the cocycle sum along its boundary from its bottom
corner to the anchor, so sides that differ by a sector boundary give the same
group element.
"""
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from floerveer import errors
from floerveer.groupring import (DEFAULT_MINOR_BUDGET, GroupRingElement, determinant, exquo, gcd_of_minors,
                                 linear_value)
from floerveer.homology import HomologyModel
from floerveer.states import enumerate_states, statesum_polynomial
from floerveer.vbs import SIDES, VeeringBranchedSurface, decompose_anti_branch_loops, decompose_branch_loops

log = logging.getLogger(__name__)

MAW_RULES = ("bottom", "first_top")


@dataclass(frozen=True)
class Cocycle:
    """ Free part of a group element on each dual edge; zero on spanning tree edges. """

    values: tuple
    nvars: int

    def total(self, edges):
        exponent = [0] * self.nvars
        for e in edges:
            exponent = [a + b for a, b in zip(exponent, self.values[e])]
        return tuple(exponent)

    def monomial(self, edges, coeff: int = 1):
        return GroupRingElement.monomial(self.total(edges), coeff)

    def one(self):
        return GroupRingElement.one(self.nvars)


def build_cocycle(hm: HomologyModel):
    """ Cocycle whose sum over any cycle is the free part of its class. """

    return Cocycle(tuple(hm.edge_class(e).free for e in range(len(hm.edge_ends))), hm.free_rank)


def trivial_cocycle(edge_count: int):
    """ Cocycle into the trivial group; relation matrices become integer matrices. """
    return Cocycle(((),) * edge_count, 0)


def _zeros(rows: int, cols: int, nvars: int):
    return [[GroupRingElement.zero(nvars) for _ in range(cols)] for _ in range(rows)]


def _add(matrix, row: int, col: int, value: GroupRingElement):
    matrix[row][col] = matrix[row][col] + value


# RELATION MATRICES
def face_matrix(vbs: VeeringBranchedSurface, cocycle: Cocycle, maw_rule: str = "bottom"):
    """ Sector by edge matrix of face relations.

    Column e holds -1 at the sector having e as its bottom side and, at each
    top-side occurrence of e, the cocycle sum of the path below it.

    Args:
        maw_rule (str, optional): "bottom" is the correct rule; "first_top"
            moves the negative role to the first top-side occurrence and
            exists to show that the audit catches a wrong rule. """

    if maw_rule not in MAW_RULES:
        raise ValueError(f"unknown maw rule {maw_rule!r}")
    matrix = _zeros(vbs.n, len(vbs.edges), cocycle.nvars)
    for e in vbs.edges:
        maw = vbs.bottom_occurrence(e.id) if maw_rule == "bottom" else vbs.first_top_occurrence(e.id)
        for occ in vbs.occurrences(e.id):
            below = vbs.sectors[occ.sector].path(occ.side)[:occ.index]
            sign = -1 if occ == maw else 1
            _add(matrix, occ.sector, e.id, cocycle.monomial(below, sign))
    return matrix


def tetrahedron_matrix(vbs: VeeringBranchedSurface, cocycle: Cocycle):
    """ Sector by triple point matrix of tetrahedron relations.

    Column v: the sector topped at v, plus each sector having v strictly
    inside a top side, minus the sector with bottom corner v. """

    matrix = _zeros(vbs.n, vbs.n, cocycle.nvars)
    for v in range(vbs.n):
        top = vbs.sectors[vbs.sector_with_top(v)]
        _add(matrix, top.id, v, cocycle.monomial(top.path_a))
        for s in vbs.sectors:
            for side in SIDES:
                path = s.path(side)
                for k in range(1, len(path) - 1):
                    if vbs.edge(path[k]).dst == v:
                        _add(matrix, s.id, v, cocycle.monomial(path[:k + 1]))
        _add(matrix, vbs.sector_with_bottom(v), v, -cocycle.one())
    return matrix


def antitetrahedron_matrix(vbs: VeeringBranchedSurface, cocycle: Cocycle):
    """ Sector by triple point matrix of anti-tetrahedron relations.

    Column v: the sector topped at v and the sector with bottom corner v
    positive, the two sectors having v as a side corner negative. """

    matrix = _zeros(vbs.n, vbs.n, cocycle.nvars)
    for v in range(vbs.n):
        top = vbs.sectors[vbs.sector_with_top(v)]
        _add(matrix, top.id, v, cocycle.monomial(top.path_a))
        for s, side in vbs.sectors_with_side(v):
            _add(matrix, s, v, cocycle.monomial(vbs.sectors[s].path(side)[:1], -1))
        _add(matrix, vbs.sector_with_bottom(v), v, cocycle.one())
    return matrix


def column(matrix, j: int):
    return [row[j] for row in matrix]


def facereldiff_audit(vbs: VeeringBranchedSurface, cocycle: Cocycle, maw_rule: str = "bottom"):
    """ Check that face columns of a smooth pair differ by the anti-tetrahedron column.

    For each triple point v and each smooth pair (incoming e, outgoing f) at
    v, the face column of e re-anchored at v minus the face column of f must
    equal the anti-tetrahedron column of v. """

    faces = face_matrix(vbs, cocycle, maw_rule)
    anti = antitetrahedron_matrix(vbs, cocycle)
    for v in range(vbs.n):
        for e in vbs.in_edges(v):
            f = vbs.smooth[e]
            lift = cocycle.monomial((e,))
            diff = [lift * a - b for a, b in zip(column(faces, e), column(faces, f))]
            if diff != column(anti, v):
                log.debug("Face relation difference fails at v=%d for pair (%d, %d)", v, e, f)
                return False
    return True


# POLYNOMIALS
def taut_polynomial(vbs: VeeringBranchedSurface, cocycle: Cocycle, budget: int = DEFAULT_MINOR_BUDGET):
    """ gcd of the maximal minors of the face matrix, canonical. """
    return gcd_of_minors(face_matrix(vbs, cocycle), budget)


def veering_polynomial(vbs: VeeringBranchedSurface, cocycle: Cocycle):
    return determinant(tetrahedron_matrix(vbs, cocycle)).canonical()


def antiveering_polynomial(vbs: VeeringBranchedSurface, cocycle: Cocycle):
    return determinant(antitetrahedron_matrix(vbs, cocycle)).canonical()


def check_categorification(vbs: VeeringBranchedSurface, hm: HomologyModel, cocycle: Cocycle, states=None):
    """ The anti-veering determinant agrees up to units with the sum over Heegaard states. """

    states = states if states is not None else enumerate_states(vbs)
    return antiveering_polynomial(vbs, cocycle).equal_up_to_unit(statesum_polynomial(vbs, hm, states))


class Verdict(enum.Enum):
    EXACT = "exact"
    WITH_UNIT_FACTOR = "with_unit_factor"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class FactorizationVerdict:
    verdict: Verdict
    factor: str = None

    @property
    def passed(self):
        return self.verdict in (Verdict.EXACT, Verdict.WITH_UNIT_FACTOR)

    def __str__(self):
        if self.verdict == Verdict.WITH_UNIT_FACTOR:
            return f"with_unit_factor({self.factor})"
        return self.verdict.value


def loop_classes(cocycle: Cocycle, loops):
    return [cocycle.total(loop) for loop in loops]


def compare_factorization(lhs: GroupRingElement, rhs: GroupRingElement):
    """ lhs = rhs up to units; when there is one variable, also try lhs times (1 - t) or (1 + t). """

    if lhs.nvars == 0:
        return FactorizationVerdict(Verdict.NOT_APPLICABLE)
    if lhs.equal_up_to_unit(rhs):
        return FactorizationVerdict(Verdict.EXACT)
    if lhs.nvars == 1:
        one, t = GroupRingElement.one(1), GroupRingElement.monomial((1,))
        for label, factor in (("1-t", one - t), ("1+t", one + t)):
            if (lhs * factor).equal_up_to_unit(rhs):
                return FactorizationVerdict(Verdict.WITH_UNIT_FACTOR, label)
    return FactorizationVerdict(Verdict.FAIL)


def check_factorization_A(vbs: VeeringBranchedSurface, cocycle: Cocycle, theta=None, anti=None, classes=None):
    """ A against taut times the product of (1 - [b]) over branch loops b.

    classes overrides the branch loop classes. """

    theta = theta if theta is not None else taut_polynomial(vbs, cocycle)
    anti = anti if anti is not None else antiveering_polynomial(vbs, cocycle)
    if classes is None:
        classes = loop_classes(cocycle, decompose_branch_loops(vbs).loops)
    one = cocycle.one()
    rhs = reduce(lambda acc, g: acc * (one - GroupRingElement.monomial(g)), classes, theta) \
        if cocycle.nvars else theta
    return compare_factorization(anti, rhs)


def check_factorization_V(vbs: VeeringBranchedSurface, cocycle: Cocycle, theta=None, veering=None,
                          preserving=None):
    """ V against taut times (1 - [a]) per orientation-preserving and (1 + [a]) per reversing anti-branch loop.

    preserving overrides the loop parities. """

    theta = theta if theta is not None else taut_polynomial(vbs, cocycle)
    veering = veering if veering is not None else veering_polynomial(vbs, cocycle)
    anti_loops = decompose_anti_branch_loops(vbs)
    if preserving is None:
        preserving = anti_loops.orientation_preserving
    rhs = theta
    if cocycle.nvars:
        one = cocycle.one()
        for g, keeps in zip(loop_classes(cocycle, anti_loops.loops), preserving):
            monomial = GroupRingElement.monomial(g)
            rhs = rhs * (one - monomial if keeps else one + monomial)
    return compare_factorization(veering, rhs)


# POSITIVE FUNCTIONAL
def cycle_classes(hm: HomologyModel, cocycle: Cocycle):
    """ Free classes of the directed simple cycles of the dual graph. """

    line = nx.DiGraph()
    line.add_nodes_from(range(len(hm.edge_ends)))
    for e, (_, head) in enumerate(hm.edge_ends):
        for f, (tail, _) in enumerate(hm.edge_ends):
            if head == tail:
                line.add_edge(e, f)
    classes = sorted({cocycle.total(cycle) for cycle in nx.simple_cycles(line)})
    log.debug("%d distinct cycle classes", len(classes))
    return classes


def _rational_guess(values, max_denominator: int = 1000):
    """ Values read as fractions, scaled by the lcm of their denominators. """

    fractions = [Fraction(x).limit_denominator(max_denominator) for x in values]
    scale = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fractions), 1)
    return [int(f * scale) for f in fractions]


def _primitive(vector):
    common = reduce(gcd, vector, 0) or 1
    return tuple(int(x) // common for x in vector)


def positive_functional(hm: HomologyModel, cycles=None, cocycle: Cocycle = None):
    """ Integer functional positive on every given cycle class, or None.

    Args:
        hm (HomologyModel): Homology of the surface.
        cycles (list, optional): Free class vectors. Defaults to the classes
            of all directed simple cycles of the dual graph.
    Returns:
        tuple: Primitive integer functional, or None when none exists. """

    cocycle = cocycle or build_cocycle(hm)
    classes = cycles if cycles is not None else cycle_classes(hm, cocycle)
    if not classes:
        return None
    if hm.free_rank == 0 or any(not any(g) for g in classes):
        return None

    a_ub = -np.array(classes, dtype=float)
    b_ub = -np.ones(len(classes))
    c = np.array(classes, dtype=float).sum(axis=0)
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * hm.free_rank)
    if not res.success:
        log.debug("No positive functional: %s", res.message)
        return None

    functional = _primitive(_rational_guess(res.x))
    if not all(linear_value(functional, g) > 0 for g in classes):
        # rounding scale * x moves g . x by less than half the l1 norm of g
        scale = max(sum(abs(a) for a in g) for g in classes) + 1
        functional = _primitive([round(scale * x) for x in res.x])
        log.debug("Rounded functional was not positive, rescaled by %d", scale)
    if not all(linear_value(functional, g) > 0 for g in classes):
        raise errors.NoPositiveFunctional(f"rounded functional {list(functional)} is not positive on every cycle")
    return functional


def require_positive_functional(hm: HomologyModel, cocycle: Cocycle = None):
    """ As positive_functional, raising when there is none.

    Raises:
        errors.NoPositiveFunctional: No functional is positive on all cycle classes. """

    functional = positive_functional(hm, cocycle=cocycle)
    if functional is None:
        raise errors.NoPositiveFunctional("no functional is positive on every cycle class")
    return functional


def theta_divides(theta: GroupRingElement, other: GroupRingElement):
    """ Exact division check of a determinant by the taut polynomial. """
    return exquo(other, theta) is not None
