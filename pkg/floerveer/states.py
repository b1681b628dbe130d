""" Heegaard states, their multi-loops and gradings """
import itertools
import logging
from dataclasses import dataclass

import networkx as nx

from floerveer import errors
from floerveer.groupring import GroupRingElement
from floerveer.homology import HomologyModel, class_of_cycle
from floerveer.utils import permutation_parity
from floerveer.vbs import ROLE_ORDER, Role, VeeringBranchedSurface

log = logging.getLogger(__name__)

# corner assignments are filtered exhaustively only up to this size
FILTER_LIMIT = 8
DEFAULT_STATE_BUDGET = 1_000_000


@dataclass(frozen=True, order=True)
class GraphEdge:
    """ Edge of the augmented dual graph: a dual edge or a sector's vertical edge. """

    kind: str
    id: int


@dataclass(frozen=True)
class HeegaardState:
    """ Sector i is assigned the corner roles[i]. """

    roles: tuple

    @property
    def key(self):
        return tuple(role.rank for role in self.roles)

    def __lt__(self, other):
        return self.key < other.key

    def points(self):
        """ Intersection point ids of the state's coordinates. """
        return frozenset(4 * s + role.rank for s, role in enumerate(self.roles))

    def permutation(self, vbs: VeeringBranchedSurface):
        """ Sector index to triple point index. """
        return [vbs.sectors[s].corner(role) for s, role in enumerate(self.roles)]


def is_state(vbs: VeeringBranchedSurface, roles):
    corners = [vbs.sectors[s].corner(role) for s, role in enumerate(roles)]
    return len(set(corners)) == len(corners)


def bottom_state(vbs: VeeringBranchedSurface):
    return HeegaardState((Role.BOTTOM,) * vbs.n)


def top_state(vbs: VeeringBranchedSurface):
    return HeegaardState((Role.TOP,) * vbs.n)


def enumerate_states_by_filter(vbs: VeeringBranchedSurface):
    """ All corner assignments that are bijections; exhaustive, for small surfaces only.

    Raises:
        errors.SearchBudgetExceeded: More than FILTER_LIMIT sectors. """

    if vbs.n > FILTER_LIMIT:
        raise errors.SearchBudgetExceeded("corner assignments", 4 ** FILTER_LIMIT)
    states = [HeegaardState(roles) for roles in itertools.product(ROLE_ORDER, repeat=vbs.n)
              if is_state(vbs, roles)]
    return sorted(states)


def enumerate_states_by_loops(vbs: VeeringBranchedSurface, budget: int = DEFAULT_STATE_BUDGET):
    """ Embedded multi-loops of the augmented dual graph by backtracking.

    Vertex v chooses the out-edge of its own sector (v is that sector's
    bottom corner): none, the bottom edge of either side, or the vertical
    edge. A head may be used once.

    Raises:
        errors.SearchBudgetExceeded: More than budget states. """

    found, used, roles = [], [False] * vbs.n, [None] * vbs.n

    def extend(v):
        if v == vbs.n:
            found.append(HeegaardState(tuple(roles)))
            if len(found) > budget:
                raise errors.SearchBudgetExceeded("Heegaard states", budget)
            return
        sector = vbs.sectors[v]
        for role in ROLE_ORDER:
            head = sector.corner(role)
            if used[head]:
                continue
            used[head], roles[v] = True, role
            extend(v + 1)
            used[head] = False

    extend(0)
    log.debug("Enumerated %d states of %s", len(found), vbs.name)
    return sorted(found)


def enumerate_states(vbs: VeeringBranchedSurface, budget: int = DEFAULT_STATE_BUDGET):
    return enumerate_states_by_loops(vbs, budget)


def augmented_graph(vbs: VeeringBranchedSurface):
    """ Dual graph plus one vertical edge per sector from its bottom to its top corner. """

    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(vbs.n))
    for e in vbs.edges:
        graph.add_edge(e.src, e.dst, key=GraphEdge("edge", e.id))
    for s in vbs.sectors:
        graph.add_edge(s.bottom_corner, s.top_corner, key=GraphEdge("vertical", s.id))
    return graph


def _ends(vbs: VeeringBranchedSurface, edge: GraphEdge):
    if edge.kind == "edge":
        return vbs.edge(edge.id).src, vbs.edge(edge.id).dst
    sector = vbs.sectors[edge.id]
    return sector.bottom_corner, sector.top_corner


def is_embedded_multiloop(vbs: VeeringBranchedSurface, edges):
    """ In-degree equals out-degree, and is at most 1, at every vertex. """

    ins, outs = [0] * vbs.n, [0] * vbs.n
    for edge in edges:
        src, dst = _ends(vbs, edge)
        outs[src] += 1
        ins[dst] += 1
    return all(i == o and i <= 1 for i, o in zip(ins, outs))


def multi_loop(vbs: VeeringBranchedSurface, x: HeegaardState):
    """ The multi-loop of a state: nothing for a bottom corner, the bottom edge toward a side corner,
    the vertical edge for a top corner. """

    edges = []
    for s, role in enumerate(x.roles):
        if role.is_side:
            edges.append(GraphEdge("edge", vbs.sectors[s].path(role.side)[0]))
        elif role == Role.TOP:
            edges.append(GraphEdge("vertical", s))
    return frozenset(edges)


def top_anchored_loop(vbs: VeeringBranchedSurface, y: HeegaardState):
    """ Complementary loop from y up to the top state: the vertical edge for bottom corners,
    the rest of the side for side corners, nothing for top corners. """

    edges = []
    for s, role in enumerate(y.roles):
        if role == Role.BOTTOM:
            edges.append(GraphEdge("vertical", s))
        elif role.is_side:
            edges.extend(GraphEdge("edge", e) for e in vbs.sectors[s].path(role.side)[1:])
    return tuple(edges)


def chain(vbs: VeeringBranchedSurface, edges, strums=None):
    """ Edge vector of augmented-graph edges, each vertical edge replaced by the boundary path
    of its sector on side strums[s] ("a" by default). """

    vector = [0] * len(vbs.edges)
    for edge in edges:
        if edge.kind == "edge":
            vector[edge.id] += 1
            continue
        side = strums[edge.id] if strums else "a"
        for e in vbs.sectors[edge.id].path(side):
            vector[e] += 1
    return vector


def spinc_class(vbs: VeeringBranchedSurface, hm: HomologyModel, x: HeegaardState, strums=None):
    """ Spin-c grading of x relative to the bottom state, the class of its multi-loop. """

    return class_of_cycle(hm, chain(vbs, multi_loop(vbs, x), strums))


def nu(vbs: VeeringBranchedSurface, x: HeegaardState):
    """ Number of side corners plus the sign of the state's permutation, mod 2. """

    sides = sum(1 for role in x.roles if role.is_side)
    return (sides + permutation_parity(x.permutation(vbs))) % 2


def statesum_polynomial(vbs: VeeringBranchedSurface, hm: HomologyModel, states=None):
    """ Sum over states of (-1)^nu times the monomial of the free part of the spin-c class. """

    terms = {}
    for x in states if states is not None else enumerate_states(vbs):
        exponent = spinc_class(vbs, hm, x).free
        terms[exponent] = terms.get(exponent, 0) + (-1) ** nu(vbs, x)
    return GroupRingElement(terms, hm.free_rank)


def state_record(vbs: VeeringBranchedSurface, hm: HomologyModel, x: HeegaardState):
    """ Report entry for one state. """

    loop = sorted(multi_loop(vbs, x))
    return {
        "corners": [role.value for role in x.roles],
        "multi_loop": [[edge.kind, edge.id] for edge in loop],
        "spinc": spinc_class(vbs, hm, x).to_dict(),
        "nu": nu(vbs, x),
    }

