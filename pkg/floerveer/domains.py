""" Domains of the Heegaard diagram: connecting conditions, enumeration, index and parity

A domain is an integer combination of the empty elementary domains (the
basepoint domains always have coefficient zero). At each intersection point
the alternating sum of the four quadrant coefficients must be +1 on
coordinates of x only, -1 on coordinates of y only, and 0 elsewhere. The
solutions are a particular solution plus the periodic lattice; effective
ones are found by walking the lattice inside the polytope cut out by
nonnegativity.
"""
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from floerveer import errors
from floerveer.heegaard import HeegaardComplex, build_diagram
from floerveer.homology import SNF, HomologyModel, build_homology, diagonal
from floerveer.states import HeegaardState, bottom_state, enumerate_states, nu, spinc_class, top_state
from floerveer.vbs import VeeringBranchedSurface

log = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 16
DEFAULT_DOMAIN_BUDGET = 100_000
EPSILON = 1e-9


@dataclass(frozen=True)
class Domain:
    """ Coefficients over the empty elementary domains, with the states it connects. """

    coefficients: tuple
    x: HeegaardState
    y: HeegaardState

    def is_zero(self):
        return not any(self.coefficients)

    def is_effective(self):
        return all(c >= 0 for c in self.coefficients)

    def is_embedded(self):
        return all(c in (0, 1) for c in self.coefficients)

    def support(self):
        return [d for d, c in enumerate(self.coefficients) if c]

    def multiplicity(self, d: int):
        return self.coefficients[d] if d < len(self.coefficients) else 0


@dataclass(frozen=True, eq=False)
class CornerSystem:
    """ Corner equations of a complex with their Smith decomposition D = left C right. """

    matrix: np.ndarray
    left: np.ndarray
    right: np.ndarray
    invariants: tuple

    @property
    def rank(self):
        return len(self.invariants)

    @property
    def domain_count(self):
        return self.matrix.shape[1]

    def kernel(self):
        """ Integer basis of the solutions with zero right-hand side. """
        return [tuple(int(v) for v in self.right[:, k]) for k in range(self.rank, self.domain_count)]

    def particular(self, rhs):
        """ One integer solution of matrix @ n = rhs, or None. """

        y = self.left.dot(np.array(rhs, dtype=object))
        z = [0] * self.domain_count
        for i, value in enumerate(y):
            if i < self.rank:
                if value % self.invariants[i]:
                    return None
                z[i] = value // self.invariants[i]
            elif value:
                return None
        return tuple(int(v) for v in self.right.dot(np.array(z, dtype=object)))

    def residual(self, coefficients):
        return [int(v) for v in self.matrix.dot(np.array(coefficients, dtype=object))]


def corner_matrix(hc: HeegaardComplex):
    """ Point by empty-domain matrix of alternating quadrant signs. """

    empty = hc.empty_domains()
    column = {d: j for j, d in enumerate(empty)}
    matrix = np.zeros((len(hc.points), len(empty)), dtype=object)
    for p, slots in hc.quadrants.items():
        for k, d in enumerate(slots):
            if d in column:
                matrix[p, column[d]] += 1 if k % 2 == 0 else -1
    return matrix


def corner_system(hc: HeegaardComplex):
    matrix = corner_matrix(hc)
    D, left, right = SNF(matrix).get_smith_normal_form()
    invariants = tuple(d for d in diagonal(D) if d)
    return CornerSystem(matrix, left, right, invariants)


def periodic_lattice(hc: HeegaardComplex):
    """ Basis of the periodic domains avoiding the basepoints. """
    return corner_system(hc).kernel()


def corner_rhs(hc: HeegaardComplex, x: HeegaardState, y: HeegaardState):
    xs, ys = x.points(), y.points()
    return [1 if p in xs - ys else -1 if p in ys - xs else 0 for p in range(len(hc.points))]


@dataclass(frozen=True, eq=False)
class DomainContext:
    """ Everything the domain computations of one surface share. """

    vbs: VeeringBranchedSurface
    hc: HeegaardComplex
    hm: HomologyModel
    system: CornerSystem


def domain_context(vbs: VeeringBranchedSurface, hc: HeegaardComplex = None, hm: HomologyModel = None):
    hc = hc or build_diagram(vbs)
    hm = hm or build_homology(vbs)
    return DomainContext(vbs, hc, hm, corner_system(hc))


# ENUMERATION
def _lattice_ranges(n0, kernel):
    """ Integer ranges of lattice coordinates keeping n0 + sum(l_j k_j) nonnegative. """

    K = np.array(kernel, dtype=float).T
    a_ub, b_ub = -K, np.array(n0, dtype=float)
    ranges = []
    for j in range(K.shape[1]):
        bounds = []
        for sign in (1, -1):
            c = np.zeros(K.shape[1])
            c[j] = sign
            res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * K.shape[1])
            if res.status == 2:
                return None
            if res.status == 3:
                raise errors.SearchBudgetExceeded("effective domains of an unbounded polytope", 0)
            if not res.success:
                raise errors.InternalInconsistency(f"lattice bound search failed: {res.message}")
            bounds.append(sign * res.fun)
        ranges.append(range(math.ceil(bounds[0] - EPSILON), math.floor(bounds[1] + EPSILON) + 1))
    return ranges


def connecting_domains(ctx: DomainContext, x: HeegaardState, y: HeegaardState,
                       budget: int = DEFAULT_DOMAIN_BUDGET):
    """ All effective domains with no basepoint multiplicity connecting x to y.

    Args:
        ctx (DomainContext): Shared data of the surface.
        x, y (HeegaardState): Initial and final states.
        budget (int, optional): Cap on lattice points visited.
    Raises:
        errors.SearchBudgetExceeded: The lattice box holds more than budget points.
        errors.NotEmbedded: An effective domain has a coefficient above 1.
    Returns:
        list: Sorted domains; the zero domain is included when x equals y. """

    if spinc_class(ctx.vbs, ctx.hm, x) != spinc_class(ctx.vbs, ctx.hm, y):
        return []
    n0 = ctx.system.particular(corner_rhs(ctx.hc, x, y))
    if n0 is None:
        return []

    kernel = ctx.system.kernel()
    if kernel:
        ranges = _lattice_ranges(n0, kernel)
        if ranges is None:
            return []
        size = math.prod(len(r) for r in ranges)
        if size > budget:
            raise errors.SearchBudgetExceeded("lattice translates", budget)
        candidates = []
        for lam in itertools.product(*ranges):
            candidates.append(tuple(a + sum(l * k[i] for l, k in zip(lam, kernel)) for i, a in enumerate(n0)))
    else:
        candidates = [n0]

    found = []
    for coefficients in candidates:
        domain = Domain(coefficients, x, y)
        if not domain.is_effective():
            continue
        if not domain.is_embedded():
            raise errors.NotEmbedded(f"effective domain {list(coefficients)} is not embedded")
        found.append(domain)
    return sorted(found, key=lambda d: d.coefficients)


def brute_force_domains(ctx: DomainContext, x: HeegaardState, y: HeegaardState, limit: int = BRUTE_FORCE_LIMIT):
    """ Connecting {0,1} domains by trying every subset of empty domains.

    Raises:
        errors.SearchBudgetExceeded: More than limit empty domains. """

    m = ctx.system.domain_count
    if m > limit:
        raise errors.SearchBudgetExceeded("domain subsets", 2 ** limit)
    rhs = corner_rhs(ctx.hc, x, y)
    found = [Domain(c, x, y) for c in itertools.product((0, 1), repeat=m) if ctx.system.residual(c) == rhs]
    return sorted(found, key=lambda d: d.coefficients)


def check_connecting(ctx: DomainContext, domain: Domain):
    """
    Raises:
        errors.NotConnecting: The corner equations fail for the domain's states. """

    if ctx.system.residual(domain.coefficients) != corner_rhs(ctx.hc, domain.x, domain.y):
        raise errors.NotConnecting(f"domain {list(domain.coefficients)} does not connect its states")


# INDEX
def euler_measure(ctx: DomainContext, domain: Domain):
    return sum((c * ctx.hc.euler_measure(d) for d, c in enumerate(domain.coefficients)), Fraction(0))


def point_multiplicity(ctx: DomainContext, domain: Domain, p: int):
    """ Average of the four quadrant coefficients at a point. """

    return Fraction(sum(domain.multiplicity(d) for d in ctx.hc.quadrants[p]), 4)


def lipshitz_index(ctx: DomainContext, domain: Domain):
    """ Euler measure plus the point multiplicities at both states.

    Raises:
        errors.NotConnecting: The domain does not connect its states. """

    check_connecting(ctx, domain)
    index = euler_measure(ctx, domain)
    for state in (domain.x, domain.y):
        index += sum(point_multiplicity(ctx, domain, p) for p in state.points())
    if index.denominator != 1:
        raise errors.InternalInconsistency(f"index {index} of domain {list(domain.coefficients)} is not an integer")
    return int(index)


# SUBSURFACE
def _occupied(ctx: DomainContext, domain: Domain, p: int):
    return [k for k, d in enumerate(ctx.hc.quadrants[p]) if domain.multiplicity(d)]


def _runs(occupied):
    """ Maximal cyclic runs of occupied slots as (first, last) pairs. """

    runs = []
    for k in occupied:
        if (k - 1) % 4 in occupied:
            continue
        last = k
        while (last + 1) % 4 in occupied and (last + 1) % 4 != k:
            last = (last + 1) % 4
        runs.append((k, last))
    return runs


def corner_counts(ctx: DomainContext, domain: Domain):
    """ Convex and concave corners of an embedded domain. """

    convex = concave = 0
    for p in range(len(ctx.hc.points)):
        occupied = _occupied(ctx, domain, p)
        if len(occupied) == 1:
            convex += 1
        elif len(occupied) == 3:
            concave += 1
        elif len(occupied) == 2 and (occupied[1] - occupied[0]) == 2:
            convex += 2
    return convex, concave


def boundary_segments(ctx: DomainContext, domain: Domain):
    """ Indices of the curve segments with the domain on exactly one side. """

    found = []
    for i, segment in enumerate(ctx.hc.segments):
        left, right = ctx.hc.segment_domains(segment)
        if bool(domain.multiplicity(left)) != bool(domain.multiplicity(right)):
            found.append(i)
    return found


def boundary_components(ctx: DomainContext, domain: Domain):
    """ Number of components of the boundary of the subsurface. """

    boundary = boundary_segments(ctx, domain)
    graph = nx.Graph()
    graph.add_nodes_from(boundary)
    ends = {}
    for i in boundary:
        segment = ctx.hc.segments[i]
        ends[(segment.start, segment.start_ray)] = i
        ends[(segment.end, segment.end_ray)] = i
    for p in range(len(ctx.hc.points)):
        occupied = _occupied(ctx, domain, p)
        if len(occupied) in (0, 4):
            continue
        for first, last in _runs(occupied):
            a, b = ends.get((p, (first - 1) % 4)), ends.get((p, last))
            if a is None or b is None:
                raise errors.InternalInconsistency(f"boundary of {list(domain.coefficients)} breaks at point {p}")
            graph.add_edge(a, b)
    return nx.number_connected_components(graph)


def mu_bar(ctx: DomainContext, domain: Domain):
    """ Euler measure plus a quarter per convex and three quarters per concave corner.

    Raises:
        errors.NotEmbedded: Coefficients outside {0, 1}. """

    if not domain.is_embedded():
        raise errors.NotEmbedded(f"domain {list(domain.coefficients)} is not embedded")
    convex, concave = corner_counts(ctx, domain)
    return euler_measure(ctx, domain) + Fraction(convex, 4) + Fraction(3 * concave, 4)


def nu_bar(ctx: DomainContext, domain: Domain):
    """ Sum over beta sides of (length + 1) plus the number of boundary components.

    Raises:
        errors.NotEmbedded: Coefficients outside {0, 1}. """

    if not domain.is_embedded():
        raise errors.NotEmbedded(f"domain {list(domain.coefficients)} is not embedded")
    beta = sum(1 for i in boundary_segments(ctx, domain) if ctx.hc.segments[i].curve[0] == "beta")
    convex, concave = corner_counts(ctx, domain)
    # each side lies between two corners and alpha and beta sides alternate
    beta_sides = (convex + concave) // 2
    return beta + beta_sides + boundary_components(ctx, domain)


def contains_full_curve(ctx: DomainContext, domain: Domain):
    """ Whether some alpha or beta curve lies entirely in the closed subsurface. """

    curves = sorted({segment.curve for segment in ctx.hc.segments})
    for curve in curves:
        if all(any(domain.multiplicity(d) for d in ctx.hc.segment_domains(s)) for s in ctx.hc.curve_segments(curve)):
            return True
    return False


# AUDITS
def admissibility_certificate(hc: HeegaardComplex):
    """ A nonzero nonnegative periodic domain, or None when there is none. """

    if not periodic_lattice(hc):
        return None
    matrix = corner_matrix(hc).astype(float)
    m = matrix.shape[1]
    res = linprog(-np.ones(m), A_eq=matrix, b_eq=np.zeros(matrix.shape[0]), bounds=[(0, 1)] * m)
    if not res.success or -res.fun < EPSILON:
        return None
    fractions = [Fraction(v).limit_denominator(1000) for v in res.x]
    scale = math.lcm(*(f.denominator for f in fractions))
    vector = tuple(int(f * scale) for f in fractions)
    residual = corner_matrix(hc).dot(np.array(vector, dtype=object))
    if any(residual) or not any(vector) or min(vector) < 0:
        raise errors.InternalInconsistency(f"rounded periodic domain {list(vector)} is not a certificate")
    return vector


def check_admissibility(hc: HeegaardComplex):
    """ True iff no nonzero periodic domain has only nonnegative coefficients. """
    return admissibility_certificate(hc) is None


def _nonzero(domains):
    return [d for d in domains if not d.is_zero()]


def domain_pairs(ctx: DomainContext, states=None, budget: int = DEFAULT_DOMAIN_BUDGET):
    """ Nonzero effective domains for every ordered pair of distinct states.

    Raises:
        errors.SearchBudgetExceeded: More than budget domains in total. """

    states = states if states is not None else enumerate_states(ctx.vbs)
    table, total = [], 0
    for i, x in enumerate(states):
        for j, y in enumerate(states):
            if i == j:
                continue
            domains = _nonzero(connecting_domains(ctx, x, y, budget))
            if domains:
                total += len(domains)
                if total > budget:
                    raise errors.SearchBudgetExceeded("effective domains", budget)
                table.append((i, j, domains))
    log.debug("%d nonzero effective domains over %d state pairs", total, len(table))
    return table


def check_top_bottom_isolation(ctx: DomainContext, states=None, table=None):
    """ Neither the top nor the bottom state starts or ends a nonzero effective domain. """

    extremes = {top_state(ctx.vbs), bottom_state(ctx.vbs)}
    table = table if table is not None else domain_pairs(ctx, states)
    for _, _, domains in table:
        for domain in domains:
            if domain.x in extremes or domain.y in extremes:
                return False
    return True


def parity_audit(ctx: DomainContext, states=None, table=None):
    """ nu(x) - nu(y) agrees with the index mod 2 for every enumerated domain. """

    table = table if table is not None else domain_pairs(ctx, states)
    for _, _, domains in table:
        for domain in domains:
            if (nu(ctx.vbs, domain.x) - nu(ctx.vbs, domain.y) - lipshitz_index(ctx, domain)) % 2:
                return False
    return True


def subsurface_audit(ctx: DomainContext, states=None, table=None):
    """ mu bar agrees with the index and nu bar with the nu difference, mod 2,
    and no subsurface contains a full curve. """

    table = table if table is not None else domain_pairs(ctx, states)
    for _, _, domains in table:
        for domain in domains:
            mu = mu_bar(ctx, domain)
            if mu.denominator != 1 or (mu - lipshitz_index(ctx, domain)) % 2:
                return False
            if (nu_bar(ctx, domain) - nu(ctx.vbs, domain.x) + nu(ctx.vbs, domain.y)) % 2:
                return False
            if contains_full_curve(ctx, domain):
                return False
    return True


def domain_table(ctx: DomainContext, states, table=None):
    """ Report records: per state pair the domain count, index histogram and parity verdict. """

    table = table if table is not None else domain_pairs(ctx, states)
    records = []
    for i, j, domains in table:
        indices = [lipshitz_index(ctx, d) for d in domains]
        parity = all((nu(ctx.vbs, d.x) - nu(ctx.vbs, d.y) - k) % 2 == 0 for d, k in zip(domains, indices))
        records.append({
            "x": i,
            "y": j,
            "count": len(domains),
            "index_histogram": {str(k): c for k, c in sorted(Counter(indices).items())},
            "parity": parity,
            "domains": [list(d.coefficients) for d in domains],
        })
    return records
