""" Combinatorial model of the canonical sutured Heegaard diagram

The diagram surface is a union of annuli, one per branch loop. Walking up an
annulus we meet one hole per edge of the loop, sitting at the head of that
edge; the two holes at a triple point are glued along its alpha curve. Three
vertical beta strands L, M, R cut each annulus into columns

    BL | L | LD | M | RD | R | BR

where BL and BR carry the basepoints. A blue hole spans L..M and a red hole
spans M..R, so the LD column is cut into left domains by the blue holes and
the RD column into right domains by the red holes.

Quadrants at an intersection point are numbered 0..3: slots 0 and 1 are the
clockwise and counterclockwise quadrants seen from the lower-numbered hole
through the point, slots 2 and 3 the same from the other hole. Ray k leaves
the point between slot k and slot k+1: rays 0 and 2 are beta, rays 1 and 3 alpha.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction

from floerveer import errors
from floerveer.vbs import (Color, Role, ROLE_ORDER, VeeringBranchedSurface, decompose_branch_loops,
                           side_role)

log = logging.getLogger(__name__)

HOLE_CORNERS = ("LL", "LR", "UR", "UL")  # counterclockwise around a hole
LAYOUT = {
    Color.BLUE: {"LL": "T", "LR": "Q", "UR": "S", "UL": "X"},
    Color.RED: {"LL": "Q", "LR": "T", "UR": "X", "UL": "S"},
}
STRAND = {
    Color.BLUE: {"LL": "L", "UL": "L", "LR": "M", "UR": "M"},
    Color.RED: {"LL": "M", "UL": "M", "LR": "R", "UR": "R"},
}
COLUMNS = {"L": ("BL", "LD"), "M": ("LD", "RD"), "R": ("RD", "BR")}


def point_id(sector: int, role: Role):
    return 4 * sector + role.rank


@dataclass(frozen=True)
class IntersectionPoint:
    id: int
    sector: int
    role: Role
    vertex: int


@dataclass(frozen=True)
class Hole:
    """ A punctured rectangle of an annulus. Its id is its incoming edge. """

    id: int
    vertex: int
    in_edge: int
    out_edge: int
    annulus: int
    position: int
    color: Color
    points: dict


@dataclass(frozen=True)
class ElementaryDomain:
    id: int
    side: str
    contains_basepoint: bool
    annulus: int
    hole: int = None
    distinguished: dict = None


@dataclass(frozen=True)
class Segment:
    """ Piece of an alpha or beta curve between two intersection points. """

    curve: tuple
    start: int
    start_ray: int
    end: int
    end_ray: int


@dataclass(frozen=True, eq=False)
class HeegaardComplex:
    n: int
    points: tuple
    holes: tuple
    domains: tuple
    quadrants: dict
    point_holes: dict
    segments: tuple
    annuli: tuple

    @property
    def genus(self):
        return self.n + 1

    @property
    def euler_characteristic(self):
        return -2 * self.n

    def empty_domains(self):
        return [d.id for d in self.domains if not d.contains_basepoint]

    def basepoint_domains(self):
        return [d.id for d in self.domains if d.contains_basepoint]

    def is_basepoint(self, d: int):
        return self.domains[d].contains_basepoint

    def point(self, p: int):
        return self.points[p]

    def point_of(self, sector: int, role: Role):
        return self.points[point_id(sector, role)]

    def corners(self, d: int):
        """ (point, slot) incidences of domain d. """

        return [(p, k) for p in sorted(self.quadrants) for k, other in enumerate(self.quadrants[p]) if other == d]

    def euler_measure(self, d: int):
        """ Euler characteristic minus a quarter per corner; basepoint domains are annuli. """

        chi = 0 if self.is_basepoint(d) else 1
        return chi - Fraction(len(self.corners(d)), 4)

    def segment_domains(self, segment: Segment):
        """ The two domains on either side of a segment, read at its start. """

        slots = self.quadrants[segment.start]
        return slots[segment.start_ray], slots[(segment.start_ray + 1) % 4]

    def curve_segments(self, curve: tuple):
        return [s for s in self.segments if s.curve == curve]

    def with_quadrants(self, quadrants: dict):
        """ Copy with a replaced quadrant map, for mutation checks. """

        return HeegaardComplex(self.n, self.points, self.holes, self.domains, quadrants,
                               self.point_holes, self.segments, self.annuli)


def build_diagram(vbs: VeeringBranchedSurface):
    """ Build the cell model of the Heegaard diagram of a validated surface.

    Raises:
        errors.InternalInconsistency: Construction conventions disagree with the surface.
    Returns:
        HeegaardComplex: Points, holes, domains, quadrant map and curve segments. """

    points = tuple(IntersectionPoint(point_id(s.id, role), s.id, role, s.corner(role))
                   for s in vbs.sectors for role in ROLE_ORDER)
    loops = decompose_branch_loops(vbs).loops

    holes = {}
    for a, loop in enumerate(loops):
        for position, e in enumerate(loop):
            e_top = loop[(position + 1) % len(loop)]
            v = vbs.edge(e).dst
            layout = {
                "T": _top_point(vbs, e),
                "Q": _side_point(vbs.bottom_occurrence(e)),
                "S": point_id(vbs.bottom_occurrence(e_top).sector, Role.BOTTOM),
                "X": _side_point(vbs.first_top_occurrence(e_top)),
            }
            corners = {c: layout[name] for c, name in LAYOUT[vbs.color(v)].items()}
            holes[e] = Hole(e, v, e, e_top, a, position, vbs.color(v), corners)

    edge_count = len(vbs.edges)
    entries = defaultdict(list)
    for hole in holes.values():
        for corner, p in hole.points.items():
            left, right = COLUMNS[STRAND[hole.color][corner]]
            if corner in ("LL", "LR"):
                cw, ccw = left, right
            else:
                cw, ccw = right, left
            upper = corner in ("UR", "UL")
            entries[p].append((hole.id, _region(holes, loops, hole, cw, upper, edge_count),
                               _region(holes, loops, hole, ccw, upper, edge_count)))

    quadrants, point_holes = {}, {}
    for p in range(len(points)):
        if len(entries[p]) != 2:
            raise errors.InternalInconsistency(f"point {p} lies on {len(entries[p])} holes")
        (i, i_cw, i_ccw), (j, j_cw, j_ccw) = sorted(entries[p])
        quadrants[p] = (i_cw, i_ccw, j_cw, j_ccw)
        point_holes[p] = (i, j)

    def slot(p, hole, ccw):
        return (0 if point_holes[p][0] == hole.id else 2) + ccw

    domains = []
    for e in range(edge_count):
        hole = holes[e]
        side = "left" if hole.color == Color.BLUE else "right"
        upper = _next_strict(holes, loops, hole, hole.color)
        # a corner point may meet the domain twice, so each corner keeps its slot
        distinguished = {
            "lower_left": (hole.points["UL"], slot(hole.points["UL"], hole, 0)),
            "lower_right": (hole.points["UR"], slot(hole.points["UR"], hole, 1)),
            "upper_left": (upper.points["LL"], slot(upper.points["LL"], upper, 1)),
            "upper_right": (upper.points["LR"], slot(upper.points["LR"], upper, 0)),
        }
        domains.append(ElementaryDomain(e, side, False, hole.annulus, e, distinguished))
    for a in range(len(loops)):
        domains.append(ElementaryDomain(edge_count + 2 * a, "basepoint", True, a))
        domains.append(ElementaryDomain(edge_count + 2 * a + 1, "basepoint", True, a))

    segments = _alpha_segments(vbs, holes, point_holes) + _beta_segments(vbs, holes, point_holes)
    hc = HeegaardComplex(vbs.n, points, tuple(holes[e] for e in range(edge_count)), tuple(domains),
                         quadrants, point_holes, tuple(segments), loops)
    log.debug("Heegaard complex of %s: %d points, %d domains, %d segments",
              vbs.name, len(points), len(domains), len(segments))
    return hc


def _top_point(vbs: VeeringBranchedSurface, e: int):
    return point_id(vbs.last_occurrence(e).sector, Role.TOP)


def _side_point(occurrence):
    return point_id(occurrence.sector, side_role(occurrence.side))


def _walk(holes: dict, loops: tuple, hole: Hole, color: Color, step: int):
    loop = loops[hole.annulus]
    for k in range(1, len(loop) + 1):
        other = holes[loop[(hole.position + step * k) % len(loop)]]
        if other.color == color:
            return other
    raise errors.InternalInconsistency(f"annulus {hole.annulus} has no {color.value} hole")


def _next_strict(holes, loops, hole, color):
    return _walk(holes, loops, hole, color, 1)


def _previous_strict(holes, loops, hole, color):
    return _walk(holes, loops, hole, color, -1)


def _region(holes: dict, loops: tuple, hole: Hole, column: str, upper: bool, edge_count: int):
    """ Domain in a column just below (or above) a hole. """

    if column == "BL":
        return edge_count + 2 * hole.annulus
    if column == "BR":
        return edge_count + 2 * hole.annulus + 1
    color = Color.BLUE if column == "LD" else Color.RED
    if upper and hole.color == color:
        return hole.id
    return _previous_strict(holes, loops, hole, color).id


def _alpha_segments(vbs, holes, point_holes):
    segments = []
    for v in range(vbs.n):
        first = holes[min(vbs.in_edges(v))]
        order = [first.points[c] for c in HOLE_CORNERS]
        for k in range(4):
            p, q = order[k], order[(k + 1) % 4]
            start_ray = 1 if point_holes[p][0] == first.id else 3
            end_ray = 3 if point_holes[q][0] == first.id else 1
            segments.append(Segment(("alpha", v), p, start_ray, q, end_ray))
    return segments


def _beta_segments(vbs, holes, point_holes):
    by_out = {hole.out_edge: hole.id for hole in holes.values()}

    def ray(p, hole):
        return 0 if point_holes[p][0] == hole else 2

    segments = []
    for s in vbs.sectors:
        bottom, side_a, side_b, top = (point_id(s.id, role) for role in ROLE_ORDER)
        legs = (
            (bottom, by_out[s.path_a[0]], side_a, s.path_a[0]),
            (side_a, by_out[s.path_a[1]], top, s.path_a[-1]),
            (top, s.path_b[-1], side_b, by_out[s.path_b[1]]),
            (side_b, s.path_b[0], bottom, by_out[s.path_b[0]]),
        )
        for p, p_hole, q, q_hole in legs:
            segments.append(Segment(("beta", s.id), p, ray(p, p_hole), q, ray(q, q_hole)))
    return segments


# AUDIT
def audit_diagram(hc: HeegaardComplex):
    """ Check the structural conventions of a complex; report only.

    Returns:
        dict: Check name to pass/fail, in a fixed order. """

    report = {
        "balanced": _check_balanced(hc),
        "points_per_curve": _check_points_per_curve(hc),
        "quadrant_bijection": _check_quadrants(hc),
        "euler_measure_sum": _check_euler(hc),
        "corner_conventions": _check_corner_conventions(hc),
        "top_basepoint_quadrants": _check_top_quadrants(hc),
        "one_top_corner": _check_one_top_corner(hc),
        "hole_gluing": _check_hole_gluing(hc),
        "segment_ends": _check_segment_ends(hc),
        "no_full_curve": _check_no_full_curve(hc),
    }
    failed = [name for name, ok in report.items() if not ok]
    if failed:
        log.warning("Diagram audit failed: %s", ", ".join(failed))
    return report


def _check_balanced(hc):
    alphas = {s.curve for s in hc.segments if s.curve[0] == "alpha"}
    betas = {s.curve for s in hc.segments if s.curve[0] == "beta"}
    return len(alphas) == len(betas) == hc.n


def _check_points_per_curve(hc):
    by_vertex = Counter(p.vertex for p in hc.points)
    by_sector = Counter(p.sector for p in hc.points)
    return all(c == 4 for c in by_vertex.values()) and all(c == 4 for c in by_sector.values()) \
        and len(by_vertex) == len(by_sector) == hc.n


def _check_quadrants(hc):
    ids = {d.id for d in hc.domains}
    if set(hc.quadrants) != {p.id for p in hc.points}:
        return False
    if any(len(slots) != 4 or any(d not in ids for d in slots) for slots in hc.quadrants.values()):
        return False
    return sum(len(hc.corners(d)) for d in ids) == 4 * len(hc.points)


def _check_euler(hc):
    total = sum(hc.euler_measure(d.id) for d in hc.domains)
    alpha_beta = len(hc.segments)
    chi = len(hc.points) - alpha_beta + sum(0 if d.contains_basepoint else 1 for d in hc.domains)
    return total == chi == hc.euler_characteristic


def _check_corner_conventions(hc):
    for d in hc.domains:
        if d.contains_basepoint:
            continue
        corners = d.distinguished
        if any(hc.quadrants[p][k] != d.id for p, k in corners.values()):
            return False
        top_key, bottom_key = ("upper_left", "lower_right") if d.side == "left" else ("upper_right", "lower_left")
        (top, k), (bottom, _) = corners[top_key], corners[bottom_key]
        if hc.point(top).role != Role.TOP or hc.point(bottom).role != Role.BOTTOM:
            return False
        slots = hc.quadrants[top]
        if not (hc.is_basepoint(slots[(k + 1) % 4]) and hc.is_basepoint(slots[(k - 1) % 4])):
            return False
    return True


def _check_top_quadrants(hc):
    for p in hc.points:
        if p.role != Role.TOP:
            continue
        slots = hc.quadrants[p.id]
        even = hc.is_basepoint(slots[0]) and hc.is_basepoint(slots[2])
        odd = hc.is_basepoint(slots[1]) and hc.is_basepoint(slots[3])
        if not (even or odd):
            return False
    return True


def _check_one_top_corner(hc):
    for d in hc.empty_domains():
        tops = {p for p, _ in hc.corners(d) if hc.point(p).role == Role.TOP}
        if len(tops) != 1:
            return False
    return True


def _check_hole_gluing(hc):
    by_vertex = defaultdict(list)
    for hole in hc.holes:
        by_vertex[hole.vertex].append(hole)
    for holes in by_vertex.values():
        if len(holes) != 2:
            return False
        first = [holes[0].points[c] for c in HOLE_CORNERS]
        second = [holes[1].points[c] for c in HOLE_CORNERS]
        if set(first) != set(second):
            return False
        k = second.index(first[0])
        reverse = [second[(k - i) % 4] for i in range(4)]
        if reverse != first:
            return False
    return True


def _check_segment_ends(hc):
    used = Counter()
    for s in hc.segments:
        allowed = (1, 3) if s.curve[0] == "alpha" else (0, 2)
        if s.start_ray not in allowed or s.end_ray not in allowed:
            return False
        used[(s.start, s.start_ray)] += 1
        used[(s.end, s.end_ray)] += 1
        end_slots = hc.quadrants[s.end]
        at_end = {end_slots[s.end_ray], end_slots[(s.end_ray + 1) % 4]}
        if set(hc.segment_domains(s)) != at_end:
            return False
    return len(used) == 4 * len(hc.points) and all(c == 1 for c in used.values())


def _check_no_full_curve(hc):
    curves = {s.curve for s in hc.segments}
    for d in hc.empty_domains():
        for curve in curves:
            sides = [hc.segment_domains(s) for s in hc.curve_segments(curve)]
            if all((a == d) != (b == d) for a, b in sides):
                return False
    return True


def dump_diagram(hc: HeegaardComplex):
    """ Deterministic text listing of annuli, domains and quadrant incidences. """

    lines = [f"heegaard complex n={hc.n} genus={hc.genus}"]
    for a, loop in enumerate(hc.annuli):
        holes = ", ".join(f"{e}@v{hc.holes[e].vertex}:{hc.holes[e].color.value}" for e in loop)
        lines.append(f"annulus {a}: {holes}")
    for d in hc.domains:
        corners = " ".join(f"{p}.{k}" for p, k in hc.corners(d.id))
        lines.append(f"domain {d.id} {d.side} annulus={d.annulus} e={hc.euler_measure(d.id)} corners={corners}")
    for p in hc.points:
        slots = " ".join(str(d) for d in hc.quadrants[p.id])
        lines.append(f"point {p.id} S{p.sector}/{p.role.value} v{p.vertex}: {slots}")
    return "\n".join(lines) + "\n"
