""" Veering branched surfaces: data model, validation and loop decompositions """
import enum
import functools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from floerveer import errors

log = logging.getLogger(__name__)


class Color(enum.Enum):
    """ Triple point color. """

    BLUE = "blue"
    RED = "red"


class Role(enum.Enum):
    """ Corner role of a triple point in a diamond sector. """

    BOTTOM = "bottom"
    SIDE_A = "side_a"
    SIDE_B = "side_b"
    TOP = "top"

    @property
    def rank(self):
        return ROLE_ORDER.index(self)

    @property
    def is_side(self):
        return self in (Role.SIDE_A, Role.SIDE_B)

    @property
    def side(self):
        """ "a" or "b" for side roles, None otherwise. """
        return {Role.SIDE_A: "a", Role.SIDE_B: "b"}.get(self)


ROLE_ORDER = (Role.BOTTOM, Role.SIDE_A, Role.SIDE_B, Role.TOP)
SIDES = ("a", "b")


def side_role(side: str):
    return Role.SIDE_A if side == "a" else Role.SIDE_B


class LoopKind(enum.Enum):
    BRANCH = "branch"
    ANTI_BRANCH = "anti_branch"


@dataclass(frozen=True)
class TriplePoint:
    id: int
    color: Color


@dataclass(frozen=True)
class DirectedEdge:
    id: int
    src: int
    dst: int


@dataclass(frozen=True)
class RawSector:
    id: int
    path_a: tuple
    path_b: tuple


@dataclass
class RawVBS:
    """ Parsed but unvalidated surface.

    smooth_pairing maps a triple point id to its list of (in_edge, out_edge)
    pairs. """

    triple_points: list
    edges: list
    sectors: list
    smooth_pairing: dict
    name: str = None

    def to_dict(self):
        """ Canonical JSON-ready structure, records sorted by id. """

        data = {}
        if self.name is not None:
            data["name"] = self.name
        data["triple_points"] = [{"id": tp.id, "color": tp.color.value}
                                 for tp in sorted(self.triple_points, key=lambda tp: tp.id)]
        data["edges"] = [{"id": e.id, "src": e.src, "dst": e.dst}
                         for e in sorted(self.edges, key=lambda e: e.id)]
        data["smooth_pairing"] = [{"vertex": v, "pairs": sorted([list(p) for p in pairs])}
                                  for v, pairs in sorted(self.smooth_pairing.items())]
        data["sectors"] = [{"id": s.id, "path_a": list(s.path_a), "path_b": list(s.path_b)}
                           for s in sorted(self.sectors, key=lambda s: s.id)]
        return data


@dataclass(frozen=True)
class Sector:
    """ A validated diamond sector. Paths run from the bottom corner to the top corner. """

    id: int
    path_a: tuple
    path_b: tuple
    bottom_corner: int
    top_corner: int
    side_corner_a: int
    side_corner_b: int

    @property
    def delta_a(self):
        return len(self.path_a) - 1

    @property
    def delta_b(self):
        return len(self.path_b) - 1

    def path(self, side: str):
        return self.path_a if side == "a" else self.path_b

    def corner(self, role: Role):
        return {
            Role.BOTTOM: self.bottom_corner,
            Role.SIDE_A: self.side_corner_a,
            Role.SIDE_B: self.side_corner_b,
            Role.TOP: self.top_corner,
        }[role]


@dataclass(frozen=True)
class Occurrence:
    """ Edge e appears as path(side)[index] of a sector. Index 0 is the bottom side. """

    sector: int
    side: str
    index: int


@dataclass(frozen=True)
class LoopDecomposition:
    kind: LoopKind
    loops: tuple
    orientation_preserving: tuple = None

    def loop_of(self, edge: int):
        """ Index of the loop containing an edge. """

        for i, loop in enumerate(self.loops):
            if edge in loop:
                return i
        raise KeyError(edge)

    def edge_vector(self, i: int, edge_count: int):
        """ Loop i as an integer edge vector. """

        vector = [0] * edge_count
        for e in self.loops[i]:
            vector[e] += 1
        return vector


@dataclass(frozen=True)
class VeeringBranchedSurface:
    """ A validated surface with canonical numbering: v_i is the bottom corner of S_i.

    smooth maps each edge to its smooth continuation at its head, turning to
    the other outgoing edge there. Instances are immutable; derived lookups are
    cached on first use. """

    triple_points: tuple
    edges: tuple
    sectors: tuple
    smooth: dict = field(repr=False)
    turning: dict = field(repr=False)
    name: str = None

    @property
    def n(self):
        return len(self.triple_points)

    def color(self, v: int):
        return self.triple_points[v].color

    def edge(self, e: int):
        return self.edges[e]

    def in_edges(self, v: int):
        return self._incidence[0][v]

    def out_edges(self, v: int):
        return self._incidence[1][v]

    @functools.cached_property
    def _incidence(self):
        ins, outs = defaultdict(list), defaultdict(list)
        for e in self.edges:
            outs[e.src].append(e.id)
            ins[e.dst].append(e.id)
        return ({v: tuple(sorted(ins[v])) for v in range(self.n)},
                {v: tuple(sorted(outs[v])) for v in range(self.n)})

    @functools.cached_property
    def _occurrences(self):
        table = defaultdict(list)
        for s in self.sectors:
            for side in SIDES:
                for index, e in enumerate(s.path(side)):
                    table[e].append(Occurrence(s.id, side, index))
        return {e: tuple(occ) for e, occ in table.items()}

    def occurrences(self, e: int):
        """ The three sector-side occurrences of edge e. """
        return self._occurrences[e]

    def bottom_occurrence(self, e: int):
        """ Occurrence of e as a bottom side (index 0). """

        return next(o for o in self.occurrences(e) if o.index == 0)

    def top_occurrences(self, e: int):
        return tuple(o for o in self.occurrences(e) if o.index > 0)

    def first_top_occurrence(self, e: int):
        """ The top-side occurrence where e follows the bottom side (the turn at src e). None if there is none. """

        return next((o for o in self.occurrences(e) if o.index == 1), None)

    def last_occurrence(self, e: int):
        """ The top-side occurrence where e ends its path at the sector's top corner. """

        for o in self.top_occurrences(e):
            if o.index == len(self.sectors[o.sector].path(o.side)) - 1:
                return o
        raise errors.InternalInconsistency(f"Edge {e} is not the last edge of any top side")

    def sector_with_bottom(self, v: int):
        """ Canonical numbering makes this the identity. """
        return v

    @functools.cached_property
    def _tops(self):
        return {s.top_corner: s.id for s in self.sectors}

    def sector_with_top(self, v: int):
        return self._tops[v]

    def sectors_with_side(self, v: int):
        """ (sector, side) pairs having v as a side corner, sorted. """

        found = []
        for s in self.sectors:
            for side in SIDES:
                if s.corner(side_role(side)) == v:
                    found.append((s.id, side))
        return tuple(sorted(found))

    def to_raw(self):
        """ Back to the file-level representation. """

        pairing = {v: [(e, self.smooth[e]) for e in self.in_edges(v)] for v in range(self.n)}
        return RawVBS(
            triple_points=list(self.triple_points),
            edges=list(self.edges),
            sectors=[RawSector(s.id, s.path_a, s.path_b) for s in self.sectors],
            smooth_pairing=pairing,
            name=self.name,
        )


def sector_kind(vbs: VeeringBranchedSurface, s: int):
    """ "toggle" when the top and bottom corners differ in color, "fan" otherwise. """

    sector = vbs.sectors[s]
    if vbs.color(sector.top_corner) == vbs.color(sector.bottom_corner):
        return "fan"
    return "toggle"


# VALIDATION
def validate(raw: RawVBS):
    """ Validate a raw surface and return it with canonical numbering.

    Checks run in stages; every violation of a stage is collected before
    failing, later stages need the earlier ones to hold.

    Args:
        raw (RawVBS): Parsed surface.
    Raises:
        errors.InvalidSurface: Carries the full list of violations.
    Returns:
        VeeringBranchedSurface: Validated surface. """

    violations = _check_ids(raw)
    if violations:
        raise errors.InvalidSurface(violations)

    violations = (_check_counts_and_valence(raw) + _check_diamonds(raw)
                  + _check_edge_incidence(raw) + _check_smooth_pairing(raw))
    if violations:
        raise errors.InvalidSurface(violations)

    violations = _check_path_rule(raw) + _check_corner_census(raw)
    if violations:
        raise errors.InvalidSurface(violations)

    vbs = _canonical(raw)
    violations = _check_colors(vbs)
    if violations:
        raise errors.InvalidSurface(violations)

    log.debug("Validated surface %s: n=%d", vbs.name, vbs.n)
    return vbs


def _dense(ids):
    return sorted(ids) == list(range(len(ids)))


def _check_ids(raw: RawVBS):
    violations = []
    vertex_ids = [tp.id for tp in raw.triple_points]
    edge_ids = [e.id for e in raw.edges]
    sector_ids = [s.id for s in raw.sectors]

    for section, ids in (("triple_points", vertex_ids), ("edges", edge_ids), ("sectors", sector_ids)):
        if not _dense(ids):
            violations.append(errors.DanglingId(f"{section} ids are not 0..{len(ids) - 1}: {sorted(ids)}"))

    vertices, edges = set(vertex_ids), set(edge_ids)
    for e in raw.edges:
        for end in (e.src, e.dst):
            if end not in vertices:
                violations.append(errors.DanglingId(f"edge {e.id} references triple point {end}"))
    for s in raw.sectors:
        for e in list(s.path_a) + list(s.path_b):
            if e not in edges:
                violations.append(errors.DanglingId(f"sector {s.id} references edge {e}"))
    for v, pairs in raw.smooth_pairing.items():
        if v not in vertices:
            violations.append(errors.DanglingId(f"smooth pairing references triple point {v}"))
        for pair in pairs:
            for e in pair:
                if e not in edges:
                    violations.append(errors.DanglingId(f"smooth pairing at {v} references edge {e}"))
    return violations


def _edge_map(raw: RawVBS):
    return {e.id: e for e in raw.edges}


def _check_counts_and_valence(raw: RawVBS):
    violations = []
    n = len(raw.triple_points)
    if len(raw.sectors) != n:
        violations.append(errors.CornerCensusViolation(f"{len(raw.sectors)} sectors for {n} triple points"))
    if len(raw.edges) != 2 * n:
        violations.append(errors.ValenceViolation(f"{len(raw.edges)} edges for {n} triple points"))

    ins = Counter(e.dst for e in raw.edges)
    outs = Counter(e.src for e in raw.edges)
    for tp in raw.triple_points:
        if ins[tp.id] != 2 or outs[tp.id] != 2:
            violations.append(errors.ValenceViolation(
                f"triple point {tp.id} has in-degree {ins[tp.id]} and out-degree {outs[tp.id]}"))
    return violations


def _check_diamonds(raw: RawVBS):
    violations = []
    edges = _edge_map(raw)
    for s in raw.sectors:
        bad = False
        for side, path in (("a", s.path_a), ("b", s.path_b)):
            if not path:
                violations.append(errors.DiamondViolation(f"sector {s.id} path_{side} is empty"))
                bad = True
                continue
            if len(path) < 2:
                violations.append(errors.DiamondViolation(f"sector {s.id} path_{side} has an empty top side"))
                bad = True
            for first, second in zip(path, path[1:]):
                if edges[first].dst != edges[second].src:
                    violations.append(errors.DiamondViolation(
                        f"sector {s.id} path_{side} is not coherent at edges {first},{second}"))
                    bad = True
        if bad:
            continue
        a, b = s.path_a, s.path_b
        if edges[a[0]].src != edges[b[0]].src:
            violations.append(errors.DiamondViolation(f"sector {s.id} paths start at different corners"))
        elif edges[a[-1]].dst != edges[b[-1]].dst:
            violations.append(errors.DiamondViolation(f"sector {s.id} paths end at different corners"))
        elif a[0] == b[0]:
            violations.append(errors.DiamondViolation(f"sector {s.id} has one bottom edge on both sides"))
    return violations


def _check_edge_incidence(raw: RawVBS):
    violations = []
    total, bottoms = Counter(), Counter()
    for s in raw.sectors:
        for path in (s.path_a, s.path_b):
            total.update(path)
            if path:
                bottoms[path[0]] += 1
    for e in raw.edges:
        if total[e.id] != 3 or bottoms[e.id] != 1:
            violations.append(errors.EdgeIncidenceViolation(
                f"edge {e.id} lies on {total[e.id]} sector sides, {bottoms[e.id]} of them bottom sides"))
    return violations


def _check_smooth_pairing(raw: RawVBS):
    violations = []
    edges = _edge_map(raw)
    for tp in raw.triple_points:
        pairs = raw.smooth_pairing.get(tp.id)
        if pairs is None:
            violations.append(errors.SmoothPairingViolation(f"no smooth pairing at triple point {tp.id}"))
            continue
        ins = sorted(p[0] for p in pairs)
        outs = sorted(p[1] for p in pairs)
        expected_in = sorted(e.id for e in raw.edges if e.dst == tp.id)
        expected_out = sorted(e.id for e in raw.edges if e.src == tp.id)
        if ins != expected_in or outs != expected_out:
            violations.append(errors.SmoothPairingViolation(
                f"pairing at {tp.id} is not a bijection between incoming {expected_in} and outgoing {expected_out}"))
        for e_in, e_out in pairs:
            if e_in in edges and e_out in edges and (edges[e_in].dst != tp.id or edges[e_out].src != tp.id):
                violations.append(errors.SmoothPairingViolation(
                    f"pair ({e_in}, {e_out}) does not meet at triple point {tp.id}"))
    return violations


def _smooth_map(raw: RawVBS):
    return {e_in: e_out for pairs in raw.smooth_pairing.values() for e_in, e_out in pairs}


def _check_path_rule(raw: RawVBS):
    """ First step of a path turns at the side corner, later steps continue smoothly. """

    violations = []
    smooth = _smooth_map(raw)
    for s in raw.sectors:
        for side, path in (("a", s.path_a), ("b", s.path_b)):
            if smooth[path[0]] == path[1]:
                violations.append(errors.SmoothPairingViolation(
                    f"sector {s.id} path_{side} does not turn at its side corner"))
            for first, second in zip(path[1:], path[2:]):
                if smooth[first] != second:
                    violations.append(errors.SmoothPairingViolation(
                        f"sector {s.id} path_{side} turns between top-side edges {first},{second}"))
    return violations


def _corners(raw: RawVBS, s: RawSector):
    edges = _edge_map(raw)
    return (edges[s.path_a[0]].src, edges[s.path_a[0]].dst,
            edges[s.path_b[0]].dst, edges[s.path_a[-1]].dst)


def _check_corner_census(raw: RawVBS):
    violations = []
    census = defaultdict(Counter)
    for s in raw.sectors:
        bottom, side_a, side_b, top = _corners(raw, s)
        census[bottom]["bottom"] += 1
        census[side_a]["side"] += 1
        census[side_b]["side"] += 1
        census[top]["top"] += 1
    for tp in raw.triple_points:
        counts = census[tp.id]
        if (counts["top"], counts["bottom"], counts["side"]) != (1, 1, 2):
            violations.append(errors.CornerCensusViolation(
                f"triple point {tp.id} is top {counts['top']}, bottom {counts['bottom']}, "
                f"side {counts['side']} times"))
    return violations


def _canonical(raw: RawVBS):
    """ Renumber triple points so that v_i is the bottom corner of S_i. """

    new_id = {}
    for s in raw.sectors:
        new_id[_corners(raw, s)[0]] = s.id
    colors = {tp.id: tp.color for tp in raw.triple_points}

    triple_points = tuple(TriplePoint(new_id[old], colors[old])
                          for old in sorted(new_id, key=new_id.get))
    edges = tuple(DirectedEdge(e.id, new_id[e.src], new_id[e.dst])
                  for e in sorted(raw.edges, key=lambda e: e.id))
    sectors = []
    for s in sorted(raw.sectors, key=lambda s: s.id):
        bottom, side_a, side_b, top = (new_id[v] for v in _corners(raw, s))
        sectors.append(Sector(s.id, tuple(s.path_a), tuple(s.path_b), bottom, top, side_a, side_b))

    smooth = _smooth_map(raw)
    turning = {}
    for e in edges:
        outs = [f.id for f in edges if f.src == e.dst]
        turning[e.id] = next(f for f in outs if f != smooth[e.id])

    return VeeringBranchedSurface(triple_points, edges, tuple(sectors), smooth, turning, raw.name)


def _check_colors(vbs: VeeringBranchedSurface):
    violations = []
    for loop in decompose_branch_loops(vbs).loops:
        colors = {vbs.color(vbs.edge(e).dst) for e in loop}
        if len(colors) < 2:
            violations.append(errors.MonochromeBranchLoop(
                f"branch loop {list(loop)} only meets {colors.pop().value} triple points"))

    for e in vbs.edges:
        changes = vbs.color(e.src) != vbs.color(e.dst)
        first = vbs.first_top_occurrence(e.id)
        last = next((o for o in vbs.top_occurrences(e.id)
                     if o.index == len(vbs.sectors[o.sector].path(o.side)) - 1), None)
        if first is None or last is None:
            violations.append(errors.ColoringViolation(
                f"edge {e.id} {'never follows a bottom side' if first is None else 'never ends a top side'}"))
            continue
        first, last = first.sector, last.sector
        if changes != (first != last):
            violations.append(errors.ColoringViolation(
                f"edge {e.id}: colors {'differ' if changes else 'agree'} at its ends but it "
                f"{'starts and ends' if first == last else 'does not start and end'} one top side"))
    return violations


# LOOP DECOMPOSITIONS
def _follow(successor: dict, edge_count: int):
    loops, seen = [], set()
    for start in range(edge_count):
        if start in seen:
            continue
        loop, e = [], start
        while e not in seen:
            seen.add(e)
            loop.append(e)
            e = successor[e]
        loops.append(tuple(loop))
    return tuple(loops)


def decompose_branch_loops(vbs: VeeringBranchedSurface):
    """ Partition the edges by smooth continuation, each loop starting at its lowest edge id. """

    return LoopDecomposition(LoopKind.BRANCH, _follow(vbs.smooth, len(vbs.edges)))


def decompose_anti_branch_loops(vbs: VeeringBranchedSurface):
    """ Partition the edges by turning continuation.

    An anti-branch loop is orientation-preserving exactly when it has even length. """

    loops = _follow(vbs.turning, len(vbs.edges))
    return LoopDecomposition(LoopKind.ANTI_BRANCH, loops, tuple(len(loop) % 2 == 0 for loop in loops))


def sector_boundary(vbs: VeeringBranchedSurface, s: int):
    """ Integer edge vector of path_a - path_b; a cycle of the dual graph. """

    vector = [0] * len(vbs.edges)
    sector = vbs.sectors[s]
    for e in sector.path_a:
        vector[e] += 1
    for e in sector.path_b:
        vector[e] -= 1
    return vector


def relabel_raw(raw: RawVBS, vertex_map: dict, edge_map: dict, sector_map: dict, swap_sides=()):
    """ Rename the ids of a raw surface. Sectors listed in swap_sides exchange path_a and path_b. """

    triple_points = [TriplePoint(vertex_map[tp.id], tp.color) for tp in raw.triple_points]
    edges = [DirectedEdge(edge_map[e.id], vertex_map[e.src], vertex_map[e.dst]) for e in raw.edges]
    sectors = []
    for s in raw.sectors:
        path_a = tuple(edge_map[e] for e in s.path_a)
        path_b = tuple(edge_map[e] for e in s.path_b)
        if s.id in swap_sides:
            path_a, path_b = path_b, path_a
        sectors.append(RawSector(sector_map[s.id], path_a, path_b))
    pairing = {vertex_map[v]: [(edge_map[a], edge_map[b]) for a, b in pairs]
               for v, pairs in raw.smooth_pairing.items()}
    return RawVBS(triple_points, edges, sectors, pairing, raw.name)
