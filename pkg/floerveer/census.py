""" Taut veering triangulations: census signature codec and the dual branched surface

Signatures are isomorphism signatures of ideal triangulations followed by
"_" and one digit per tetrahedron naming its pair of pi-angle edges. """
import itertools
import logging
import string
from collections import deque
from dataclasses import dataclass

from floerveer import errors
from floerveer.utils import invert_permutation, permutation_parity
from floerveer.vbs import Color, DirectedEdge, RawSector, RawVBS, TriplePoint

log = logging.getLogger(__name__)

separator = "_"
base64_letters = string.ascii_letters + "0123456789+-"
letter_to_int = {a: i for i, a in enumerate(base64_letters)}

# lexicographic order of S4, the index of a gluing permutation in a signature
ORDERED_S4 = tuple(itertools.permutations(range(4)))
S4_INDEX = {perm: i for i, perm in enumerate(ORDERED_S4)}

# tetrahedron edges in a fixed order, each as a sorted vertex pair
TET_EDGES = tuple(itertools.combinations(range(4), 2))


@dataclass(frozen=True)
class Gluing:
    """ Face gluing: vertex i of this tetrahedron goes to vertex perm[i] of tet. """

    tet: int
    face: int
    perm: tuple


@dataclass(frozen=True)
class TautVeeringTriangulation:
    """ An oriented ideal triangulation with a transverse taut veering structure.

    angles[s] = k puts the pi angles of tetrahedron s on edges {0, k+1} and
    their complement. Top diagonals are the pi edges on the upper side of the
    coorientation. edge_classes[s] lists the class of each edge of TET_EDGES. """

    n: int
    gluings: tuple
    angles: tuple
    orientation: tuple = ()
    top_diagonals: tuple = ()
    edge_classes: tuple = ()
    edge_colors: tuple = ()

    def pi_pairs(self, s: int):
        return pi_pairs(self.angles[s])

    def bottom_diagonal(self, s: int):
        top = self.top_diagonals[s]
        return tuple(sorted(set(range(4)) - set(top)))

    def is_top_face(self, s: int, face: int):
        """ Top faces contain the top diagonal. """
        return face not in self.top_diagonals[s]

    def edge_class(self, s: int, pair):
        return self.edge_classes[s][TET_EDGES.index(tuple(sorted(pair)))]


def pi_pairs(k: int):
    first = (0, k + 1)
    return first, tuple(sorted(set(range(4)) - set(first)))


# DECODING
def _read_actions(sig: str, n: int, pos: int):
    actions, facet_pos = [], 0
    while facet_pos < 4 * n:
        if pos >= len(sig):
            raise errors.MalformedSignature(sig, "truncated facet actions")
        value = letter_to_int[sig[pos]]
        pos += 1
        for _ in range(3):
            action = value & 3
            value >>= 2
            if facet_pos == 4 * n:
                if action:
                    raise errors.MalformedSignature(sig, "nonzero padding in facet actions")
                continue
            if action == 3:
                raise errors.MalformedSignature(sig, "invalid facet action")
            if action == 0:
                raise errors.MalformedSignature(sig, "boundary faces are not allowed")
            facet_pos += 2
            if facet_pos > 4 * n:
                raise errors.MalformedSignature(sig, "facet actions overrun the faces")
            actions.append(action)
    return actions, pos


def parse_signature(sig: str):
    """ Gluings and angle digits of a taut signature, without structural analysis.

    Raises:
        errors.MalformedSignature: Not a signature this decoder can read.
        errors.UnsupportedVersion: Multi-character size encodings (63 or more tetrahedra). """

    if separator not in sig:
        raise errors.MalformedSignature(sig, "missing taut angle suffix")
    body, suffix = sig.rsplit(separator, 1)
    if not body or any(c not in letter_to_int for c in body):
        raise errors.MalformedSignature(sig, "invalid characters")

    n = letter_to_int[body[0]]
    if n == 63:
        raise errors.UnsupportedVersion(sig, "multi-character tetrahedron counts")
    if n == 0:
        raise errors.MalformedSignature(sig, "empty triangulation")

    actions, pos = _read_actions(body, n, 1)
    joins = actions.count(2)
    if actions.count(1) != n - 1:
        raise errors.MalformedSignature(sig, "triangulation is disconnected or overfull")
    if len(body) != pos + 2 * joins:
        raise errors.MalformedSignature(sig, "wrong number of gluing characters")
    destinations = [letter_to_int[c] for c in body[pos:pos + joins]]
    perm_ids = [letter_to_int[c] for c in body[pos + joins:]]
    if any(d >= n for d in destinations) or any(p >= len(ORDERED_S4) for p in perm_ids):
        raise errors.MalformedSignature(sig, "gluing out of range")

    gluings = [[None] * 4 for _ in range(n)]
    queue = deque(actions)
    next_unused, join = 1, 0
    for s in range(n):
        for f in range(4):
            if gluings[s][f] is not None:
                continue
            action = queue.popleft()
            if action == 1:
                t, perm = next_unused, (0, 1, 2, 3)
                next_unused += 1
            else:
                t, perm = destinations[join], ORDERED_S4[perm_ids[join]]
                join += 1
            g = perm[f]
            if gluings[t][g] is not None or (t, g) == (s, f):
                raise errors.MalformedSignature(sig, f"face {g} of tetrahedron {t} glued twice")
            gluings[s][f] = Gluing(t, g, perm)
            gluings[t][g] = Gluing(s, f, tuple(invert_permutation(perm)))

    if len(suffix) != n or any(c not in "012" for c in suffix):
        raise errors.MalformedSignature(sig, "angle suffix must have one digit 0-2 per tetrahedron")

    return n, tuple(tuple(row) for row in gluings), tuple(int(c) for c in suffix)


def decode_taut_signature(sig: str):
    """ Decode a census signature into a taut veering triangulation.

    Raises:
        errors.MalformedSignature: Unreadable signature.
        errors.UnsupportedVersion: Encoding feature not supported.
        errors.NonVeeringInput: Gluings and angles do not form a taut veering structure. """

    n, gluings, angles = parse_signature(sig.strip())
    triangulation = analyse(TautVeeringTriangulation(n, gluings, angles))
    log.debug("Decoded %s: %d tetrahedra", sig, n)
    return triangulation


def _orientation(T: TautVeeringTriangulation):
    signs = [0] * T.n
    signs[0] = 1
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for gluing in T.gluings[s]:
            expected = signs[s] if permutation_parity(gluing.perm) else -signs[s]
            if signs[gluing.tet] == 0:
                signs[gluing.tet] = expected
                queue.append(gluing.tet)
            elif signs[gluing.tet] != expected:
                raise errors.NonVeeringInput("triangulation is not orientable")
    return tuple(signs)


def _coorientation(T: TautVeeringTriangulation):
    """ Top diagonal per tetrahedron, propagated from the pi pair through vertex 0 of tetrahedron 0. """

    tops = [None] * T.n
    tops[0] = T.pi_pairs(0)[0]
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for f, gluing in enumerate(T.gluings[s]):
            top_face = f not in tops[s]
            # across a top face we enter through a bottom face, whose vertex lies on the top diagonal
            pair = next(p for p in T.pi_pairs(gluing.tet) if (gluing.face in p) == top_face)
            if tops[gluing.tet] is None:
                tops[gluing.tet] = pair
                queue.append(gluing.tet)
            elif tops[gluing.tet] != pair:
                raise errors.NonVeeringInput("taut coorientation is inconsistent")
    return tuple(tops)


def _edge_classes(T: TautVeeringTriangulation):
    parent = {(s, pair): (s, pair) for s in range(T.n) for pair in TET_EDGES}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in range(T.n):
        for f, gluing in enumerate(T.gluings[s]):
            for pair in TET_EDGES:
                if f in pair:
                    continue
                image = tuple(sorted(gluing.perm[v] for v in pair))
                parent[find((s, pair))] = find((gluing.tet, image))

    numbering, classes = {}, []
    for s in range(T.n):
        row = []
        for pair in TET_EDGES:
            root = find((s, pair))
            numbering.setdefault(root, len(numbering))
            row.append(numbering[root])
        classes.append(tuple(row))
    return tuple(classes), len(numbering)


def analyse(T: TautVeeringTriangulation):
    """ Fill in orientation, coorientation, edge classes and veering colors.

    Raises:
        errors.NonVeeringInput: Any of the structures is inconsistent. """

    for s in range(T.n):
        for f, gluing in enumerate(T.gluings[s]):
            back = T.gluings[gluing.tet][gluing.face]
            if (back.tet, back.face) != (s, f) or gluing.perm[f] != gluing.face:
                raise errors.NonVeeringInput(f"gluing of face {f} of tetrahedron {s} is not involutive")

    orientation = _orientation(T)
    classes, count = _edge_classes(T)
    if count != T.n:
        raise errors.NonVeeringInput(f"{count} edge classes for {T.n} tetrahedra")

    pi_count = [0] * count
    for s in range(T.n):
        for pair in T.pi_pairs(s):
            pi_count[classes[s][TET_EDGES.index(pair)]] += 1
    for c, total in enumerate(pi_count):
        if total != 2:
            raise errors.NonVeeringInput(f"angle sum around edge class {c} is {total} pi")

    T = TautVeeringTriangulation(T.n, T.gluings, T.angles, orientation, (), classes)
    tops = _coorientation(T)
    T = TautVeeringTriangulation(T.n, T.gluings, T.angles, orientation, tops, classes)

    colors = [None] * count
    for s in range(T.n):
        x, x2 = tops[s]
        y, y2 = T.bottom_diagonal(s)
        for top_end, bottom_end, other_top, other_bottom in ((x, y, x2, y2), (x, y2, x2, y), (x2, y, x, y2),
                                                              (x2, y2, x, y)):
            parity = permutation_parity([top_end, bottom_end, other_top, other_bottom])
            color = Color.RED if (parity == 0) == (orientation[s] == 1) else Color.BLUE
            c = T.edge_class(s, (top_end, bottom_end))
            if colors[c] is None:
                colors[c] = color
            elif colors[c] != color:
                raise errors.NonVeeringInput(f"edge class {c} has no consistent veering color")

    return TautVeeringTriangulation(T.n, T.gluings, T.angles, orientation, tops, classes, tuple(colors))


# ENCODING
def encode_taut_signature(T: TautVeeringTriangulation):
    """ Signature of T traversed from tetrahedron 0 with its own vertex labels.

    For a decoded census entry this reproduces the original string. """

    if T.n >= 63:
        raise errors.UnsupportedVersion(f"<{T.n} tetrahedra>", "multi-character tetrahedron counts")

    order, index, relabel = [0], {0: 0}, {0: (0, 1, 2, 3)}
    actions, destinations, perms = [], [], []
    pos = 0
    while pos < len(order):
        s = order[pos]
        inverse = invert_permutation(relabel[s])
        for new_face in range(4):
            f = inverse[new_face]
            gluing = T.gluings[s][f]
            t = gluing.tet
            if t not in index:
                index[t] = len(order)
                order.append(t)
                # relabel t so that this gluing reads as the identity
                relabel[t] = tuple(relabel[s][gluing.perm.index(v)] for v in range(4))
                actions.append(1)
                continue
            partner_face = relabel[t][gluing.face]
            if (index[t], partner_face) < (pos, new_face):
                continue
            perm = tuple(relabel[t][gluing.perm[inverse[v]]] for v in range(4))
            actions.append(2)
            destinations.append(index[t])
            perms.append(S4_INDEX[perm])
        pos += 1

    chars = [base64_letters[T.n]]
    for i in range(0, len(actions), 3):
        chunk = actions[i:i + 3]
        chars.append(base64_letters[sum(a << (2 * k) for k, a in enumerate(chunk))])
    chars.extend(base64_letters[d] for d in destinations)
    chars.extend(base64_letters[p] for p in perms)

    digits = []
    for s in order:
        first, _ = T.pi_pairs(s)
        a, b = relabel[s][first[0]], relabel[s][first[1]]
        partner_of_zero = b if a == 0 else a if b == 0 else None
        if partner_of_zero is None:
            # vertex 0 lies on the other pi edge
            other = [relabel[s][v] for v in set(range(4)) - set(first)]
            partner_of_zero = other[1] if other[0] == 0 else other[0]
        digits.append(str(partner_of_zero - 1))
    return "".join(chars) + separator + "".join(digits)


# DUAL SURFACE
def vbs_from_triangulation(T: TautVeeringTriangulation, name: str = None):
    """ Dual veering branched surface of a taut veering triangulation.

    One triple point per tetrahedron, one edge per face directed upward
    through it, one sector per edge class numbered by the tetrahedron where
    that edge is the top diagonal.

    Raises:
        errors.NonVeeringInput: The structure does not dualize to a diamond decomposition.
    Returns:
        RawVBS: Surface in file form, ready for validation. """

    T = analyse(T)

    face_edge, edges = {}, []
    for s in range(T.n):
        for f in range(4):
            if (s, f) in face_edge:
                continue
            gluing = T.gluings[s][f]
            e = len(edges)
            face_edge[(s, f)] = face_edge[(gluing.tet, gluing.face)] = e
            if T.is_top_face(s, f) == T.is_top_face(gluing.tet, gluing.face):
                raise errors.NonVeeringInput(f"face {f} of tetrahedron {s} is top or bottom on both sides")
            src, dst = (s, gluing.tet) if T.is_top_face(s, f) else (gluing.tet, s)
            edges.append(DirectedEdge(e, src, dst))

    owner = {}
    for s in range(T.n):
        c = T.edge_class(s, T.top_diagonals[s])
        if c in owner:
            raise errors.NonVeeringInput(f"edge class {c} is the top diagonal of two tetrahedra")
        owner[c] = s

    sectors = []
    for s in range(T.n):
        top = T.top_diagonals[s]
        exits = sorted(f for f in range(4) if f not in top)
        paths = [_walk_up(T, s, top, f, face_edge) for f in exits]
        sectors.append(RawSector(s, tuple(paths[0]), tuple(paths[1])))

    smooth = {}
    for sector in sectors:
        for path in (sector.path_a, sector.path_b):
            for first, second in zip(path[1:], path[2:]):
                smooth[first] = second
    pairing = {v: sorted((e.id, smooth[e.id]) for e in edges if e.dst == v and e.id in smooth)
               for v in range(T.n)}

    # a triple point takes the veering color of its tetrahedron's bottom diagonal
    triple_points = [TriplePoint(s, T.edge_colors[T.edge_class(s, T.bottom_diagonal(s))]) for s in range(T.n)]
    raw = RawVBS(triple_points, edges, sectors, pairing, name)
    log.debug("Dual surface of %s: %d triple points, %d edges", name, T.n, len(edges))
    return raw


def _walk_up(T: TautVeeringTriangulation, s: int, pair: tuple, face: int, face_edge: dict):
    path = [face_edge[(s, face)]]
    for _ in range(4 * T.n + 1):
        gluing = T.gluings[s][face]
        s = gluing.tet
        pair = tuple(sorted(gluing.perm[v] for v in pair))
        if pair == T.bottom_diagonal(s):
            return path
        others = [v for v in range(4) if v not in pair]
        face = others[1] if others[0] == gluing.face else others[0]
        if not T.is_top_face(s, face):
            raise errors.NonVeeringInput(f"sector boundary leaves tetrahedron {s} through a bottom face")
        path.append(face_edge[(s, face)])
    raise errors.NonVeeringInput("sector boundary does not close up")

