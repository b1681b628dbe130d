""" Canonical surface files: parsing, schema checks and deterministic dumps """
import json
import logging
import os

from jsonschema import Draft7Validator

from floerveer import errors, utils
from floerveer.vbs import Color, DirectedEdge, RawSector, RawVBS, TriplePoint, VeeringBranchedSurface

log = logging.getLogger(__name__)

SCHEMA_DIR = os.path.join(os.path.dirname(__file__), "schemas")
SECTIONS = ("triple_points", "edges", "smooth_pairing", "sectors")


def load_schema(name: str):
    """ Load one of the bundled JSON schemas by file name. """

    with open(os.path.join(SCHEMA_DIR, name), "r", encoding="utf-8") as file:
        return json.load(file)


def _schema_check(data: dict, strict: bool):
    """ Run the surface schema. Unknown keys fail in strict mode and warn otherwise. """

    validator = Draft7Validator(load_schema("surface.json"))
    for error in sorted(validator.iter_errors(data), key=lambda err: list(err.absolute_path)):
        where = "/".join(str(p) for p in error.absolute_path) or "<root>"
        if error.validator == "additionalProperties" and not strict:
            log.warning("Ignoring unknown keys at %s: %s", where, error.message)
            continue
        raise errors.SurfaceSyntaxError(f"{where}: {error.message}")


def _check_unique(section: str, records: list, key: str):
    seen = set()
    for record in records:
        if record[key] in seen:
            raise errors.DuplicateId(section, record[key])
        seen.add(record[key])


def parse_vbs_file(text: str, strict: bool = False):
    """ Parse the canonical JSON surface format. Structural parse only.

    Args:
        text (str): File content.
        strict (bool, optional): Reject unknown keys instead of ignoring them.
            Defaults to False.
    Raises:
        errors.SurfaceSyntaxError: Not JSON, or not shaped like a surface file.
        errors.MissingSection: A required section is absent.
        errors.DuplicateId: Two records of a section share an id.
    Returns:
        RawVBS: Unvalidated surface. """

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.SurfaceSyntaxError(exc.msg, exc.lineno, exc.colno) from exc

    if not isinstance(data, dict):
        raise errors.SurfaceSyntaxError("top level must be a JSON object", 1, 1)
    for section in SECTIONS:
        if section not in data:
            raise errors.MissingSection(section)

    _schema_check(data, strict)

    _check_unique("triple_points", data["triple_points"], "id")
    _check_unique("edges", data["edges"], "id")
    _check_unique("sectors", data["sectors"], "id")
    _check_unique("smooth_pairing", data["smooth_pairing"], "vertex")

    raw = RawVBS(
        triple_points=[TriplePoint(tp["id"], Color(tp["color"])) for tp in data["triple_points"]],
        edges=[DirectedEdge(e["id"], e["src"], e["dst"]) for e in data["edges"]],
        sectors=[RawSector(s["id"], tuple(s["path_a"]), tuple(s["path_b"])) for s in data["sectors"]],
        smooth_pairing={entry["vertex"]: [tuple(pair) for pair in entry["pairs"]]
                        for entry in data["smooth_pairing"]},
        name=data.get("name"),
    )
    log.debug("Parsed surface %s: %d triple points, %d edges, %d sectors",
              raw.name, len(raw.triple_points), len(raw.edges), len(raw.sectors))
    return raw


def load_vbs(path: str, strict: bool = False):
    """ Read and parse a surface file. """

    return parse_vbs_file(utils.read_text(path), strict=strict)


def dump_vbs(surface):
    """ Canonical JSON text for a RawVBS or a validated surface (sorted records, two-space indent). """

    if isinstance(surface, VeeringBranchedSurface):
        surface = surface.to_raw()
    return json.dumps(surface.to_dict(), indent=2) + "\n"
