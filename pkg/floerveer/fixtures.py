""" Committed surfaces and their manifest of derived values """
import json
import os

from floerveer import ingest
from floerveer.census import decode_taut_signature, vbs_from_triangulation
from floerveer.vbs import validate

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
NAMES = ("f8", "c2", "s1")
# census entries kept by signature only
CENSUS_NAMES = ("z5", "z3z3", "d200", "d122a", "d122b", "e2001", "e2100", "e2002", "e1200", "e2102")


def manifest():
    """ The manifest as a dict keyed by fixture name. """

    with open(os.path.join(DATA_DIR, "manifest.json"), "r", encoding="utf-8") as file:
        return json.load(file)


def path(name: str):
    return os.path.join(DATA_DIR, manifest()[name]["file"])


def raw(name: str):
    return ingest.load_vbs(path(name), strict=True)


def surface(name: str):
    """ Validated fixture surface. """
    return validate(raw(name))


def census_surface(name: str):
    """ Validated dual surface of a manifest entry's signature. """

    sig = manifest()[name]["signature"]
    return validate(vbs_from_triangulation(decode_taut_signature(sig), name=sig))
