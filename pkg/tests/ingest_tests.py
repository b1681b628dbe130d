""" Test surface file parsing. """

import json

import pytest

from floerveer import errors, fixtures, ingest, utils


def _f8_data():
    return json.loads(utils.read_text(fixtures.path("f8")))


class TestParse:
    """ Test parse_vbs_file. """

    def test_not_json(self):
        """ Syntax errors carry a position. """

        with pytest.raises(errors.SurfaceSyntaxError) as info:
            ingest.parse_vbs_file('{"edges": [1,\n')
        assert info.value.line is not None

    def test_top_level_array(self):
        with pytest.raises(errors.SurfaceSyntaxError):
            ingest.parse_vbs_file("[]")

    @pytest.mark.parametrize("section", ingest.SECTIONS)
    def test_missing_section(self, section):
        """ Each required section is reported by name. """

        data = _f8_data()
        del data[section]
        with pytest.raises(errors.MissingSection) as info:
            ingest.parse_vbs_file(json.dumps(data))
        assert info.value.section == section

    def test_duplicate_id(self):
        """ Two edges with id 0. """

        data = _f8_data()
        data["edges"][1]["id"] = 0
        with pytest.raises(errors.DuplicateId) as info:
            ingest.parse_vbs_file(json.dumps(data))
        assert info.value.section == "edges"

    def test_wrong_type(self):
        """ Schema violations are syntax errors. """

        data = _f8_data()
        data["triple_points"][0]["color"] = "green"
        with pytest.raises(errors.SurfaceSyntaxError):
            ingest.parse_vbs_file(json.dumps(data))

    def test_unknown_keys(self):
        """ Unknown keys fail only in strict mode. """

        data = _f8_data()
        data["comment"] = "hand-made"
        text = json.dumps(data)
        assert len(ingest.parse_vbs_file(text).edges) == 4
        with pytest.raises(errors.SurfaceSyntaxError):
            ingest.parse_vbs_file(text, strict=True)

    def test_missing_file(self):
        with pytest.raises(errors.IoError):
            ingest.load_vbs("./no-such-surface.json")


class TestDump:
    """ Test the canonical dump. """

    def test_round_trip(self):
        """ Dumping and re-parsing a validated surface gives the same records. """

        vbs = fixtures.surface("c2")
        raw = ingest.parse_vbs_file(ingest.dump_vbs(vbs), strict=True)
        assert raw.to_dict() == vbs.to_raw().to_dict()

    def test_canonical_text(self):
        """ The committed fixture is already in canonical form up to whitespace. """

        data = _f8_data()
        assert json.loads(ingest.dump_vbs(fixtures.raw("f8"))) == data
        assert ingest.dump_vbs(fixtures.raw("f8")) == ingest.dump_vbs(fixtures.surface("f8"))
