""" Test utilities. """

import pytest

from floerveer import errors, fixtures, utils


class TestValidatePath:
    """ Test validating a file's path. """

    def test_valid(self):
        """ Test with valid path. """

        assert utils.validate_path(fixtures.path("f8"))

    def test_invalid(self):
        """ Test with invalid path. """

        with pytest.raises(errors.IoError):
            utils.validate_path("./invalid.json")


class TestLogLevel:
    """ Test reading the log level from the environment. """

    def test_default(self, monkeypatch):
        monkeypatch.delenv(utils.LOG_ENV_VAR, raising=False)
        assert utils.get_log_level() == "WARNING"

    def test_lowercase(self, monkeypatch):
        monkeypatch.setenv(utils.LOG_ENV_VAR, "debug")
        assert utils.get_log_level() == "DEBUG"

    def test_unknown(self, monkeypatch):
        monkeypatch.setenv(utils.LOG_ENV_VAR, "LOUD")
        with pytest.raises(errors.ConfigError):
            utils.get_log_level()


def test_parse_int_list():
    """ Test parsing a functional from the command line. """

    assert utils.parse_int_list("1,-2, 3") == [1, -2, 3]
    with pytest.raises(errors.ConfigError):
        utils.parse_int_list("1,two")


@pytest.mark.parametrize("images, parity", [
    ([0, 1, 2], 0),
    ([1, 0, 2], 1),
    ([1, 2, 0], 0),
    ([3, 2, 1, 0], 0),
    ([1, 2, 3, 0], 1),
])
def test_permutation_parity(images, parity):
    """ Test permutation parity by cycle count. """

    assert utils.permutation_parity(images) == parity
    assert utils.permutation_parity(utils.invert_permutation(images)) == parity
