""" Test the command-line driver. """

import json
import shutil
from concurrent.futures import ThreadPoolExecutor

import pytest

from floerveer import errors, fixtures, utils
from floerveer.scripts import floerveer_cli as cli


def _records(text):
    return [json.loads(chunk) for chunk in text.split("\x1e") if chunk.strip()]


def _monochrome(tmp_path):
    data = json.loads(utils.read_text(fixtures.path("f8")))
    for tp in data["triple_points"]:
        tp["color"] = "blue"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    return path


class TestModes:
    """ Test exit codes and outputs per mode. """

    def test_verify(self, tmp_path):
        """ F8 passes every check. """

        out = tmp_path / "f8-report.json"
        assert cli.main(["--mode", "verify", "--input", fixtures.path("f8"), "--out", str(out)]) == cli.EXIT_OK
        report = json.loads(out.read_text())
        assert report["mode"] == "verify"
        assert all(v is not False for v in report["verdicts"].values())

    def test_validate_stdout(self, capsys):
        assert cli.main(["--mode", "validate", "--input", fixtures.path("c2")]) == cli.EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["surface"]["n"] == 4
        assert report["verdicts"] == {"valid": True}

    def test_census(self, capsys):
        """ Signatures are decoded before validation. """

        assert cli.main(["--mode", "validate", "--census", "--input", "cPcbbbiht_12"]) == cli.EXIT_OK
        assert json.loads(capsys.readouterr().out)["input"] == "cPcbbbiht_12"

    def test_census_file(self, tmp_path, capsys):
        """ A signature file gives one report per line. """

        path = tmp_path / "census.txt"
        path.write_text("# census excerpt\ncPcbbbiht_12\ncPcbbbdxm_10\n")
        assert cli.main(["--mode", "validate", "--census", "--input", str(path)]) == cli.EXIT_OK
        records = _records(capsys.readouterr().out)
        assert [r["input"] for r in records] == ["cPcbbbiht_12", "cPcbbbdxm_10"]


class TestInputErrors:
    """ Test the input error exit code. """

    def test_malformed(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        out = tmp_path / "out.json"
        assert cli.main(["--input", str(path), "--out", str(out)]) == cli.EXIT_INPUT
        assert json.loads(out.read_text())["error"]["type"] == "SurfaceSyntaxError"

    def test_invalid_surface(self, tmp_path, capsys):
        assert cli.main(["--mode", "verify", "--input", str(_monochrome(tmp_path))]) == cli.EXIT_INPUT
        assert json.loads(capsys.readouterr().out)["error"]["type"] == "InvalidSurface"

    def test_bad_signature(self, capsys):
        assert cli.main(["--mode", "validate", "--census", "--input", "cPcbbbiht_19"]) == cli.EXIT_INPUT
        assert json.loads(capsys.readouterr().out)["error"]["type"] == "MalformedSignature"

    def test_missing_file(self):
        assert cli.main(["--input", "./no-such-surface.json"]) == cli.EXIT_INPUT

    def test_missing_output_directory(self, tmp_path):
        out = tmp_path / "missing" / "out.json"
        assert cli.main(["--mode", "validate", "--input", fixtures.path("f8"), "--out", str(out)]) == cli.EXIT_INPUT

    @pytest.mark.parametrize("argv", [
        ["--trunc-degree", "-1"],
        ["--budget-domains", "0"],
        ["--workers", "0"],
        ["--fibered-class", "1,x"],
    ])
    def test_bad_config(self, argv):
        assert cli.main(["--input", fixtures.path("f8")] + argv) == cli.EXIT_INPUT

    def test_config_checks(self):
        with pytest.raises(errors.ConfigError):
            cli.RunConfig(inputs=[], mode="report")
        with pytest.raises(errors.ConfigError):
            cli.RunConfig(inputs=["f8.json"], mode="draw")


class TestBatch:
    """ Test batch processing of a directory. """

    def test_batch(self, tmp_path):
        """ One bad file fails the batch; the good one still gets its report. """

        directory = tmp_path / "surfaces"
        directory.mkdir()
        shutil.copy(fixtures.path("f8"), directory / "f8.json")
        shutil.move(str(_monochrome(tmp_path)), str(directory / "bad.json"))
        out = tmp_path / "batch.jsonseq"

        code = cli.main(["--mode", "batch", "--input", str(directory), "--out", str(out)])
        assert code == cli.EXIT_FAILED
        bad, good = _records(out.read_text())
        assert bad["error"]["type"] == "InvalidSurface"
        assert good["mode"] == "batch"
        assert all(v is not False for v in good["verdicts"].values())

    def test_sequence_format(self, tmp_path):
        """ Records are separated by the RS character. """

        directory = tmp_path / "surfaces"
        directory.mkdir()
        shutil.copy(fixtures.path("f8"), directory / "f8.json")
        out = tmp_path / "batch.jsonseq"
        assert cli.main(["--mode", "batch", "--input", str(directory), "--out", str(out)]) == cli.EXIT_OK
        assert out.read_text().startswith("\x1e")

    def test_parallel_order(self, tmp_path):
        """ Worker processes keep the reports in input order. """

        directory = tmp_path / "surfaces"
        directory.mkdir()
        for name in ("f8", "s1", "c2"):
            shutil.copy(fixtures.path(name), directory / f"{name}.json")
        shutil.move(str(_monochrome(tmp_path)), str(directory / "bad.json"))

        texts = []
        for workers in ("1", "2"):
            out = tmp_path / f"batch{workers}.jsonseq"
            code = cli.main(["--mode", "batch", "--workers", workers, "--input", str(directory), "--out", str(out)])
            assert code == cli.EXIT_FAILED
            texts.append(out.read_text())
        sequential, parallel = (_records(text) for text in texts)
        assert [r["input"] for r in parallel] == [r["input"] for r in sequential]
        assert [r["input"].rsplit("/", 1)[-1] for r in parallel] == ["bad.json", "c2.json", "f8.json", "s1.json"]

    def test_pool_used(self, tmp_path, monkeypatch):
        """ Batch mode maps process over a pool sized by --workers. """

        sizes = []

        class RecordingPool(ThreadPoolExecutor):
            def __init__(self, max_workers=None):
                sizes.append(max_workers)
                super().__init__(max_workers=max_workers)

        monkeypatch.setattr(cli, "ProcessPoolExecutor", RecordingPool)
        directory = tmp_path / "surfaces"
        directory.mkdir()
        for copy in ("a", "b"):
            shutil.copy(fixtures.path("f8"), directory / f"{copy}.json")
        out = tmp_path / "batch.jsonseq"
        assert cli.main(["--mode", "batch", "--workers", "3", "--input", str(directory), "--out", str(out)]) == \
            cli.EXIT_OK
        assert sizes == [3]
        assert len(_records(out.read_text())) == 2
