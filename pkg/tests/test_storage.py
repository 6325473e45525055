import json

import pytest

from channel.errors import OutputError
from storage.paths import open_output, write_csv, write_json


def test_write_csv_uses_bare_newlines(tmp_path):
    target = tmp_path / "nested" / "rows.csv"
    write_csv(str(target), ["a", "b"], [["1", "2"], ["3", "4"]])
    assert target.read_bytes() == b"a,b\n1,2\n3,4\n"


def test_write_json_round_trips(tmp_path):
    target = tmp_path / "report.json"
    write_json(str(target), {"value": 1.5, "binding": ["B3", "B4"]})
    assert json.loads(target.read_text(encoding="utf-8")) == {"value": 1.5, "binding": ["B3", "B4"]}


def test_stdout_when_no_path(capsys):
    with open_output(None) as f:
        f.write("hello\n")
    assert capsys.readouterr().out == "hello\n"


def test_unwritable_destination(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputError):
        write_csv(str(blocker / "out.csv"), ["a"], [])
    with pytest.raises(OSError):
        write_json(str(blocker / "out.json"), {})
