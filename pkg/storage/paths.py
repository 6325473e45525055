import csv
import json
import os
import sys
from contextlib import contextmanager
from typing import Any, Iterable, Iterator, Sequence, TextIO

from channel.errors import OutputError


def ensure_parent(path: str) -> str:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    return path


@contextmanager
def open_output(path: str | None) -> Iterator[TextIO]:
    """Yield a text stream for `path`, or stdout when `path` is None.

    Files are opened with newline="" so CSV rows end in a single "\\n".
    """
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
        return
    try:
        ensure_parent(path)
        f = open(path, "w", encoding="utf-8", newline="")
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    with f:
        yield f


def write_json(path: str | None, obj: Any):
    with open_output(path) as f:
        json.dump(obj, f, ensure_ascii=False, indent=2)
        f.write("\n")


def write_text(path: str | None, text: str):
    with open_output(path) as f:
        f.write(text)


def write_csv(path: str | None, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    with open_output(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)


__all__ = ["ensure_parent", "open_output", "write_json", "write_text", "write_csv"]
