import contextlib
import io
import os

import pytest

from dgspec.cli import main

from conftest import FIXTURES, GOLDEN
from golden_cases import CASES, FIXTURE_FILES


def run(args):
    args = [str(FIXTURES / a) if a.endswith(".txt") else a for a in args]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(args)
    assert code == 0
    return buf.getvalue()


def test_five_fixture_files_committed():
    assert len(FIXTURE_FILES) == 5
    assert all((FIXTURES / f"{name}.txt").is_file() for name in FIXTURE_FILES)


@pytest.mark.parametrize("case", sorted(CASES))
def test_golden_output(case):
    path = GOLDEN / f"{case}.json"
    out = run(CASES[case])
    if os.environ.get("DGSPEC_REGEN_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")
    assert run(CASES[case]) == out
