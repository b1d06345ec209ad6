"""Secondary-component acceptance: all three figure kinds render from the
golden CSV fixtures without error and byte-stable across two runs."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plots import main  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
CASES = [
    ("roots", "roots.csv"),
    ("resolvent", "resolvent.csv"),
    ("decay", "energy.csv"),
]


@pytest.mark.parametrize("kind,fixture", CASES)
def test_render_each_kind(tmp_path, kind, fixture):
    out = tmp_path / f"{kind}.svg"
    code = main(["--kind", kind, "--in", str(FIXTURES / fixture),
                 "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert out.stat().st_size > 1000


@pytest.mark.parametrize("kind,fixture", CASES)
def test_byte_stable(tmp_path, kind, fixture):
    outs = []
    for name in ("a.svg", "b.svg"):
        out = tmp_path / name
        assert main(["--kind", kind, "--in", str(FIXTURES / fixture),
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_manifest_styling(tmp_path):
    out = tmp_path / "roots.svg"
    code = main(["--kind", "roots", "--in", str(FIXTURES / "roots.csv"),
                 "--out", str(out), "--manifest", str(FIXTURES / "manifest.json")])
    assert code == 0
    assert b"k_max=24" in out.read_bytes()


def test_schema_mismatch_exits_2(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    code = main(["--kind", "roots", "--in", str(bad),
                 "--out", str(tmp_path / "x.svg")])
    assert code == 2


def test_empty_input_exits_2(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("t,E,E1,dissipated\n")
    code = main(["--kind", "decay", "--in", str(empty),
                 "--out", str(tmp_path / "x.svg")])
    assert code == 2


def test_missing_file_exits_2(tmp_path):
    code = main(["--kind", "decay", "--in", str(tmp_path / "nope.csv"),
                 "--out", str(tmp_path / "x.svg")])
    assert code == 2


def test_png_output(tmp_path):
    out = tmp_path / "decay.png"
    code = main(["--kind", "decay", "--in", str(FIXTURES / "energy.csv"),
                 "--out", str(out)])
    assert code == 0
    assert out.stat().st_size > 1000
