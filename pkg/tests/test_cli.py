import csv
import io
import json
import subprocess
import sys

import pytest

from adaptive_osd.codes import get_code, save_generator
from adaptive_osd.simbench import CSV_COLUMNS, main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_csv_to_stdout(capsys):
    code, out, err = run(["--code", "ebch-8-4", "--decoder", "ml-oracle", "--snr", "2:1:3",
                          "--target-errors", "5", "--max-frames", "500", "--seed", "1"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["snr_db"]) for r in rows] == [2.0, 3.0]
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert "ebch-8-4" in err


def test_cli_json_file_and_code_file(tmp_path, capsys):
    gfile = tmp_path / "g.txt"
    save_generator(get_code("ebch-16-11"), gfile)
    out = tmp_path / "res.json"
    code, _, _ = run(["--code-file", str(gfile), "--decoder", "standard-osd", "--order", "1", "--snr", "3",
                      "--target-errors", "5", "--max-frames", "2000", "--out", str(out), "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data) == 1 and data[0]["block_errors"] <= 5


def test_cli_env_workers(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("DECODE_BENCH_WORKERS", "2")
    args = ["--code", "ebch-16-11", "--order", "1", "--snr", "2.5", "--target-errors", "8", "--max-frames", "2000"]
    code, out2, _ = run(args, capsys)
    monkeypatch.setenv("DECODE_BENCH_WORKERS", "1")
    _, out1, _ = run(args, capsys)
    assert code == 0
    strip = lambda s: [r[:8] for r in csv.reader(io.StringIO(s))]
    assert strip(out1) == strip(out2)


@pytest.mark.parametrize("args", [
    ["--code", "nope", "--snr", "3"],
    ["--code", "ebch-8-4", "--snr", "3:0:4"],
    ["--code", "ebch-8-4", "--snr", "3", "--target-errors", "0"],
    ["--code", "ebch-8-4", "--snr", "3", "--order", "9"],
    ["--code-file", "/nonexistent/g.txt", "--snr", "3"],
    ["--code", "ebch-8-4", "--snr", "3", "--max-frames", "5", "--target-errors", "1",
     "--out", "/nonexistent/dir/out.csv"],
])
def test_cli_errors_exit_nonzero(args, capsys):
    code, _, err = run(args, capsys)
    assert code != 0 and "error" in err


def test_cli_bad_code_file_reports_line(tmp_path, capsys):
    g = tmp_path / "bad.txt"
    g.write_text("8 4\n1111\n")
    code, _, err = run(["--code-file", str(g), "--snr", "3"], capsys)
    assert code != 0 and f"{g}:3" in err


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "adaptive_osd.simbench", "--code", "ebch-8-4", "--decoder", "original-osd",
         "--order", "1", "--snr", "4", "--target-errors", "3", "--max-frames", "300"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == ",".join(CSV_COLUMNS)
    # argparse usage errors also exit nonzero
    assert subprocess.run([sys.executable, "-m", "adaptive_osd.simbench"], capture_output=True).returncode != 0
