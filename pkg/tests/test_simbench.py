import csv
import json
import math
from dataclasses import asdict, replace

import pytest

from adaptive_osd.codes import get_code
from adaptive_osd.simbench import (
    CSV_COLUMNS,
    CampaignConfig,
    ConfigError,
    SnrPointResult,
    emit_results,
    parse_snr_grid,
    read_results_csv,
    run_campaign,
    run_point,
)


def cfg(**kw):
    base = dict(
        code=get_code("ebch-16-11"),
        decoder_kind="adaptive",
        order=1,
        snr_grid_db=(3.0,),
        target_errors=15,
        max_frames=3000,
        master_seed=4,
    )
    base.update(kw)
    return CampaignConfig(**base)


def test_config_validation():
    with pytest.raises(ConfigError):
        cfg(snr_grid_db=())
    with pytest.raises(ConfigError):
        cfg(target_errors=0)
    with pytest.raises(ConfigError):
        cfg(max_frames=10, target_errors=20)
    with pytest.raises(ConfigError):
        cfg(decoder_kind="bp")
    with pytest.raises(ConfigError):
        cfg(order=12)
    with pytest.raises(ConfigError):
        cfg(tau=2.0)
    with pytest.raises(ConfigError):
        cfg(workers=0)


def test_ml_high_snr_is_censored():
    res = run_point(cfg(code=get_code("ebch-8-4"), decoder_kind="ml-oracle", max_frames=1000, target_errors=1), 20.0)
    assert res.bler == 0 and res.block_errors == 0 and res.censored and res.frames == 1000


def test_stops_exactly_at_target():
    res = run_point(cfg(), 2.0)
    assert res.block_errors == 15 and not res.censored
    assert res.bler == res.block_errors / res.frames


def test_counters_and_rates():
    res = run_point(cfg(target_errors=40), 4.0)
    for name in ("bler", "ge_skip_rate", "condition1_rate", "condition2_rate"):
        assert 0 <= getattr(res, name) <= 1
    assert res.condition2_rate <= res.condition1_rate
    assert res.avg_teps >= 1 and res.avg_decode_time_ns > 0


@pytest.mark.parametrize("snr", [1.0, 4.0])
def test_original_osd_tep_count_is_flat(snr):
    spec = get_code("ebch-16-11")
    res = run_point(cfg(code=spec, decoder_kind="original-osd", order=2, target_errors=10), snr)
    assert res.avg_teps == 1 + 11 + 55
    assert res.ge_skip_rate == 0


def test_worker_count_determinism():
    c = cfg(target_errors=25, max_frames=6000)
    ref = run_point(c, 2.5)
    for w in (2, 4):
        got = run_point(replace(c, workers=w), 2.5)
        assert (got.frames, got.block_errors, got.bler, got.avg_teps, got.ge_skip_rate) == (
            ref.frames, ref.block_errors, ref.bler, ref.avg_teps, ref.ge_skip_rate
        )
        assert (got.condition1_rate, got.condition2_rate, got.censored) == (
            ref.condition1_rate, ref.condition2_rate, ref.censored
        )


def test_same_seed_repeats_and_seed_matters():
    a, b = run_point(cfg(), 2.0), run_point(cfg(), 2.0)
    assert (a.frames, a.avg_teps) == (b.frames, b.avg_teps)
    c = run_point(cfg(master_seed=5), 2.0)
    assert (c.frames, c.avg_teps) != (a.frames, a.avg_teps)


def test_campaign_rows_and_progress(tmp_path, capsys):
    out = tmp_path / "r.csv"
    res = run_campaign(cfg(snr_grid_db=(2.5, 3.0), output=out))
    assert [r.snr_db for r in res] == [2.5, 3.0]
    assert "2.50 dB" in capsys.readouterr().err
    assert len(out.read_text().splitlines()) == 3


def _result(**kw):
    base = dict(snr_db=2.5, frames=1234, block_errors=17, bler=17 / 1234, avg_teps=math.pi, ge_skip_rate=0.1,
                condition1_rate=1 / 3, condition2_rate=0.0, avg_decode_time_ns=123456.789, censored=False)
    base.update(kw)
    return SnrPointResult(**base)


def test_csv_header_and_roundtrip(tmp_path):
    rows = [_result(), _result(snr_db=3.0, bler=2 / 3, censored=True)]
    p = emit_results(rows, "csv", tmp_path / "x.csv")
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    assert read_results_csv(p) == rows


def test_csv_single_point(tmp_path):
    p = emit_results([_result()], "csv", tmp_path / "one.csv")
    assert len(p.read_text().splitlines()) == 2


def test_json_matches_csv(tmp_path):
    rows = [_result(), _result(snr_db=3.5, avg_teps=7807.0)]
    pc = emit_results(rows, "csv", tmp_path / "x.csv")
    pj = emit_results(rows, "json", tmp_path / "x.json")
    data = json.loads(pj.read_text())
    assert [list(d) for d in data] == [list(CSV_COLUMNS)] * 2
    for d, r in zip(data, read_results_csv(pc)):
        assert d == asdict(r)


def test_emit_errors(tmp_path):
    with pytest.raises(ValueError):
        emit_results([], "csv", tmp_path / "e.csv")
    with pytest.raises(OSError) as exc:
        emit_results([_result()], "csv", tmp_path / "missing" / "e.csv")
    assert "missing" in str(exc.value)


def test_parse_snr_grid():
    assert parse_snr_grid("2.5:0.5:4.0") == (2.5, 3.0, 3.5, 4.0)
    assert parse_snr_grid("2.5:0.5:8.5")[-1] == 8.5 and len(parse_snr_grid("2.5:0.5:8.5")) == 13
    assert parse_snr_grid("1, 2,3.5") == (1.0, 2.0, 3.5)
    for bad in ("1:0:2", "3:1:2", "1:2"):
        with pytest.raises(ConfigError):
            parse_snr_grid(bad)
