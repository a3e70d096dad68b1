import csv
import json

import numpy as np
import pytest

from spectpd import cli
from spectpd.config import (
    ConfigError,
    ExperimentConfig,
    default_lambda_grid,
    read_config_file,
    write_config_file,
)
from spectpd.eigensolve import EigensolveError
from spectpd.ensembles import EnsembleSpec, draw
from spectpd.experiments import RUNNERS, run
from spectpd.montecarlo import one_spectrum, statistic
from spectpd.output import render, table_to_csv

SMALL = {
    "universality": ["--sizes", "20,40", "--samples", "12"],
    "pe_table": ["--sizes", "20,40", "--samples", "12"],
    "ensembles": ["--sizes", "20", "--samples", "8"],
    "surmise_ks": ["--sizes", "30", "--samples", "8"],
    "w2": ["--sizes", "20", "--samples", "6"],
    "auc": ["--sizes", "20", "--samples", "20", "--bootstrap", "100"],
    "rp_sweep": ["--sizes", "20", "--samples", "30"],
    "spiked": ["--sizes", "20", "--samples", "20", "--bootstrap", "100"],
    "ecdf": ["--sizes", "20", "--samples", "5"],
}


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.mark.parametrize("experiment", sorted(SMALL))
def test_every_experiment_runs_and_is_byte_identical(tmp_path, experiment):
    args = [experiment, *SMALL[experiment], "--seed", "42", "-q"]
    assert cli.main([*args, "--out", str(tmp_path / "a")]) == 0
    assert cli.main([*args, "--out", str(tmp_path / "b"), "--threads", "3"]) == 0
    files_a = sorted(p.name for p in (tmp_path / "a").iterdir())
    files_b = sorted(p.name for p in (tmp_path / "b").iterdir())
    assert files_a == files_b
    assert f"{experiment}.meta.json" in files_a
    for name in files_a:
        if name.endswith(".csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert not [p for p in (tmp_path / "a").iterdir() if p.name.startswith(".")]
    meta = json.loads((tmp_path / "a" / f"{experiment}.meta.json").read_text())
    assert meta["config"]["master_seed"] == 42
    assert meta["wall_time_s"] >= 0 and meta["version"]


def test_json_format(tmp_path):
    assert cli.main(["w2", *SMALL["w2"], "--format", "json", "--out", str(tmp_path), "-q"]) == 0
    data = json.loads((tmp_path / "w2.json").read_text())
    assert set(data) == {"summary", "pairs"}
    assert data["summary"][0]["pairs"] == 6


def test_rows_regenerable_from_provenance(tmp_path):
    assert cli.main(["universality", *SMALL["universality"], "--seed", "9", "--out", str(tmp_path), "-q"]) == 0
    row = read_rows(tmp_path / "universality_cv.csv")[0]
    spec = EnsembleSpec.from_tag(row["spec_tag"], int(row["master_seed"]))
    pe = [statistic("pe")(one_spectrum(spec, i)) for i in range(int(row["samples"]))]
    assert float(row["mean_pe"]) == pytest.approx(np.mean(pe), rel=1e-12)


def test_config_file_and_flag_override(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# comment\nsizes = 20, 30\nsamples_per_cell = 7\nmaster_seed = 5\noutput_dir = %s\n" % (tmp_path / "o"))
    args = cli.build_parser().parse_args(["ensembles", "--config", str(conf), "--samples", "9"])
    cfg = cli.config_from_args(args)
    assert cfg.sizes == [20, 30] and cfg.samples_per_cell == 9 and cfg.master_seed == 5
    assert cli.main(["ensembles", "--config", str(conf), "-q"]) == 0
    rows = read_rows(tmp_path / "o" / "ensembles_ensembles.csv")
    assert {r["samples"] for r in rows} == {"7"}


def test_config_roundtrip(tmp_path):
    cfg = ExperimentConfig("rp_sweep", sizes=[50], samples_per_cell=40, master_seed=3).resolved()
    path = tmp_path / "c.conf"
    path.write_text(write_config_file(cfg))
    assert ExperimentConfig(**read_config_file(path)).resolved() == cfg


@pytest.mark.parametrize(
    "argv",
    [
        ["w2", "--samples", "1"],
        ["w2", "--sizes", "2"],
        ["w2", "--seed", "-4"],
        ["w2", "--seed", "abc"],
        ["auc", "--bootstrap", "10"],
        ["w2", "--config", "/nonexistent/file.conf"],
        ["w2", "--bulk-fraction", "1.5"],
        ["rp_sweep", "--samples", "10"],
    ],
)
def test_config_errors_exit_2(argv, tmp_path):
    assert cli.main([*argv, "--out", str(tmp_path), "-q"]) == 2
    assert not any(tmp_path.iterdir())


def test_unknown_key_in_config(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config_file(conf)
    assert cli.main(["w2", "--config", str(conf), "-q"]) == 2


def test_numerical_failure_exit_3(tmp_path, monkeypatch):
    def broken(cfg):
        raise EigensolveError("did not converge")

    monkeypatch.setitem(RUNNERS, "w2", broken)
    assert cli.main(["w2", "--out", str(tmp_path / "o"), "-q"]) == 3
    assert not (tmp_path / "o").exists()


def test_default_lambda_grid():
    grid = default_lambda_grid()
    assert grid[0] == 0.0 and grid[-1] == 5.0
    assert 0.5 in grid and 0.7 in grid and 0.25 in grid
    assert len(grid) == 22 and grid == sorted(grid)


def test_ecdf_semicircle_agreement():
    res = run(ExperimentConfig("ecdf", samples_per_cell=200))
    summary = res.tables["summary"][0]
    assert summary["grid_max_abs_deviation"] < 0.02
    assert len(res.tables["ecdf"]) == 512


def test_table_to_csv_formatting():
    text = table_to_csv([{"a": 0.1, "b": True, "c": None}, {"a": float("inf"), "b": False, "d": 3}])
    assert text == "a,b,c,d\n0.1,true,,\ninf,false,,3\n"


def test_render_keeps_volatile_fields_out_of_data():
    res = run(ExperimentConfig("ensembles", sizes=[10], samples_per_cell=4))
    res.metadata = {"wall_time_s": 1.5}
    files = render(res, "csv")
    assert all("wall_time" not in text for name, text in files.items() if name.endswith(".csv"))
