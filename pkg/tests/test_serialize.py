import io
import json
import math

import numpy as np
import pytest

from sgdecoherence import ExperimentParams, OutputError
from sgdecoherence.experiment import SweepSpec, feasibility, run_sweep
from sgdecoherence.serialize import (
    HEADER,
    dumps_report,
    dumps_sweep,
    loads_sweep_csv,
    loads_sweep_json,
    read_sweep,
    report_from_dict,
    write_report,
    write_sweep,
)


@pytest.fixture(scope="module")
def result():
    return run_sweep(SweepSpec(theta_points=37))


def test_csv_layout(result):
    text = dumps_sweep(result, "csv")
    lines = text.splitlines()
    assert lines[0] == HEADER == "theta_rad,duration_s,T,P_x_plus,P_qm,D"
    assert len(lines) == 1 + 2 * 37
    assert lines[1].split(",")[-1] == "0"  # D at theta = 0


def test_csv_round_trip_is_exact(result):
    back = loads_sweep_csv(dumps_sweep(result, "csv"))
    np.testing.assert_array_equal(back.table(), result.table())


def test_json_round_trip_is_exact(result, tmp_path):
    path = tmp_path / "sweep.json"
    n = write_sweep(result, "json", path)
    assert n == path.stat().st_size
    back = read_sweep(path)
    assert back.table().tobytes() == result.table().tobytes()
    assert back.metadata["constants"]["G"] == 6.6743e-11
    assert back.metadata["engine"] == "analytic"


def test_csv_file_round_trip(result, tmp_path):
    path = tmp_path / "sweep.csv"
    write_sweep(result, "csv", path)
    np.testing.assert_array_equal(read_sweep(path).table(), result.table())


def test_write_to_stream(result):
    buf = io.StringIO()
    n = write_sweep(result, "csv", buf)
    assert n == len(buf.getvalue().encode())


def test_unwritable_destination(result, tmp_path):
    bad = tmp_path / "missing" / "out.csv"
    with pytest.raises(OutputError, match=str(bad)):
        write_sweep(result, "csv", bad)


def test_unknown_format(result):
    with pytest.raises(ValueError):
        dumps_sweep(result, "xml")


def test_report_text_contents():
    text = dumps_report(feasibility(ExperimentParams(duration=1.0)))
    assert "kinetic_ratio   2.135775999" in text
    assert "kinetic term negligible" in text
    assert "max_abs_D" in text and "argmax_theta" in text and "hbar" in text


def test_report_zero_duration():
    doc = json.loads(dumps_report(feasibility(ExperimentParams(duration=0.0)), "json"))
    assert doc["T"] == doc["kinetic_ratio"] == doc["max_abs_D"] == 0.0


def test_report_json_round_trip(tmp_path):
    rep = feasibility(ExperimentParams(mass=2.176434e-8, separation=1e-6, duration=1.0))
    path = tmp_path / "r.json"
    write_report(rep, "json", path)
    back = report_from_dict(json.loads(path.read_text()))
    assert back == rep
    assert f"{back.T:.4g}" == "2.998e+14"
