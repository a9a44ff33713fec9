import json
import math

import numpy as np
import pytest

import records
from core.prob import Distribution, JointDistribution
from errors import NonStochasticRow, ValidationError
from solver.algorithms import SolverConfig, arimoto_capacity


class TestLoadChannel:

    def test_csv(self, reference_csv, reference_channel):
        w = records.load_channel(reference_csv)
        np.testing.assert_array_equal(w.matrix, reference_channel.matrix)

    def test_json(self, tmp_path):
        path = tmp_path / "bsc.json"
        path.write_text(json.dumps({"matrix": [[0.9, 0.1], [0.1, 0.9]]}))
        assert records.load_channel(path).shape == (2, 2)

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("0.5,0.5\n\n0.25,0.75\n")
        assert records.load_channel(path).shape == (2, 2)

    def test_bad_row(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("0.5,0.5\n0.5,0.6\n")
        with pytest.raises(NonStochasticRow):
            records.load_channel(path)

    def test_ragged(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("0.5,0.5\n1.0\n")
        with pytest.raises(ValidationError):
            records.load_channel(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("0.5,abc\n")
        with pytest.raises(ValidationError):
            records.load_channel(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            records.load_channel(tmp_path / "nope.csv")


class TestLoadInit:

    def test_single_row_is_input_distribution(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("0.2,0.3,0.5\n")
        assert isinstance(records.load_init(path), Distribution)

    def test_matrix_is_joint(self, tmp_path):
        path = tmp_path / "q.json"
        path.write_text(json.dumps({"probs": [[0.25, 0.25], [0.25, 0.25]]}))
        assert isinstance(records.load_init(path), JointDistribution)


def test_digest_is_stable(reference_csv):
    assert records.channel_digest(reference_csv) == records.channel_digest(reference_csv)
    assert records.channel_digest(reference_csv).startswith("sha256:")


def test_trace_file_has_one_row_per_iterate(tmp_path, reference_channel):
    result = arimoto_capacity(reference_channel, SolverConfig(alpha=2.0))
    path = tmp_path / "traces" / "t.csv"
    records.write_trace(path, result.trace)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,F"
    assert len(lines) == result.iterations + 2
    assert float(lines[-1].split(",")[1]) == result.value


class TestRunRecord:

    def _record(self, reference_channel, bits=False):
        result = arimoto_capacity(reference_channel, SolverConfig(alpha=2.0))
        return records.RunRecord.from_result(result, 1e-9, "uniform-x", 12.3456789, "sha256:abc", bits=bits)

    def test_json_round_trip(self, reference_channel):
        text = self._record(reference_channel).to_json()
        assert json.dumps(json.loads(text), sort_keys=True, ensure_ascii=False) == text

    def test_fields(self, reference_channel):
        data = json.loads(self._record(reference_channel).to_json())
        assert set(data) == {"algorithm", "alpha", "epsilon", "init", "value", "units", "iterations",
                             "termination", "wall_time_ms", "channel_digest"}
        assert data["units"] == "nats"
        assert data["termination"] == "Converged"

    def test_bits(self, reference_channel):
        nats = json.loads(self._record(reference_channel).to_json())["value"]
        data = json.loads(self._record(reference_channel, bits=True).to_json())
        assert data["units"] == "bits"
        assert data["value"] == pytest.approx(nats / math.log(2), rel=1e-11)


def test_round_significant():
    assert records.round_significant(0.123456789012345) == 0.123456789012
    assert records.round_significant(math.inf) == math.inf
