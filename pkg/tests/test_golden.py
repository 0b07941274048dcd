import json

import pytest

from adialab.errors import ConvergenceError
from adialab.golden import (
    golden_values,
    heisenberg_reduced_oracle,
    mathieu_phase_area_oracle,
    sol_symbol_trace_oracle,
    write_golden,
)
from foliations.sol_foliation import MathieuModel, mathieu_phase_area, sol_symbol_trace
from tests.utils import TIGHT_SPEC, assert_close


class TestOracles:
    def test_unit_slope_matches_heisenberg(self):
        assert_close(sol_symbol_trace_oracle(1.0, 1.0, dps=20), heisenberg_reduced_oracle(1.0, dps=20), 1e-15)

    def test_zero_slope_closed_form(self):
        assert_close(sol_symbol_trace_oracle(0.0, 1.0, dps=20), sol_symbol_trace(0.0, 1.0), 1e-12)

    def test_mathieu_area_below_the_well(self):
        assert mathieu_phase_area_oracle(1.0, 1.0, 0.5, dps=20) == 0.0

    def test_mathieu_area_matches_code(self):
        model = MathieuModel(a=2.0, mu=0.5, epsilon=1.0)
        assert_close(mathieu_phase_area(model, 7.0, TIGHT_SPEC), mathieu_phase_area_oracle(2.0, 0.5, 7.0, dps=20), 1e-10)

    def test_disagreeing_schemes_raise(self, monkeypatch):
        import mpmath

        calls = iter([mpmath.mpf(1), mpmath.mpf(2)])
        monkeypatch.setattr(mpmath, "quad", lambda *args, **kwargs: next(calls))
        with pytest.raises(ConvergenceError) as excinfo:
            heisenberg_reduced_oracle(1.0, dps=20)
        assert excinfo.value.operation == "heisenberg_reduced_oracle"


class TestGoldenFile:
    def test_values_carry_provenance(self):
        values = golden_values(dps=20)
        assert set(values) == {
            "heisenberg_symbol_trace_reduced",
            "sol_symbol_trace_alpha_half",
            "sol_symbol_trace_alpha_one",
            "mathieu_phase_area_lambda_2",
            "mathieu_phase_area_lambda_5",
        }
        for entry in values.values():
            assert entry["value"] > 0
            assert "dps=20" in entry["provenance"]
        assert values["sol_symbol_trace_alpha_one"]["value"] == pytest.approx(values["heisenberg_symbol_trace_reduced"]["value"], rel=1e-15)
        assert values["sol_symbol_trace_alpha_half"]["value"] > values["sol_symbol_trace_alpha_one"]["value"]

    def test_write_golden(self, tmp_path):
        path = tmp_path / "out" / "golden.json"
        values = write_golden(str(path), dps=20)
        with open(path, encoding="utf-8") as handle:
            assert json.load(handle) == values
