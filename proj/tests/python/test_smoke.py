import json
import math
import os
import subprocess

import pytest

import modcurv


def test_derive_dim2():
    rep = modcurv.derive(2)
    assert rep["dim"] == 2
    assert rep["c_scalar"] == "1/12"
    assert modcurv.eval_function(rep["K"], 2.0) == pytest.approx((3 * math.log(2.0) - 2) / 2, rel=1e-12)
    assert modcurv.eval_function(rep["K"], 1.0) == pytest.approx(1 / 12, rel=1e-7)


def test_derive_dim4_and_json():
    rep = modcurv.derive(4, "kdelta")
    assert rep["K"] == "0" and rep["G"] == "0"
    assert rep["c_scalar_normalized"] == "1/96"
    j = json.loads(modcurv.derive_json(4, "nc4tori"))
    assert j["operator"] == "nc4tori"


def test_closed_form_matches_quadrature():
    # family K(1,1) = log(s)/(s-1)
    for s in (0.3, 2.0, 5.0):
        assert modcurv.quad_r_integral([1, 1], s) == pytest.approx(math.log(s) / (s - 1), rel=1e-10)


def test_symbols():
    assert modcurv.resolvent_term(0) == "1 * b0"
    avg = modcurv.sphere_average("b0^3 * k^2 * GradK[a] * b0 * GradK[b] * b0 * DXi2[a] * DXi2[b]", 4)
    assert "Ginv" in avg


def test_errors():
    with pytest.raises(modcurv.UsageError):
        modcurv.derive(3)
    with pytest.raises(ValueError):
        modcurv.derive(2, "laplace")
    with pytest.raises(modcurv.PipelineError):
        modcurv.gauss_bonnet_residual(0.3, cap=2)


def test_gauss_bonnet_and_verify():
    assert modcurv.gauss_bonnet_residual(1 / 3) < 1e-10
    results = modcurv.verify("algebra", seed=1)
    assert results and all(r["pass"] for r in results)


@pytest.mark.skipif("MODCURV_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_roundtrip():
    out = subprocess.run([os.environ["MODCURV_CLI"], "derive", "--dim", "2", "--format", "json"],
                         check=True, capture_output=True, text=True).stdout
    assert json.loads(out)["K"] == modcurv.derive(2)["K"]
