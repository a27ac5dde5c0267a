import json
import math

import pytest

import tclab


def test_circle_masses():
    c = tclab.WindingCurve.circle(2, 1, 0.5)
    assert c.Q == 2
    assert c.mass() == pytest.approx(2 * math.pi * 2 * 0.5, rel=1e-13)
    assert c.cone_mass(spherical=False) == pytest.approx(2 * math.pi * 0.25, rel=1e-13)


def test_single_mode_ratio():
    z = tclab.WindingCurve.single_mode(1, 1, 2, 1e-3)
    v = tclab.epiperimetric_gap(z)
    assert v["pass"]
    assert v["ratio"] == pytest.approx(tclab.linearized_ratio(2, 1), abs=1e-4)


def test_curve_json_round_trip():
    spec = {"Q": 1, "n": 1, "rho": 0.1 + 0.2, "orientation": 1,
            "fourier": {"alpha": [[0.0], [0.0], [0.012345678901234567]], "beta": [[0.0], [1e-300]]}}
    z = tclab.WindingCurve.from_json(json.dumps(spec))
    assert json.loads(z.to_json()) == spec


def test_bad_curve_raises():
    with pytest.raises(tclab.TclabError, match="ParseError"):
        tclab.WindingCurve.from_json('{"Q": 1}')


def test_run_is_reproducible(tmp_path):
    config = {"seed": 5, "scenarios": [
        {"name": "epi", "kind": "epi", "Q": [1, 2], "mode_multiples": [2, 3], "amplitudes": [1e-2]},
        {"name": "split", "kind": "split", "components": [{"Q": 1}, {"Q": 1, "modes": [2]}]},
    ]}
    code_a, rows = tclab.run(config, tmp_path / "a")
    code_b, _ = tclab.run(config, tmp_path / "b", jobs=2)
    assert code_a == code_b == 0
    assert [r["pass"] for r in rows] == [4, 2]
    for name in ("epi.csv", "split.json", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_empty_config(tmp_path):
    assert tclab.run({"scenarios": []}, tmp_path) == (0, [])
