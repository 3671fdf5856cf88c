import json

import pytest

from uavplan.mission import default_spec
from uavplan.scenario import ScenarioError, default_document, load_scenario, scenario_from_dict


def test_empty_document_is_reference_scenario():
    sc = scenario_from_dict({})
    ref = default_spec()
    assert sc.spec.D == ref.D and sc.spec.start == ref.start
    assert sc.spec.node_positions.tolist() == ref.node_positions.tolist()
    assert sc.evo.population_size == 20 and sc.evo.generations == 2000 and sc.evo.amplification == 0.1


def test_default_document_round_trip():
    sc = scenario_from_dict(default_document())
    assert sc.spec == scenario_from_dict({}).spec


def test_partial_override():
    sc = scenario_from_dict({"evo": {"generations": 50}, "nodes": [{"x": 100, "y": 100, "Q_th": 1e6}]})
    assert sc.evo.generations == 50 and sc.evo.population_size == 20
    assert sc.spec.K == 1 and sc.spec.Q_th.tolist() == [1e6]


@pytest.mark.parametrize("doc,where", [
    ({"evo": {"generation": 5}}, "/evo"),
    ({"terrain": {"bumps": [{"A": 1, "mu_x": 0, "mu_y": 0, "sigma_x": -1, "sigma_y": 1}]}}, "/terrain/bumps/0/sigma_x"),
    ({"mission": {"start": [0, 0]}}, "/mission/start"),
    ({"nodes": [{"x": 900, "y": 0}]}, "/nodes/0"),
    ({"mission": {"T_min": 600}}, "T_min"),
])
def test_invalid_documents_name_the_field(doc, where):
    with pytest.raises(ScenarioError, match=where):
        scenario_from_dict(doc)


def test_json_syntax_error_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "evo": {,}\n}')
    with pytest.raises(ScenarioError, match="line 2"):
        load_scenario(p)


def test_load_from_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"mission": {"samples": 50, "baseline_order": [2, 0, 1]}}))
    sc = load_scenario(p)
    assert sc.spec.n == 50 and sc.baseline_order == (2, 0, 1)
