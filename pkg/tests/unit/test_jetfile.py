import json

import pytest
from sympy import QQ_I
from weilforge.algebra.element import Monomial, gen
from weilforge.algebra.generators import Generator
from weilforge.core.errors import JetFileError
from weilforge.services import jetfile
from weilforge.services.jetfile import Coefficient, JetFile, PayloadKind


def monomial(*names: str) -> Monomial:
    return Monomial.of(*(Generator.parse(name) for name in names))


@pytest.mark.parametrize(
    ("names", "key"),
    [
        ((), "1 | 1 | 1"),
        (("z1", "z1", "zb1", "s1", "dz1"), "z1^2 zb1^1 | s1^1 | dz1"),
        (("sb2", "dz1", "thb1"), "1 | sb2^1 | dz1 thb1"),
    ],
)
def test_encode_monomial(names, key):
    assert jetfile.encode_monomial(monomial(*names)) == key


def test_decode_monomial_reorders_odd_factors_with_sign():
    sign, m = jetfile.decode_monomial("z1 | 1 | dzb1 dz1")
    assert sign == -1
    assert m == monomial("z1", "dz1", "dzb1")


@pytest.mark.parametrize(
    "key",
    [
        "z1 | s1",
        "s1 | 1 | 1",
        "1 | z1 | 1",
        "1 | 1 | s1",
        "1 | 1 | dz1^2",
        "1 | 1 | dz1 dz1",
        "q1 | 1 | 1",
        "z1^0 | 1 | 1",
    ],
)
def test_decode_monomial_rejects_bad_keys(key):
    with pytest.raises(JetFileError):
        jetfile.decode_monomial(key)


def test_encode_monomial_rejects_dressed_terms():
    with pytest.raises(ValueError):
        jetfile.encode_monomial(monomial("dz1").with_dressing(0))


def test_decode_element_reads_rationals_and_decimals():
    terms = [
        Coefficient(key="z1^1 | 1 | 1", re="2/3"),
        Coefficient(key="1 | s1^1 | dz1", re="0.5", im="-1"),
    ]
    x = jetfile.decode_element(terms)
    assert x == gen("z1").scale(2) / 3 + (gen("s1") * gen("dz1")) / 2 - (
        gen("s1") * gen("dz1")
    ).scale(QQ_I(0, 1))


def test_decode_element_rejects_bad_coefficients():
    with pytest.raises(JetFileError):
        jetfile.decode_element([Coefficient(key="z1^1 | 1 | 1", re="two")])


def test_metric_file_round_trip(fs_metric, tmp_path):
    path = tmp_path / "metric.json"
    jetfile.write_jet_file(jetfile.metric_file(fs_metric), path)
    doc = jetfile.read_jet_file(path)
    assert doc.kind is PayloadKind.METRIC
    assert jetfile.load_metric(doc).g == fs_metric.g


def test_solution_file_round_trip(fs_solution, tmp_path):
    path = tmp_path / "solution.json"
    jetfile.write_jet_file(jetfile.solution_file(fs_solution), path)
    loaded = jetfile.load_solution(jetfile.read_jet_file(path))
    assert loaded.order == fs_solution.order
    assert loaded.gamma.gamma == fs_solution.gamma.gamma
    for k, images in fs_solution.components.items():
        for g, image in images.items():
            assert loaded.image(k, g) == image


def test_polarization_file_round_trip(fs_polarization, fs_solution):
    doc = JetFile.model_validate_json(
        jetfile.dumps(jetfile.polarization_file(fs_polarization))
    )
    loaded = jetfile.load_polarization(doc, fs_solution)
    for k, part in fs_polarization.omega.items():
        assert loaded.omega[k] == part


def test_dumps_is_deterministic(fs_metric):
    doc = jetfile.metric_file(fs_metric)
    text = jetfile.dumps(doc)
    assert text == jetfile.dumps(doc)
    assert text.endswith("\n")
    assert json.loads(text)["schema_version"] == jetfile.SCHEMA_VERSION


def test_read_jet_file_errors(tmp_path):
    with pytest.raises(JetFileError):
        jetfile.read_jet_file(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(JetFileError):
        jetfile.read_jet_file(broken)
    future = tmp_path / "future.json"
    future.write_text(
        json.dumps({"schema_version": 99, "kind": "metric", "dim": 1, "order": 0}),
        encoding="utf-8",
    )
    with pytest.raises(JetFileError):
        jetfile.read_jet_file(future)


def test_loaders_check_the_payload_kind(fs_metric):
    doc = jetfile.metric_file(fs_metric)
    with pytest.raises(JetFileError):
        jetfile.load_solution(doc)


def test_load_metric_rejects_bad_indices():
    doc = JetFile(
        kind=PayloadKind.METRIC,
        dim=1,
        order=0,
        entries=[{"name": "g", "indices": [1, 2], "terms": [{"key": "1 | 1 | 1", "re": "1"}]}],
    )
    with pytest.raises(JetFileError):
        jetfile.load_metric(doc)
