import json

import pytest

from germext.errors import GermFormatError
from germext.generate import gen
from germext.germio import dumps_germ, load_germ, loads_germ

from oracles import f0


def test_round_trip(tmp_path):
    G = gen(11, 7, 3, 3, 5)
    path = tmp_path / "g.json"
    path.write_text(dumps_germ(G), encoding="utf-8")
    assert load_germ(path) == G
    assert loads_germ(dumps_germ(f0())) == f0()


def test_fractional_values():
    doc = {"n": 2, "points": [{"id": "M", "index": 2, "label": "+", "value": "7/3"},
                              {"id": "m", "index": 0, "label": "-", "value": "-1/2"}]}
    G = loads_germ(json.dumps(doc))
    assert str(G.point("M").value) == "7/3"
    assert '"7/3"' in dumps_germ(G)


def test_syntax_error_position():
    with pytest.raises(GermFormatError) as exc:
        loads_germ('{"n": 2,\n  "points": [}')
    assert exc.value.line == 2 and exc.value.column is not None


def test_duplicate_boundary_rejected():
    text = dumps_germ(f0())
    doc = json.loads(text)
    doc["boundary"].append(dict(doc["boundary"][0]))
    with pytest.raises(GermFormatError, match="duplicate"):
        loads_germ(json.dumps(doc, indent=1))


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d["points"][1].update(label="x"), "label"),
    (lambda d: d["points"][1].update(value="1/0"), "value"),
    (lambda d: d["points"][1].pop("index"), "index"),
    (lambda d: d.pop("n"), "n"),
    (lambda d: d["boundary"][0].update(coeff=1.5), "coeff"),
])
def test_semantic_errors(mutate, needle):
    doc = json.loads(dumps_germ(f0()))
    mutate(doc)
    with pytest.raises(GermFormatError, match=needle):
        loads_germ(json.dumps(doc, indent=2))


def test_semantic_error_reports_line():
    doc = json.loads(dumps_germ(f0()))
    doc["points"][2]["label"] = "?"
    text = json.dumps(doc, indent=2)
    with pytest.raises(GermFormatError) as exc:
        loads_germ(text)
    pid = doc["points"][2]["id"]
    assert text.splitlines()[exc.value.line - 1].strip().startswith(f'"id": "{pid}"')
