import json
from importlib import resources

import jsonschema
import pytest

from widemorita import corpus
from widemorita.bundle import Bundle, BundleParseError, BundleReferenceError, load, parse
from widemorita.cli import generate
from widemorita.exactla import QQ


def _schema(name):
    return json.loads(resources.files("widemorita").joinpath("schemas", name).read_text())


@pytest.fixture(scope="module")
def corpus_text():
    from widemorita.exactla import GF

    return generate("corpus", GF(101), 0, 2, 4).dumps()


def test_roundtrip_is_identity(corpus_text):
    b = parse(corpus_text)
    assert b.dumps() == corpus_text
    assert parse(b.to_dict()).dumps() == corpus_text


def test_roundtrip_preserves_objects(corpus_text):
    b = parse(corpus_text)
    again = parse(b.dumps())
    for section in ("algebras", "bimodules", "contexts", "cell_contexts", "corings", "cells"):
        for name in b.names(section):
            assert b.get(section, name) == again.get(section, name)


def test_bundle_schema(corpus_text):
    jsonschema.validate(json.loads(corpus_text), _schema("bundle.schema.json"))


def test_rational_bundle_roundtrip():
    b = Bundle(QQ)
    ctx = corpus.scale_context(corpus.matrix_morita(2, QQ), QQ.parse("-3/7"))
    b.add_context(ctx, "scaled")
    text = b.dumps()
    assert '"-3/7"' in text
    back = parse(text)
    assert back.get("contexts", "scaled") == ctx


def test_load_from_file(tmp_path, corpus_text):
    p = tmp_path / "b.json"
    p.write_text(corpus_text)
    assert load(p).dumps() == corpus_text


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(format="other"),
        lambda d: d.update(version=2),
        lambda d: d.update(field="R"),
        lambda d: d.update(extra={}),
        lambda d: d["algebras"]["M1"].update(unit=["1", "0"]),
        lambda d: d["algebras"]["M1"].update(unit=[1]),
        lambda d: d["algebras"]["M1"].update(unit=["1/0"]),
    ],
    ids=["format", "version", "field", "extra-key", "unit-length", "unit-not-string", "unit-zero-denominator"],
)
def test_malformed_bundles(corpus_text, mutate):
    d = json.loads(corpus_text)
    mutate(d)
    with pytest.raises(BundleParseError):
        parse(d)


def test_invalid_json():
    with pytest.raises(BundleParseError):
        parse("{not json")


def test_dangling_reference(corpus_text):
    d = json.loads(corpus_text)
    name = next(iter(d["contexts"]))
    d["contexts"][name]["f"] = "missing"
    with pytest.raises(BundleReferenceError):
        parse(d)


def test_get_unknown_name(corpus_text):
    with pytest.raises(BundleReferenceError):
        parse(corpus_text).get("contexts", "nope")
