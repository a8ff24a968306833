import copy
import json
from fractions import Fraction

import pytest

from cmfg.config import config_digest, load_config, load_document
from cmfg.measures import FiniteDist
from cmfg.numeric import InputError
from cmfg.toyexample import ToyParams, toy_document


@pytest.fixture
def doc():
    return json.loads(json.dumps(toy_document(ToyParams())))


def _location(doc):
    with pytest.raises(InputError) as info:
        load_document(doc)
    return info.value.location


def test_missing_and_unknown_keys_report_paths(doc):
    d = copy.deepcopy(doc)
    del d["game"]["horizon"]
    assert _location(d) == "$.game"
    d = copy.deepcopy(doc)
    d["suggestion"]["atoms"][0]["strategy"] = "nope"
    assert _location(d) == "$.suggestion.atoms[0].strategy"
    d = copy.deepcopy(doc)
    d["game"]["initial"] = ["1/2", "x"]
    assert _location(d) == "$.game.initial[1]"
    d = copy.deepcopy(doc)
    d["game"]["kernel"]["type"] = "sparse"
    assert _location(d) == "$.game.kernel.type"


def test_digest_ignores_key_order(doc):
    shuffled = json.loads(json.dumps(doc, sort_keys=False))
    shuffled = dict(reversed(list(shuffled.items())))
    assert config_digest(shuffled) == config_digest(doc)


def test_load_config_file_errors(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    with pytest.raises(InputError):
        load_config(p)
    with pytest.raises(InputError):
        load_config(tmp_path / "absent.json")


def test_atom_kernel_game_from_config(doc):
    d = copy.deepcopy(doc)
    table = d["game"]["kernel"]["table"]
    d["game"]["kernel"] = {"type": "atoms", "atoms": [{"measure": ["1/2", "1/2"], "table": table}]}
    cfg = load_document(d)
    assert list(cfg.spec.kernel(0, 0, cfg.spec.initial, 1)) == [Fraction(3, 4), Fraction(1, 4)]
    with pytest.raises(InputError):
        cfg.spec.kernel(0, 0, FiniteDist.of(["1", "0"]), 1)
