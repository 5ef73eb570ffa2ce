import math

import pytest

from polykan.families import (
    FAMILY_NAMES,
    KBONACCI_ORDER,
    InvalidParameterError,
    UnknownFamilyError,
    UnsupportedDegreeError,
    family_spec,
    family_spec_from_params,
    parse_param_value,
    seq_at,
)


def test_registry_has_eighteen_families():
    assert len(FAMILY_NAMES) == 18
    assert len(set(FAMILY_NAMES)) == 18
    assert set(KBONACCI_ORDER) <= set(FAMILY_NAMES)


def test_defaults_follow_documented_presets():
    asc = family_spec("al-salam-carlitz")
    assert asc.params == {"a": 1.0, "q": 0.5}
    aw = family_spec("askey-wilson")
    assert all(aw.params[k] == 0.5 for k in "abcdq")
    assert family_spec("charlier").params == {"a": 2.0}
    mp = family_spec("meixner-pollaczek")
    assert mp.params["lam"] == 1.0
    assert mp.params["phi"] == pytest.approx(math.pi / 4)
    bi = family_spec("bannai-ito")
    assert bi.params == {"rho": 0.5, "tau": 0.25}
    assert family_spec("boas-buck").params == {"a_seq": 1.0, "b_seq": 0.0}
    assert family_spec("pade").params == {"m": None, "n": None}
    assert family_spec("octanacci").params == {"literal": False}


def test_unknown_family_lists_names():
    with pytest.raises(UnknownFamilyError) as err:
        family_spec("chebyshev")
    for name in FAMILY_NAMES:
        assert name in str(err.value)


@pytest.mark.parametrize(
    "name,params",
    [
        ("al-salam-carlitz", {"q": 1.0}),
        ("askey-wilson", {"q": -1.5}),
        ("charlier", {"a": 0.0}),
        ("charlier", {"a": -2.0}),
        ("meixner-pollaczek", {"lam": 0.0}),
        ("meixner-pollaczek", {"phi": 0.0}),
        ("meixner-pollaczek", {"phi": math.pi}),
        ("pade", {"m": -1}),
        ("boubaker", {"bogus": 1.0}),
        ("bannai-ito", {"rho": ()}),
    ],
)
def test_invalid_parameters_rejected(name, params):
    with pytest.raises(InvalidParameterError):
        family_spec_from_params(name, params)


def test_sequence_params_accept_constant_or_tuple():
    spec = family_spec("bannai-ito", rho=(0.5, 0.4, 0.3), tau=0.25)
    assert spec.params["rho"] == (0.5, 0.4, 0.3)
    assert spec.params["tau"] == 0.25
    # single-element sequences collapse to a constant
    assert family_spec("bannai-ito", rho=[0.7]).params["rho"] == 0.7


def test_seq_at_constant_and_explicit():
    assert seq_at(0.5, 100, family="bannai-ito", name="rho") == 0.5
    assert seq_at((1.0, 2.0), 1, family="bannai-ito", name="rho") == 2.0
    with pytest.raises(UnsupportedDegreeError):
        seq_at((1.0, 2.0), 2, family="bannai-ito", name="rho")


def test_parse_param_value():
    assert parse_param_value("0.5") == 0.5
    assert parse_param_value("2") == 2
    assert parse_param_value("true") is True
    assert parse_param_value("false") is False
    assert parse_param_value("0.5,0.4,0.3") == (0.5, 0.4, 0.3)
    with pytest.raises(InvalidParameterError):
        parse_param_value("zebra")
