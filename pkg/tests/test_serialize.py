from fractions import Fraction

import pytest

from parbundles.equivariant import equiv_bundle
from parbundles.errors import SchemaError
from parbundles.parabolic import line_sum_build, par_line
from parbundles.projline import INFINITY, ORIGIN
from parbundles.raynaud import single_point_bundle, two_point_bundle
from parbundles.serialize import (
    canonical_json,
    equivariant_from_obj,
    equivariant_roundtrip,
    equivariant_to_obj,
    parabolic_from_obj,
    parabolic_roundtrip,
    parabolic_to_obj,
    point_from_str,
    rational_from_str,
    rational_to_str,
    raynaud_to_obj,
)

HALF = Fraction(1, 2)


def test_rational_strings():
    assert rational_to_str(Fraction(2, 4)) == "1/2"
    assert rational_from_str("2/4") == HALF
    assert rational_from_str("-3") == -3
    for bad in ("0.5", "1/0", "", "1e3", 0.5, None, "1/-2"):
        with pytest.raises(SchemaError):
            rational_from_str(bad)


def test_point_strings():
    assert point_from_str("inf") == INFINITY
    assert point_from_str("-1/2").coordinate == Fraction(-1, 2)
    with pytest.raises(SchemaError):
        point_from_str("infinity")


def test_parabolic_roundtrip_identity_on_canonical():
    bundle = line_sum_build([
        par_line(0, {ORIGIN: 0, INFINITY: HALF}),
        par_line(-1, {ORIGIN: HALF, INFINITY: HALF}),
    ])
    obj = parabolic_to_obj(bundle, 2)
    text = canonical_json(obj)
    again = canonical_json(parabolic_roundtrip(obj))
    assert text == again
    parsed, n = parabolic_from_obj(obj)
    assert parsed == bundle and n == 2


def test_parabolic_parse_canonicalizes_rationals():
    obj = {
        "splitting": [0],
        "N": 2,
        "flags": [{"point": "0", "steps": [{"basis": [["2/4"]], "weight": "1/2"}]}],
    }
    out = parabolic_roundtrip(obj)
    assert out["flags"][0]["steps"][0]["basis"] == [["1/2"]]


def test_parabolic_schema_errors_name_paths():
    with pytest.raises(SchemaError) as err:
        parabolic_from_obj({"splitting": [0], "N": 2, "flags": [{"point": "zero"}]})
    assert "flags[0].point" in str(err.value)
    with pytest.raises(SchemaError) as err:
        parabolic_from_obj({
            "splitting": [0, 0], "N": 2,
            "flags": [{"point": "0",
                       "steps": [{"basis": [["1"]], "weight": "0"}]}],
        })
    assert "basis" in str(err.value)
    with pytest.raises(SchemaError):
        parabolic_from_obj({"splitting": [], "N": 2, "flags": []})
    with pytest.raises(SchemaError):
        parabolic_from_obj({"splitting": [0], "N": 1, "flags": []})


def test_parabolic_rejects_malformed_flags():
    # weights out of order are a structural violation, reported with a path
    obj = {
        "splitting": [0, 0],
        "N": 2,
        "flags": [{
            "point": "0",
            "steps": [
                {"basis": [["1", "0"], ["0", "1"]], "weight": "1/2"},
                {"basis": [["0", "1"]], "weight": "0"},
            ],
        }],
    }
    with pytest.raises(SchemaError):
        parabolic_from_obj(obj)


def test_equivariant_roundtrip():
    b = equiv_bundle(3, [(2, 1), (0, 5)])  # character reduced mod 3
    obj = equivariant_to_obj(b)
    assert obj == {"N": 3, "lines": [{"e": 2, "c": 1}, {"e": 0, "c": 2}]}
    assert equivariant_from_obj(obj) == b
    assert canonical_json(equivariant_roundtrip(obj)) == canonical_json(obj)


def test_raynaud_provenance_two_point():
    obj = raynaud_to_obj(two_point_bundle(2, 1, 2))
    assert obj["request"] == {"r": 2, "d": "1", "N": 2, "mode": "two-point"}
    assert obj["rank"] == 4
    assert obj["provenance"]["m"] == 2
    assert obj["provenance"]["cover_lines"] == [{"e": 2, "c": 0}, {"e": 2, "c": 1}]
    assert obj["weights_in_lattice"] is True


def test_raynaud_provenance_single_point():
    obj = raynaud_to_obj(single_point_bundle(2, Fraction(1, 2), 2))
    assert obj["provenance"] == {
        "mode": "single-point", "d0": 0, "alpha": "1/4", "case": "weighted",
    }
    assert obj["summands"] == [{"degree": 0, "weights": {"0": "3/4"}}]
    assert obj["weights_in_lattice"] is False
