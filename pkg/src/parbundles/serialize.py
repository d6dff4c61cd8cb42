"""JSON serialization for the published document schemas.

All rationals travel as strings "p/q" (or "p" when the denominator is 1),
never as floats; parsing rejects anything else.  Serialization always emits
the canonical form (lowest terms, sorted splitting types, fixed key order),
so parse followed by serialize is the identity on canonical documents and
canonicalizes everything else.

Schemas:

* parabolic bundle::

    { "splitting": [int, ...], "N": int,
      "flags": [ { "point": "0" | "inf" | "p/q",
                   "steps": [ { "basis": [["p/q", ...], ...],
                                "weight": "p/q" } ] } ] }

* equivariant bundle::

    { "N": int, "lines": [ { "e": int, "c": int } ] }

* test bundle (construct output): request, summand lines and provenance.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import SchemaError
from .exactlin import RatMatrix, rat_str
from .parabolic import (
    FlagStep,
    ParLineData,
    ParabolicBundle,
    QuasiParabolicFlag,
)
from .projline import INFINITY, PointOnLine, SplitBundle, split
from .equivariant import EquivBundle, EquivLine
from .raynaud import (
    Mode,
    RaynaudBundle,
    SinglePointProvenance,
    TwoPointProvenance,
)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def rational_to_str(x: Fraction) -> str:
    return rat_str(x)


def rational_from_str(text, path: str = "value") -> Fraction:
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise SchemaError(path, f"expected an exact rational string 'p/q', got {text!r}")
    return Fraction(text)


def point_to_str(point: PointOnLine) -> str:
    return str(point)


def point_from_str(text, path: str = "point") -> PointOnLine:
    if text == "inf":
        return INFINITY
    return PointOnLine(rational_from_str(text, path))


def _expect(cond: bool, path: str, message: str):
    if not cond:
        raise SchemaError(path, message)


# ---------------------------------------------------------------------------
# Parabolic bundles.


def parabolic_to_obj(bundle: ParabolicBundle, n: int) -> dict:
    return {
        "splitting": list(bundle.underlying.degrees),
        "N": n,
        "flags": [
            {
                "point": point_to_str(f.point),
                "steps": [
                    {
                        "basis": [[rat_str(x) for x in row] for row in s.basis.entries],
                        "weight": rat_str(s.weight),
                    }
                    for s in f.steps
                ],
            }
            for f in bundle.flags
        ],
    }


def parabolic_from_obj(obj) -> tuple[ParabolicBundle, int]:
    _expect(isinstance(obj, dict), "$", "expected an object")
    _expect("splitting" in obj, "splitting", "missing")
    _expect("N" in obj, "N", "missing")
    degrees = obj["splitting"]
    _expect(isinstance(degrees, list) and degrees, "splitting", "expected a nonempty array")
    _expect(all(isinstance(d, int) for d in degrees), "splitting", "entries must be integers")
    n = obj["N"]
    _expect(isinstance(n, int) and n >= 2, "N", "expected an integer >= 2")
    underlying = split(degrees)
    rank = underlying.rank
    flags = []
    for fi, fobj in enumerate(obj.get("flags", [])):
        fpath = f"flags[{fi}]"
        _expect(isinstance(fobj, dict), fpath, "expected an object")
        point = point_from_str(fobj.get("point"), f"{fpath}.point")
        steps_obj = fobj.get("steps")
        _expect(isinstance(steps_obj, list) and steps_obj, f"{fpath}.steps",
                "expected a nonempty array")
        steps = []
        for si, sobj in enumerate(steps_obj):
            spath = f"{fpath}.steps[{si}]"
            _expect(isinstance(sobj, dict), spath, "expected an object")
            basis_obj = sobj.get("basis")
            _expect(isinstance(basis_obj, list) and basis_obj, f"{spath}.basis",
                    "expected a nonempty array of rows")
            rows = []
            for ri, row in enumerate(basis_obj):
                _expect(isinstance(row, list) and len(row) == rank, f"{spath}.basis[{ri}]",
                        f"expected a row of {rank} rational strings")
                rows.append(tuple(
                    rational_from_str(v, f"{spath}.basis[{ri}][{ci}]")
                    for ci, v in enumerate(row)
                ))
            weight = rational_from_str(sobj.get("weight"), f"{spath}.weight")
            _expect(0 <= weight < 1, f"{spath}.weight", "weight must lie in [0, 1)")
            steps.append(FlagStep(RatMatrix(len(rows), rank, tuple(rows)), weight))
        try:
            flags.append(QuasiParabolicFlag(point, tuple(steps)))
        except Exception as exc:
            raise SchemaError(fpath, str(exc)) from exc
    try:
        bundle = ParabolicBundle(underlying, tuple(flags))
    except Exception as exc:
        raise SchemaError("flags", str(exc)) from exc
    return bundle, n


# ---------------------------------------------------------------------------
# Equivariant bundles.


def equivariant_to_obj(bundle: EquivBundle) -> dict:
    return {"N": bundle.n, "lines": [{"e": l.e, "c": l.c} for l in bundle.lines]}


def equivariant_from_obj(obj) -> EquivBundle:
    _expect(isinstance(obj, dict), "$", "expected an object")
    n = obj.get("N")
    _expect(isinstance(n, int) and n >= 2, "N", "expected an integer >= 2")
    lines_obj = obj.get("lines")
    _expect(isinstance(lines_obj, list) and lines_obj, "lines", "expected a nonempty array")
    lines = []
    for i, lobj in enumerate(lines_obj):
        path = f"lines[{i}]"
        _expect(isinstance(lobj, dict), path, "expected an object")
        e, c = lobj.get("e"), lobj.get("c")
        _expect(isinstance(e, int), f"{path}.e", "expected an integer")
        _expect(isinstance(c, int), f"{path}.c", "expected an integer")
        lines.append(EquivLine(e, c))
    return EquivBundle(n, tuple(lines))


# ---------------------------------------------------------------------------
# Parabolic line data and test bundles.


def line_data_to_obj(part: ParLineData) -> dict:
    return {
        "degree": part.degree,
        "weights": {point_to_str(p): rat_str(w) for p, w in part.weights},
    }


def raynaud_to_obj(bundle: RaynaudBundle) -> dict:
    req = bundle.request
    obj = {
        "request": {
            "r": req.r,
            "d": rat_str(req.d),
            "N": req.n,
            "mode": req.mode.value,
        },
        "rank": bundle.bundle.rank,
        "summands": [line_data_to_obj(p) for p in bundle.parts],
        "bundle": parabolic_to_obj(bundle.bundle, req.n),
        "weights_in_lattice": bundle.weights_in_lattice(),
    }
    prov = bundle.provenance
    if isinstance(prov, TwoPointProvenance):
        obj["provenance"] = {
            "mode": Mode.TWO_POINT.value,
            "m": prov.m,
            "cover_lines": [{"e": l.e, "c": l.c} for l in prov.cover_lines],
            "descended": [line_data_to_obj(p) for p in prov.descended],
            "regular": [line_data_to_obj(p) for p in prov.regular],
        }
    else:
        assert isinstance(prov, SinglePointProvenance)
        obj["provenance"] = {
            "mode": Mode.SINGLE_POINT.value,
            "d0": prov.d0,
            "alpha": rat_str(prov.alpha),
            "case": prov.case.value,
        }
    return obj


# ---------------------------------------------------------------------------
# Canonical JSON text.


def canonical_json(obj) -> str:
    """Fixed rendering used for all outputs, so identical documents are
    byte-identical files."""
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def parabolic_roundtrip(obj) -> dict:
    """Parse then re-serialize a parabolic bundle document (canonicalizes)."""
    bundle, n = parabolic_from_obj(obj)
    return parabolic_to_obj(bundle, n)


def equivariant_roundtrip(obj) -> dict:
    return equivariant_to_obj(equivariant_from_obj(obj))
