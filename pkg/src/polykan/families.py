"""Registry of the 18 polynomial basis families and their parameters.

A family is identified by a kebab-case name plus a small record of numeric
parameters.  Sequence-valued parameters (Bannai-Ito rho/tau, Boas-Buck
a_seq/b_seq) are either a single float, meaning a constant sequence, or an
explicit tuple of floats indexed by degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any


class UnknownFamilyError(ValueError):
    """Family name is not one of the 18 registered names."""


class InvalidParameterError(ValueError):
    """A family parameter violates its documented range."""


class UnsupportedDegreeError(ValueError):
    """An explicit sequence parameter is shorter than the requested degree."""


class DivisionDegenerateError(ValueError):
    """A recurrence denominator evaluated to zero."""


#: Recurrence order of each generalized-Fibonacci family.
KBONACCI_ORDER = {
    "tribonacci": 3,
    "tetranacci": 4,
    "pentanacci": 5,
    "hexanacci": 6,
    "heptanacci": 7,
    "octanacci": 8,
}

FAMILY_NAMES = (
    "al-salam-carlitz",
    "askey-wilson",
    "bannai-ito",
    "boas-buck",
    "boubaker",
    "charlier",
    "fermat",
    "gottlieb",
    "heptanacci",
    "hexanacci",
    "meixner-pollaczek",
    "narayana",
    "octanacci",
    "pade",
    "pentanacci",
    "tetranacci",
    "tribonacci",
    "vieta-pell",
)

# Parameter kinds.
_REAL = "real"
_SEQ = "seq"
_OPT_INT = "opt_int"
_BOOL = "bool"

# name -> {param: (kind, default)}.  Defaults follow the figure captions
# where the source gives them (a=1, q=0.5 / a..q=0.5 / a=2 / lambda=1,
# phi=pi/4) and the documented presets elsewhere.
_SCHEMAS: dict[str, dict[str, tuple[str, Any]]] = {
    "al-salam-carlitz": {"a": (_REAL, 1.0), "q": (_REAL, 0.5)},
    "askey-wilson": {
        "a": (_REAL, 0.5),
        "b": (_REAL, 0.5),
        "c": (_REAL, 0.5),
        "d": (_REAL, 0.5),
        "q": (_REAL, 0.5),
    },
    "bannai-ito": {"rho": (_SEQ, 0.5), "tau": (_SEQ, 0.25)},
    "boas-buck": {"a_seq": (_SEQ, 1.0), "b_seq": (_SEQ, 0.0)},
    "boubaker": {},
    "charlier": {"a": (_REAL, 2.0)},
    "fermat": {},
    "gottlieb": {},
    "heptanacci": {},
    "hexanacci": {},
    "meixner-pollaczek": {"lam": (_REAL, 1.0), "phi": (_REAL, math.pi / 4)},
    "narayana": {},
    "octanacci": {"literal": (_BOOL, False)},
    "pade": {"m": (_OPT_INT, None), "n": (_OPT_INT, None)},
    "pentanacci": {},
    "tetranacci": {},
    "tribonacci": {},
    "vieta-pell": {},
}

SeqParam = float | tuple[float, ...]


@dataclass(frozen=True)
class FamilySpec:
    """One of the 18 families plus its validated parameter record.

    ``params`` is owned by the spec; treat it as read-only.
    """

    family: str
    params: dict[str, Any]


def _coerce(name: str, key: str, kind: str, value: Any) -> Any:
    if kind == _REAL:
        try:
            out = float(value)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"{name}: parameter {key!r} must be a real number")
        if not math.isfinite(out):
            raise InvalidParameterError(f"{name}: parameter {key!r} must be finite")
        return out
    if kind == _SEQ:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            out = float(value)
            if not math.isfinite(out):
                raise InvalidParameterError(f"{name}: parameter {key!r} must be finite")
            return out
        try:
            seq = tuple(float(v) for v in value)
        except (TypeError, ValueError):
            raise InvalidParameterError(
                f"{name}: parameter {key!r} must be a number or a sequence of numbers"
            )
        if not seq:
            raise InvalidParameterError(f"{name}: parameter {key!r} must be nonempty")
        if not all(math.isfinite(v) for v in seq):
            raise InvalidParameterError(f"{name}: parameter {key!r} entries must be finite")
        return seq if len(seq) > 1 else seq[0]
    if kind == _OPT_INT:
        if value is None:
            return None
        if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
            raise InvalidParameterError(f"{name}: parameter {key!r} must be an integer")
        try:
            return int(value)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"{name}: parameter {key!r} must be an integer")
    if kind == _BOOL:
        if isinstance(value, bool):
            return value
        if value in (0, 1):
            return bool(value)
        raise InvalidParameterError(f"{name}: parameter {key!r} must be a boolean")
    raise AssertionError(kind)


def _validate(name: str, params: dict[str, Any]) -> None:
    if name in ("al-salam-carlitz", "askey-wilson"):
        if abs(params["q"]) >= 1.0:
            raise InvalidParameterError(f"{name}: requires |q| < 1, got q={params['q']}")
    elif name == "charlier":
        if params["a"] <= 0.0:
            raise InvalidParameterError(f"charlier: requires a > 0, got a={params['a']}")
    elif name == "meixner-pollaczek":
        if params["lam"] <= 0.0:
            raise InvalidParameterError(
                f"meixner-pollaczek: requires lambda > 0, got {params['lam']}"
            )
        if not 0.0 < params["phi"] < math.pi:
            raise InvalidParameterError(
                f"meixner-pollaczek: requires 0 < phi < pi, got phi={params['phi']}"
            )
    elif name == "pade":
        for key in ("m", "n"):
            if params[key] is not None and params[key] < 0:
                raise InvalidParameterError(f"pade: requires {key} >= 0, got {params[key]}")


def family_spec(name: str, /, **overrides: Any) -> FamilySpec:
    """Build a validated FamilySpec, filling unspecified parameters with defaults."""
    return family_spec_from_params(name, overrides)


def family_spec_from_params(name: str, overrides: dict[str, Any]) -> FamilySpec:
    """Like :func:`family_spec` but with parameters supplied as a dict (CLI path)."""
    if name not in _SCHEMAS:
        raise UnknownFamilyError(
            f"unknown family {name!r}; valid names: {', '.join(FAMILY_NAMES)}"
        )
    schema = _SCHEMAS[name]
    unknown = set(overrides) - set(schema)
    if unknown:
        allowed = ", ".join(sorted(schema)) or "(none)"
        raise InvalidParameterError(
            f"{name}: unknown parameter(s) {sorted(unknown)}; accepted: {allowed}"
        )
    params = {}
    for key, (kind, default) in schema.items():
        value = overrides.get(key, default)
        params[key] = value if value is default else _coerce(name, key, kind, value)
    _validate(name, params)
    return FamilySpec(family=name, params=params)


def seq_at(param: SeqParam, index: int, *, family: str, name: str) -> float:
    """Index a sequence parameter; a bare float means a constant sequence."""
    if isinstance(param, float):
        return param
    if index >= len(param):
        raise UnsupportedDegreeError(
            f"{family}: sequence parameter {name!r} has {len(param)} entries "
            f"but index {index} is required; pass a longer sequence or a constant"
        )
    return param[index]


def parse_param_value(text: str) -> Any:
    """Parse a CLI ``--param key=value`` value: bool, int, float, or float list."""
    low = text.strip().lower()
    if low in ("true", "false"):
        return low == "true"
    if "," in text:
        try:
            return tuple(float(part) for part in text.split(","))
        except ValueError:
            raise InvalidParameterError(f"cannot parse sequence value {text!r}")
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise InvalidParameterError(f"cannot parse parameter value {text!r}")
