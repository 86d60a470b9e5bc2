"""Golden-vector files: schema, loading, re-evaluation, checking.

A goldens file is a JSON array of records

    {"function": tag, "inputs": {name: decimal string, ...},
     "value_re": decimal string, "value_im": decimal string,
     "digits": int, "tol": decimal string}

Every numeric payload is a decimal string so a high-precision generator
can state values beyond binary-float resolution without loss; this side
parses them at its own working precision.  Recognized function tags are
the scalar kernels (``ln_gamma``, ``digamma``, ``beta``, ``kummer_m``,
``dm_da``, ``dm_db``) and the family-parameterized composites
``kk_direct_<family>``, ``dirichlet_direct_<family>``,
``kk_case_C_<family>`` and ``kk_case_D_<family>`` with family
``geometric`` (parameter ``w``) or ``expdecay`` (parameter ``c``), both
accepting an optional ``kappa0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .dirichlet import dirichlet_direct
from .errors import GoldenFormatError
from .kernels import beta, digamma, dm_da, dm_db, kummer_m_series, ln_gamma
from .master import kk_case_C, kk_case_D
from .series import CoeffFn, KKParams, expdecay_family, geometric_family, kk_direct

_REQUIRED = ("function", "inputs", "value_re", "value_im", "digits", "tol")


@dataclass(frozen=True)
class GoldenVector:
    """One reference value; string fields keep the file's exact text."""

    function: str
    inputs: Mapping[str, str]
    value_re: str
    value_im: str
    digits: int
    tol: str

    @property
    def reference(self) -> complex:
        return complex(float(self.value_re), float(self.value_im))

    @property
    def tolerance(self) -> float:
        return float(self.tol)


def _decimal(where: str, name: str, raw: object) -> float:
    if not isinstance(raw, str):
        raise GoldenFormatError(f"{where}: field {name!r} must be a decimal string")
    try:
        return float(raw)
    except ValueError as exc:
        raise GoldenFormatError(
            f"{where}: field {name!r} is not a decimal string: {raw!r}"
        ) from exc


def load_goldens(path: str) -> list[GoldenVector]:
    """Parse and structurally validate a goldens file.

    Raises GoldenFormatError with a location diagnostic on any schema
    violation; I/O errors propagate as OSError.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GoldenFormatError(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, list):
        raise GoldenFormatError("top level must be a JSON array of vectors")
    out: list[GoldenVector] = []
    for i, item in enumerate(data):
        where = f"vector {i}"
        if not isinstance(item, dict):
            raise GoldenFormatError(f"{where}: not a JSON object")
        for key in _REQUIRED:
            if key not in item:
                raise GoldenFormatError(f"{where}: missing field {key!r}")
        if not isinstance(item["function"], str) or not item["function"]:
            raise GoldenFormatError(f"{where}: 'function' must be a nonempty string")
        inputs = item["inputs"]
        if not isinstance(inputs, dict):
            raise GoldenFormatError(f"{where}: 'inputs' must be an object")
        for name, raw in inputs.items():
            _decimal(where, f"inputs.{name}", raw)
        for key in ("value_re", "value_im", "tol"):
            _decimal(where, key, item[key])
        digits = item["digits"]
        if not isinstance(digits, int) or isinstance(digits, bool) or digits < 1:
            raise GoldenFormatError(f"{where}: 'digits' must be a positive integer")
        out.append(
            GoldenVector(
                function=item["function"],
                inputs=dict(inputs),
                value_re=item["value_re"],
                value_im=item["value_im"],
                digits=digits,
                tol=item["tol"],
            )
        )
    return out


def _family(tag: str, ins: Mapping[str, float], where: str) -> CoeffFn:
    kappa0 = ins.get("kappa0", 0.0)
    if tag == "geometric":
        return geometric_family(ins["w"], kappa0=kappa0)
    if tag == "expdecay":
        return expdecay_family(ins["c"], kappa0=kappa0)
    raise GoldenFormatError(f"{where}: unknown coefficient family {tag!r}")


def evaluate_vector(vec: GoldenVector) -> complex:
    """Recompute the vector's quantity with this package's own routines.

    Unknown tags and missing inputs raise GoldenFormatError; numerical
    precondition violations propagate from the underlying routine.
    """
    name = vec.function
    where = f"function {name!r}"
    ins = {k: float(v) for k, v in vec.inputs.items()}

    def need(*keys: str) -> list[float]:
        try:
            return [ins[k] for k in keys]
        except KeyError as exc:
            raise GoldenFormatError(f"{where}: missing input {exc.args[0]!r}") from exc

    if name == "ln_gamma":
        return complex(ln_gamma(*need("x")), 0.0)
    if name == "digamma":
        return complex(digamma(*need("x")), 0.0)
    if name == "beta":
        return complex(beta(*need("a", "b")), 0.0)
    if name in ("kummer_m", "dm_da", "dm_db"):
        a, b, zr, zi = need("a", "b", "z_re", "z_im")
        fn = {"kummer_m": kummer_m_series, "dm_da": dm_da, "dm_db": dm_db}[name]
        return fn(a, b, complex(zr, zi)).value

    op, _, fam = name.rpartition("_")
    if op == "kk_direct":
        a, b, al, be, ze, zr, zi = need("a", "b", "alpha", "beta", "zeta", "z_re", "z_im")
        p = KKParams(a, b, al, be, ze)
        return kk_direct(p, _family(fam, ins, where), complex(zr, zi)).value
    if op == "dirichlet_direct":
        a, b, al, be, ze, zr, zi, t = need(
            "a", "b", "alpha", "beta", "zeta", "z_re", "z_im", "t"
        )
        p = KKParams(a, b, al, be, ze)
        return dirichlet_direct(p, _family(fam, ins, where), complex(zr, zi), t).value
    if op == "kk_case_C":
        a, b, be, zr, zi = need("a", "b", "beta", "z_re", "z_im")
        p = KKParams(a, b, 0.0, be, 0.0)
        return kk_case_C(p, _family(fam, ins, where), complex(zr, zi)).value
    if op == "kk_case_D":
        a, b, ze, zr, zi = need("a", "b", "zeta", "z_re", "z_im")
        p = KKParams(a, b, 0.0, 0.0, ze)
        return kk_case_D(p, _family(fam, ins, where), complex(zr, zi)).value
    raise GoldenFormatError(f"{where}: not a recognized golden-vector tag")


def check_vector(vec: GoldenVector) -> tuple[bool, complex, str]:
    """Evaluate and compare at the vector's declared tolerance.

    Returns (passed, recomputed value, one-line detail).  The comparison
    is |got - ref| <= tol * max(1, |ref|).
    """
    got = evaluate_vector(vec)
    ref = vec.reference
    tol = vec.tolerance
    gap = abs(got - ref)
    allowed = tol * max(1.0, abs(ref))
    detail = f"|got-ref| = {gap:.3e}, allowed {allowed:.3e}"
    return gap <= allowed, got, detail
