"""Line-delimited instance files.

The on-disk grammar (documented bit-exactly in docs/formats.md):

    dim <n>
    domain <k> <n>          followed by k rows of n floats (basis vectors)
    image <k> <n>           followed by k rows of n floats
    full_operator <n> <n>   followed by n rows
    equation_a <n> <m>      followed by n rows
    equation_b <n> <m>      followed by n rows
    tolerances <rank_rel> <psd_slack> <residual>
    seed <non-negative integer>

``dim`` is mandatory, everything else optional; ``domain``/``image`` and
``equation_a``/``equation_b`` come in pairs.  Blank lines and ``#`` comments
are skipped on input and never emitted.  Floats are written with 17
significant digits, which round-trips doubles exactly.  Unknown keys,
duplicate sections, non-finite values, and shape disagreements are
rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .numerics import ToleranceProfile

__all__ = ["InstanceFile", "parse_instance", "render_instance", "format_float"]

_MATRIX_KEYS = ("domain", "image", "full_operator", "equation_a", "equation_b")


def format_float(x: float) -> str:
    """Decimal text with 17 significant digits; exact double round-trip."""
    return "%.17g" % float(x)


@dataclass
class InstanceFile:
    """In-memory mirror of an instance file.

    Matrix fields are stored in file layout: ``domain`` and ``image`` hold
    one vector per row (k x n); use :meth:`domain_matrix` and
    :meth:`image_matrix` for the column-per-vector layout the library
    expects.
    """

    dim: int
    domain: np.ndarray | None = None
    image: np.ndarray | None = None
    full_operator: np.ndarray | None = None
    equation_a: np.ndarray | None = None
    equation_b: np.ndarray | None = None
    tolerances: ToleranceProfile | None = None
    seed: int | None = None

    def domain_matrix(self) -> np.ndarray | None:
        return None if self.domain is None else self.domain.T.copy()

    def image_matrix(self) -> np.ndarray | None:
        return None if self.image is None else self.image.T.copy()


def _parse_float(token: str, where: str) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise ParseError(f"{where}: cannot parse {token!r} as a number") from exc
    if not math.isfinite(value):
        raise ParseError(f"{where}: non-finite value {token!r} rejected")
    return value


def _parse_int(token: str, where: str, minimum: int = 0) -> int:
    try:
        value = int(token)
    except ValueError as exc:
        raise ParseError(f"{where}: cannot parse {token!r} as an integer") from exc
    if value < minimum:
        raise ParseError(f"{where}: value {value} below minimum {minimum}")
    return value


def parse_instance(text: str) -> InstanceFile:
    """Parse instance text; strict about keys, counts, and finiteness."""
    lines = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            lines.append(stripped)

    fields: dict = {}
    pos = 0
    while pos < len(lines):
        tokens = lines[pos].split()
        key = tokens[0]
        if key in fields:
            raise ParseError(f"duplicate section {key!r}")
        if key == "dim":
            if len(tokens) != 2:
                raise ParseError("dim line must be 'dim <n>'")
            fields["dim"] = _parse_int(tokens[1], "dim", minimum=1)
            pos += 1
        elif key in _MATRIX_KEYS:
            if len(tokens) != 3:
                raise ParseError(f"{key} header must be '{key} <rows> <cols>'")
            rows = _parse_int(tokens[1], key)
            cols = _parse_int(tokens[2], key)
            if pos + 1 + rows > len(lines):
                raise ParseError(f"{key}: expected {rows} data rows")
            data = np.zeros((rows, cols))
            for i in range(rows):
                entries = lines[pos + 1 + i].split()
                if len(entries) != cols:
                    raise ParseError(
                        f"{key} row {i}: expected {cols} entries, got {len(entries)}"
                    )
                data[i] = [_parse_float(t, f"{key} row {i}") for t in entries]
            fields[key] = data
            pos += 1 + rows
        elif key == "tolerances":
            if len(tokens) != 4:
                raise ParseError(
                    "tolerances line must be 'tolerances <rank_rel> <psd_slack> <residual>'"
                )
            vals = [_parse_float(t, "tolerances") for t in tokens[1:]]
            if any(v <= 0 for v in vals):
                raise ParseError("tolerances must be strictly positive")
            fields["tolerances"] = ToleranceProfile(*vals)
            pos += 1
        elif key == "seed":
            if len(tokens) != 2:
                raise ParseError("seed line must be 'seed <integer>'")
            fields["seed"] = _parse_int(tokens[1], "seed")
            pos += 1
        else:
            raise ParseError(f"unknown key {key!r}")

    if "dim" not in fields:
        raise ParseError("missing mandatory 'dim' section")
    n = fields["dim"]

    dom = fields.get("domain")
    img = fields.get("image")
    if (dom is None) != (img is None):
        raise ParseError("'domain' and 'image' must be given together")
    if dom is not None:
        if dom.shape != img.shape:
            raise ParseError("'domain' and 'image' shapes differ")
        if dom.shape[1] != n:
            raise ParseError(f"domain vectors have length {dom.shape[1]}, dim is {n}")

    full = fields.get("full_operator")
    if full is not None and full.shape != (n, n):
        raise ParseError(f"full_operator must be {n} x {n}, got {full.shape}")

    eq_a = fields.get("equation_a")
    eq_b = fields.get("equation_b")
    if (eq_a is None) != (eq_b is None):
        raise ParseError("'equation_a' and 'equation_b' must be given together")
    if eq_a is not None:
        if eq_a.shape != eq_b.shape:
            raise ParseError("'equation_a' and 'equation_b' shapes differ")
        if eq_a.shape[0] != n:
            raise ParseError(f"equation matrices must have {n} rows")

    return InstanceFile(
        dim=n,
        domain=dom,
        image=img,
        full_operator=full,
        equation_a=eq_a,
        equation_b=eq_b,
        tolerances=fields.get("tolerances"),
        seed=fields.get("seed"),
    )


def _emit_matrix(out: list, key: str, data: np.ndarray) -> None:
    out.append(f"{key} {data.shape[0]} {data.shape[1]}")
    for row in data:
        out.append(" ".join(format_float(x) for x in row))


def render_instance(inst: InstanceFile) -> str:
    """Serialize in the fixed section order; byte-deterministic."""
    out: list = [f"dim {inst.dim}"]
    if inst.domain is not None:
        _emit_matrix(out, "domain", inst.domain)
        _emit_matrix(out, "image", inst.image)
    if inst.full_operator is not None:
        _emit_matrix(out, "full_operator", inst.full_operator)
    if inst.equation_a is not None:
        _emit_matrix(out, "equation_a", inst.equation_a)
        _emit_matrix(out, "equation_b", inst.equation_b)
    if inst.tolerances is not None:
        t = inst.tolerances
        out.append(
            "tolerances "
            f"{format_float(t.rank_rel)} {format_float(t.psd_slack)} "
            f"{format_float(t.residual)}"
        )
    if inst.seed is not None:
        out.append(f"seed {inst.seed}")
    return "\n".join(out) + "\n"
