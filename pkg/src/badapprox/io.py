"""Decimal enclosures and the on-disk formats for fields, forms, vectors and reports.

Every real enclosure is written as ``mid±rad`` where the decimal interval
[mid - rad, mid + rad] contains the binary enclosure.  Lower and upper
endpoints in CSV files are rounded down and up respectively.
"""

from __future__ import annotations

import csv
import hashlib
import json
from decimal import ROUND_CEILING, ROUND_FLOOR, ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import tomli

from .errors import SpecFileError
from .interval import ComplexInterval, RealInterval

PM = "±"


# --------------------------------------------------------------------------
# decimal enclosures
# --------------------------------------------------------------------------


def _to_decimal(x: Fraction, digits: int, rounding) -> Decimal:
    ctx = Context(prec=digits, rounding=rounding)
    return ctx.divide(Decimal(x.numerator), Decimal(x.denominator))


def dec_floor(x: Fraction, digits: int = 20) -> str:
    return _fmt(_to_decimal(Fraction(x), digits, ROUND_FLOOR))


def dec_ceil(x: Fraction, digits: int = 20) -> str:
    return _fmt(_to_decimal(Fraction(x), digits, ROUND_CEILING))


def _fmt(d: Decimal) -> str:
    if d == 0:
        return "0"
    # normalize() rounds to the context precision, so give it every digit
    return format(d.normalize(Context(prec=len(d.as_tuple().digits))), "E")


def format_interval(x: RealInterval, digits: int = 20) -> str:
    lo, hi = x.lower, x.upper
    if lo == hi and Fraction(_to_decimal(lo, digits, ROUND_HALF_EVEN)) == lo:
        return f"{_fmt(_to_decimal(lo, digits, ROUND_HALF_EVEN))}{PM}0"
    mid = _to_decimal((lo + hi) / 2, digits, ROUND_HALF_EVEN)
    m = Fraction(mid)
    rad = _to_decimal(max(hi - m, m - lo), 2, ROUND_CEILING)
    return f"{_fmt(mid)}{PM}{_fmt(rad)}"


def format_scalar(x, digits: int = 20) -> str:
    if isinstance(x, ComplexInterval):
        return f"({format_interval(x.re, digits)}) + ({format_interval(x.im, digits)})i"
    return format_interval(x, digits)


def scalar_to_json(x, digits: int = 20):
    if isinstance(x, ComplexInterval):
        return [format_interval(x.re, digits), format_interval(x.im, digits)]
    return format_interval(x, digits)


def parse_enclosure(s: str) -> tuple[Fraction, Fraction]:
    """'mid±rad' (or a bare decimal) to exact rational endpoints."""
    s = s.strip().replace("+-", PM)
    if PM in s:
        m, r = s.split(PM)
        m, r = Fraction(Decimal(m)), Fraction(Decimal(r))
    else:
        m, r = Fraction(Decimal(s)), Fraction(0)
    if r < 0:
        raise SpecFileError(f"negative radius in {s!r}")
    return m - r, m + r


def interval_from_text(s: str, prec: int) -> RealInterval:
    lo, hi = parse_enclosure(s)
    a, b = RealInterval.exact(lo, prec), RealInterval.exact(hi, prec)
    return a.hull(b)


def scalar_from_json(v, prec: int):
    if isinstance(v, list):
        return ComplexInterval(interval_from_text(v[0], prec), interval_from_text(v[1], prec))
    return interval_from_text(v, prec)


# --------------------------------------------------------------------------
# structured files
# --------------------------------------------------------------------------


def load_mapping(path) -> dict:
    """Read a TOML or JSON document (chosen by extension, JSON otherwise)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".toml":
            return tomli.loads(text)
        return json.loads(text)
    except (tomli.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"cannot parse {path}: {exc}") from exc


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path, obj: Any) -> None:
    Path(path).write_text(dump_json(obj))


def _coords(v, where: str) -> list[Fraction]:
    if isinstance(v, (int, str)):
        v = [v]
    try:
        return [Fraction(str(c)) for c in v]
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"bad coordinates for {where}: {v!r}") from exc


def field_to_dict(F) -> dict:
    out = {"poly": [int(c) for c in F.poly.coeffs], "var": F.var}
    if not F.is_power_basis:
        out["integral_basis"] = [[str(c) for c in row] for row in F.basis]
    return out


def field_from_dict(d: dict):
    from .exactnum import NumberField

    if "poly" not in d:
        raise SpecFileError("field file needs a 'poly' entry (ascending integer coefficients)")
    basis = d.get("integral_basis")
    if basis is not None:
        basis = [_coords(row, "integral_basis") for row in basis]
    return NumberField([int(c) for c in d["poly"]], basis, var=d.get("var", "a"))


def read_field(path):
    return field_from_dict(load_mapping(path))


def form_to_dict(form) -> dict:
    return {"kind": form.kind, "A": form.A.to_strings(), "B": form.B.to_strings(), "C": form.C.to_strings()}


def form_from_dict(d: dict, F, cm=None):
    from .exactnum import cm_structure
    from .forms import HermForm, QuadForm

    kind = d.get("kind")
    if kind not in ("quad", "herm"):
        raise SpecFileError("form kind must be 'quad' or 'herm'")
    try:
        A, B, C = (F.elem(_coords(d[k], k)) for k in ("A", "B", "C"))
    except KeyError as exc:
        raise SpecFileError(f"form file is missing {exc}") from exc
    if kind == "quad":
        return QuadForm(A, B, C)
    return HermForm(A, B, C, cm if cm is not None else cm_structure(F))


def read_form(path, F, cm=None):
    return form_from_dict(load_mapping(path), F, cm)


def vector_to_dict(z, digits: int = 30) -> dict:
    prov = dict(z.provenance)
    # enclosures read verbatim from a file are written back verbatim
    comps = prov.pop("source_components", None)
    if comps is None:
        comps = [scalar_to_json(c, digits) for c in z.components]
    return {
        "field": field_to_dict(z.field),
        "provenance": prov,
        "precision_bits": z.precision,
        "components": comps,
    }


def vector_from_dict(d: dict, F=None):
    """Rebuild a vector from its provenance when possible, else from its enclosures."""
    from .vectors import TargetVector

    F = F if F is not None else field_from_dict(d["field"])
    prec = int(d.get("precision_bits", 256))
    prov = d.get("provenance", {"kind": "file"})
    stored = [scalar_from_json(c, prec) for c in d["components"]]
    z = rebuild_vector(prov, F, prec)
    if z is None:
        return TargetVector(F, tuple(stored), dict(prov, source_components=d["components"]), prec)
    for a, b in zip(z.components, stored):
        if not a.overlaps(b):
            raise SpecFileError("stored components disagree with their provenance")
    return z


def rebuild_vector(prov: dict, F, prec: int):
    from .exactnum import cm_structure
    from .vectors import CirclePoint, corollary_vector, external_vector, herm_circle, quad_zeros

    kind = prov.get("kind")
    E = F.embeddings(prec)
    if kind == "quad_zeros":
        return quad_zeros(form_from_dict(prov["form"], F), E, prov["signs"])
    if kind == "herm_circle":
        H = form_from_dict(prov["form"], F)
        return herm_circle(H, E, [CirclePoint.from_dict(p) for p in prov["params"]])
    if kind == "corollary":
        cm = cm_structure(F)
        params = [CirclePoint.from_dict(p) for p in prov["params"]]
        return corollary_vector(F.elem(_coords(prov["f"], "f")), F.elem(_coords(prov["e"], "e")),
                                [p.alpha for p in params], [p.sign for p in params], cm, E)
    if kind == "external":
        vals = [tuple(v) if isinstance(v, list) else v for v in prov["values"]]
        return external_vector(F, vals, prec)
    return None


def write_vector(path, z, digits: int = 30) -> None:
    write_json(path, vector_to_dict(z, digits))


def read_vector(path, F=None):
    return vector_from_dict(load_mapping(path), F)


# --------------------------------------------------------------------------
# CSV reports
# --------------------------------------------------------------------------


def _header_lines(meta: dict) -> list[str]:
    return [f"# {k}={meta[k]}" for k in sorted(meta)]


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence], meta: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        for line in _header_lines(meta or {}):
            fh.write(line + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def read_csv(path) -> tuple[dict, list[str], list[list[str]]]:
    meta, lines = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                meta[k] = v
            else:
                lines.append(line)
    rows = list(csv.reader(lines))
    return meta, rows[0], rows[1:]


def _coord_str(c: Sequence[int]) -> str:
    return " ".join(str(int(x)) for x in c)


def scan_rows(report, digits: int = 20) -> tuple[list[str], list[list[str]]]:
    header = ["q", "p", "house", "quality_lo", "quality_hi", "regime"]
    rows = [[_coord_str(v.q), _coord_str(v.p), format_interval(v.house, digits),
             dec_floor(v.quality.lower, digits), dec_ceil(v.quality.upper, digits), v.regime]
            for v in report.rows]
    return header, rows


def flow_rows(prof, digits: int = 20) -> tuple[list[str], list[list[str]]]:
    header = ["t", "m_lo", "m_hi", "witness_q", "witness_p"]
    rows = [[repr(p.t), dec_floor(p.m.lower, digits), dec_ceil(p.m.upper, digits),
             _coord_str(p.witness[0]), _coord_str(p.witness[1])] for p in prof.points]
    return header, rows


def svg_polyline(points: Sequence[tuple[float, float]], width: int = 640, height: int = 320,
                 title: str = "") -> str:
    """A bare SVG line plot of (x, y) samples, y axis on a log scale."""
    import math

    xs = [x for x, _ in points]
    ys = [math.log10(max(y, 1e-300)) for _, y in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        y1 = y0 + 1
    if x1 == x0:
        x1 = x0 + 1
    pad = 30
    pts = " ".join(f"{pad + (x - x0) / (x1 - x0) * (width - 2 * pad):.2f},"
                   f"{height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad):.2f}" for x, y in zip(xs, ys))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
            f'<title>{title}</title>\n'
            f'<rect width="100%" height="100%" fill="white"/>\n'
            f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{pts}"/>\n'
            f'<text x="{pad}" y="{pad - 10}" font-size="12">log10 m(t), t in [{x0:g}, {x1:g}]</text>\n'
            f'</svg>\n')


# --------------------------------------------------------------------------
# configuration hashing
# --------------------------------------------------------------------------


def config_hash(config: dict, files: Sequence = ()) -> str:
    """sha256 over the canonical JSON of the config and the bytes of referenced files."""
    h = hashlib.sha256(json.dumps(config, sort_keys=True, default=str).encode())
    for f in files:
        if f:
            try:
                h.update(Path(f).read_bytes())
            except OSError as exc:
                raise SpecFileError(f"cannot read {f}: {exc}") from exc
    return h.hexdigest()[:16]
