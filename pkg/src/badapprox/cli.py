"""Command-line front end.

Exit codes: 0 certified success, 1 certified failure, 2 unknown or precision
exhausted, 3 usage or input-file error.
"""

from __future__ import annotations

import argparse
import dataclasses
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import io
from .errors import BadApproxError, NotAnisotropic, NotAZero, NotCM, PrecisionExhausted, SpecFileError

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str = ""
    field: str | None = None
    form: str | None = None
    vector: str | None = None
    signs: str | None = None
    alphas: str | None = None
    alpha_signs: str | None = None
    angles: str | None = None
    f: str | None = None
    e: str | None = None
    values: str | None = None
    precision: int = 256
    bound: float = 100
    thresholds: str = ""
    tmax: float = 10.0
    step: float = 0.1
    threshold: float = 0.2
    search_height: int = 12
    digits: int = 20
    seed: int = 0
    out: str | None = None
    svg: str | None = None

    # outputs do not change what is computed
    _NOT_HASHED = ("out", "svg")

    def hashed(self) -> dict:
        # input files enter the hash by content, so only their names are kept here
        out = {k: v for k, v in dataclasses.asdict(self).items() if k not in self._NOT_HASHED}
        for k in ("field", "form", "vector"):
            if out[k]:
                out[k] = Path(out[k]).name
        return out

    def files(self) -> list[str]:
        return [p for p in (self.field, self.form, self.vector) if p]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser, *, form=False, vector=False):
    p.add_argument("--config", help="TOML or JSON file with any of the options below")
    p.add_argument("--field", help="field file (TOML/JSON): poly = [c0, c1, ..., 1]")
    p.add_argument("--precision", type=int, help="working precision in bits (default 256)")
    p.add_argument("--digits", type=int, help="significant digits in decimal output (default 20)")
    p.add_argument("--out", help="output path")
    if form or vector:
        p.add_argument("--form", help="form file: kind, A, B, C as power-basis coordinates")
        p.add_argument("--search-height", dest="search_height", type=int,
                       help="denominator bound for the norm preimage search (default 12)")
    if vector:
        g = p.add_argument_group("target vector")
        g.add_argument("--vector", help="vector file written by 'construct'")
        g.add_argument("--signs", help="quadratic zeros: one of + / - per place, e.g. ++")
        g.add_argument("--alphas", help="circle points: ';'-separated exact alphas in [-2, 2], e.g. '1;sqrt(2)'")
        g.add_argument("--alpha-signs", dest="alpha_signs", help="sign per circle point, e.g. +-")
        g.add_argument("--angles", help="circle points by angle (exploratory, not algebraic)")
        g.add_argument("--f", help="circle centre f, comma-separated power-basis coordinates")
        g.add_argument("--e", help="squared radius e, comma-separated power-basis coordinates")
        g.add_argument("--values", help="external point: ';'-separated exact components, complex as 're,im'")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="badapprox", description="Badly approximable vectors from anisotropic forms.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("field-info", help="degree, signature, discriminant, embeddings, CM structure")
    _add_common(p)

    p = sub.add_parser("form-check", help="total indefiniteness and anisotropy verdict")
    _add_common(p, form=True)

    p = sub.add_parser("construct", help="build a target vector and write it to --out")
    _add_common(p, vector=True)

    p = sub.add_parser("scan", help="enumerate approximants up to a house bound")
    _add_common(p, vector=True)
    p.add_argument("--bound", type=float, help="house bound T")
    p.add_argument("--thresholds", help="comma-separated quality thresholds to count")

    p = sub.add_parser("certify", help="Liouville lower bound for a zero of an anisotropic form")
    _add_common(p, vector=True)

    p = sub.add_parser("flow", help="shortest-vector profile along the diagonal trajectory")
    _add_common(p, vector=True)
    p.add_argument("--tmax", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--threshold", type=float, help="dip threshold for m(t)")
    p.add_argument("--svg", help="optional SVG plot of the profile")

    p = sub.add_parser("selftest", help="randomised structural checks")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--precision", type=int)
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    cfg = RunConfig(command=args.command)
    names = {f.name for f in dataclasses.fields(RunConfig)}
    if getattr(args, "config", None):
        base = Path(args.config).parent
        data = io.load_mapping(args.config)
        for k, v in data.items():
            k = k.replace("-", "_")
            if k not in names or k == "command":
                raise SpecFileError(f"unknown config key {k!r}")
            if k in ("field", "form", "vector") and v is not None:
                v = str(base / v)
            setattr(cfg, k, v)
    for k, v in vars(args).items():
        if k in names and k != "command" and v is not None:
            setattr(cfg, k, v)
    return cfg


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _coords(text: str | None):
    if text is None:
        return None
    return [Fraction(x.strip()) for x in str(text).split(",")]


def _signs(text: str) -> list[int]:
    out = []
    for ch in str(text).replace(",", ""):
        if ch == "+":
            out.append(1)
        elif ch == "-":
            out.append(-1)
        else:
            raise SpecFileError(f"sign pattern must use + and -: {text!r}")
    return out


def _load_field(cfg: RunConfig):
    if not cfg.field:
        raise SpecFileError("--field is required")
    return io.read_field(cfg.field)


def _load_form(cfg: RunConfig, F):
    if not cfg.form:
        raise SpecFileError("--form is required")
    return io.read_form(cfg.form, F)


def _load_vector(cfg: RunConfig, F, form=None):
    from .exactnum import cm_structure
    from .vectors import CirclePoint, QuadSurd, corollary_vector, external_vector, herm_circle, quad_zeros

    E = F.embeddings(cfg.precision)
    if cfg.vector:
        z = io.read_vector(cfg.vector, F)
        return z if z.precision == cfg.precision or z.builder is None else z.refine(cfg.precision)
    if cfg.values is not None:
        vals = []
        for part in str(cfg.values).split(";"):
            bits = part.split(",")
            vals.append(tuple(b.strip() for b in bits) if len(bits) == 2 else part.strip())
        return external_vector(F, vals, cfg.precision)
    if cfg.f is not None or cfg.e is not None:
        cm = form.cm if form is not None and form.kind == "herm" else cm_structure(F, E)
        alphas = [a.strip() for a in str(cfg.alphas or "").split(";") if a.strip()]
        signs = _signs(cfg.alpha_signs or "+" * len(alphas))
        return corollary_vector(F.elem(_coords(cfg.f or "0")), F.elem(_coords(cfg.e)), alphas, signs, cm, E,
                                search_height=cfg.search_height)
    if form is None:
        raise SpecFileError("no target vector: give --vector, --values, --f/--e, or a form with --signs/--alphas")
    if form.kind == "quad":
        if cfg.signs is None:
            raise SpecFileError("--signs is required for a quadratic form")
        return quad_zeros(form, E, _signs(cfg.signs))
    if cfg.angles is not None:
        params = [CirclePoint(angle=float(a)) for a in str(cfg.angles).split(";")]
    else:
        alphas = [a.strip() for a in str(cfg.alphas or "").split(";") if a.strip()]
        signs = _signs(cfg.alpha_signs or "+" * len(alphas))
        params = [CirclePoint(alpha=QuadSurd.parse(a), sign=s) for a, s in zip(alphas, signs)]
    return herm_circle(form, E, params)


def _emit(obj: dict, cfg: RunConfig, chash: str) -> None:
    obj = dict(obj, config_hash=chash, precision_bits=cfg.precision, command=cfg.command)
    sys.stdout.write(io.dump_json(obj))


def _pair(v) -> dict:
    return {"q": list(v.q), "p": list(v.p)}


def _pv(v, digits) -> dict | None:
    if v is None:
        return None
    return {**_pair(v), "house": io.format_interval(v.house, digits),
            "quality": io.format_interval(v.quality, digits), "regime": v.regime}


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_field_info(cfg: RunConfig, chash: str) -> int:
    from .exactnum import cm_structure

    F = _load_field(cfg)
    E = F.embeddings(cfg.precision)
    out = {
        "polynomial": str(F.poly),
        "degree": F.degree,
        "signature": [F.r, F.s],
        "discriminant": F.disc,
        "order": "power basis" if F.is_power_basis else "given integral basis",
        "embeddings": E.describe(cfg.digits),
    }
    if F.r == 0:
        try:
            cm = cm_structure(F, E)
            out["cm"] = {"conjugate_of_generator": cm.conj_image.to_strings(),
                         "fixed_subfield_basis": [b.to_strings() for b in cm.fixed_subfield_basis]}
        except NotCM as exc:
            out["cm"] = f"not CM: {exc}"
    else:
        out["cm"] = "not CM: has a real place"
    _emit(out, cfg, chash)
    return EXIT_OK


def cmd_form_check(cfg: RunConfig, chash: str) -> int:
    from .forms import Status, anisotropy, discriminant, is_totally_indefinite

    F = _load_field(cfg)
    J = _load_form(cfg, F)
    E = F.embeddings(cfg.precision)
    indefinite = is_totally_indefinite(J, E)
    kw = {"search_height": cfg.search_height} if J.kind == "herm" else {}
    verdict = anisotropy(J, E, **kw)
    _emit({"form": io.form_to_dict(J), "determinant": discriminant(J).to_strings(),
           "totally_indefinite": indefinite, "anisotropy": verdict.to_dict()}, cfg, chash)
    if not indefinite or verdict.status is Status.ISOTROPIC:
        return EXIT_FAIL
    if verdict.status is Status.UNKNOWN:
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_construct(cfg: RunConfig, chash: str) -> int:
    F = _load_field(cfg)
    form = _load_form(cfg, F) if cfg.form else None
    z = _load_vector(cfg, F, form)
    doc = io.vector_to_dict(z, max(cfg.digits, 30))
    if cfg.out:
        io.write_json(cfg.out, doc)
    _emit({"vector": doc}, cfg, chash)
    return EXIT_OK


def _certificate_for(cfg, z, E):
    from .approx import liouville_certificate
    from .forms import Status, anisotropy

    if z.form is None:
        return None, None
    kw = {"search_height": cfg.search_height} if z.form.kind == "herm" else {}
    verdict = anisotropy(z.form, E, **kw)
    if verdict.status is not Status.ANISOTROPIC:
        return None, verdict
    return liouville_certificate(z.form, z, E, verdict=verdict), verdict


def cmd_scan(cfg: RunConfig, chash: str) -> int:
    from .approx import scan

    F = _load_field(cfg)
    form = _load_form(cfg, F) if cfg.form else None
    z = _load_vector(cfg, F, form)
    E = F.embeddings(cfg.precision)
    cert, verdict = _certificate_for(cfg, z, E)
    ths = [float(x) for x in str(cfg.thresholds).split(",") if x.strip()]
    rep = scan(z, Fraction(str(cfg.bound)), ths, E, certificate=cert)
    d = cfg.digits
    summary = {
        "bound": str(rep.bound),
        "order": rep.order,
        "q_count": rep.n_q,
        "pairs_evaluated": rep.n_pairs,
        "min_quality": io.format_interval(rep.min_quality, d),
        "witness": _pv(rep.witness, d),
        "near_regime_min": _pv(rep.near_min, d),
        "far_regime_min": _pv(rep.far_min, d),
        "tail_min": _pv(rep.tail_min, d),
        "naive_min": io.format_interval(rep.naive_min, d),
        "below_counts": [[c, n] for c, n in rep.below()],
        "certificate": cert.to_dict(d) if cert else None,
        "anisotropy": verdict.to_dict() if verdict else None,
        "violations": [_pv(v, d) for v in rep.violations],
        "inner_minimisation": "heuristic closest vector: rounded coordinates plus {-1,0,1}^d offsets",
    }
    if cfg.out:
        header, rows = io.scan_rows(rep, d)
        io.write_csv(cfg.out, header, rows, {"config_hash": chash, "precision_bits": cfg.precision})
    _emit(summary, cfg, chash)
    return EXIT_FAIL if rep.violations else EXIT_OK


def cmd_certify(cfg: RunConfig, chash: str) -> int:
    from .approx import liouville_certificate
    from .forms import Status, anisotropy

    F = _load_field(cfg)
    form = _load_form(cfg, F) if cfg.form else None
    z = _load_vector(cfg, F, form)
    J = form if form is not None else z.form
    if J is None:
        raise SpecFileError("certify needs a form (--form or a form-derived vector)")
    E = F.embeddings(cfg.precision)
    kw = {"search_height": cfg.search_height} if J.kind == "herm" else {}
    verdict = anisotropy(J, E, **kw)
    if verdict.status is Status.UNKNOWN:
        _emit({"status": "unknown", "anisotropy": verdict.to_dict()}, cfg, chash)
        return EXIT_UNKNOWN
    try:
        cert = liouville_certificate(J, z, E, verdict=verdict)
    except (NotAnisotropic, NotAZero) as exc:
        _emit({"status": "not certified", "reason": str(exc), "anisotropy": verdict.to_dict()}, cfg, chash)
        return EXIT_FAIL
    doc = {"status": "certified", "certificate": cert.to_dict(cfg.digits),
           "vector": [io.scalar_to_json(c, cfg.digits) for c in z.components]}
    if cfg.out:
        io.write_json(cfg.out, dict(doc, config_hash=chash, precision_bits=cfg.precision))
    _emit(doc, cfg, chash)
    return EXIT_OK


def cmd_flow(cfg: RunConfig, chash: str) -> int:
    from .flow import profile

    F = _load_field(cfg)
    form = _load_form(cfg, F) if cfg.form else None
    z = _load_vector(cfg, F, form)
    E = F.embeddings(cfg.precision)
    n = int(round(float(cfg.tmax) / float(cfg.step)))
    step = Fraction(str(cfg.step))
    grid = [float(k * step) for k in range(n + 1)]
    prof = profile(z, grid, E, threshold=float(cfg.threshold))
    d = cfg.digits
    if cfg.out:
        header, rows = io.flow_rows(prof, d)
        io.write_csv(cfg.out, header, rows, {"config_hash": chash, "precision_bits": cfg.precision,
                                            "pair_convention": "lattice pair (q, p) = approximation (q, -p)"})
    if cfg.svg:
        Path(cfg.svg).write_text(io.svg_polyline([(p.t, float(p.m)) for p in prof.points], title=chash))
    _emit({
        "grid": [grid[0], grid[-1], str(step)],
        "inf_m": io.format_interval(prof.inf_m, d),
        "inf_t": prof.inf_t,
        "certified_floor": io.format_interval(prof.certified_floor, d),
        "dips": list(prof.dips),
        "local_minima": [[t, m] for t, m in prof.local_minima],
        "verdict_hint": prof.verdict_hint,
        "note": "grid diagnostic; the floor holds on the whole range by the e^{|dt|} bound",
    }, cfg, chash)
    return EXIT_OK


def cmd_selftest(cfg: RunConfig, chash: str) -> int:
    from .selftest import run_all

    results = run_all(random.Random(cfg.seed), cfg.precision)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    print(f"config_hash={chash} seed={cfg.seed} precision_bits={cfg.precision}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


COMMANDS = {
    "field-info": cmd_field_info,
    "form-check": cmd_form_check,
    "construct": cmd_construct,
    "scan": cmd_scan,
    "certify": cmd_certify,
    "flow": cmd_flow,
    "selftest": cmd_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = resolve_config(args)
        chash = io.config_hash(cfg.hashed(), cfg.files())
        return COMMANDS[cfg.command](cfg, chash)
    except SpecFileError as exc:
        print(f"badapprox: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        print(f"badapprox: unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (BadApproxError, ValueError) as exc:
        print(f"badapprox: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
