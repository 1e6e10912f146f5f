"""Command-line front end.

Every subcommand prints one JSON report on stdout.  Exit status is 0 for a
definite verdict, 2 for an inconclusive one and 1 for input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import DEFAULT_RANK_TOL, JetReachError
from .fixtures import fixture_path
from .language import (
    ParseError,
    ValidationError,
    format_series,
    hypersurface_variables,
    parse_hypersurface,
    parse_manifold,
    parse_point,
    validate_normal,
)

TOOL = "crsegre"
EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2

SUBCOMMANDS = ("validate", "segre-dim", "orbit-dim", "minimality", "almost-minimal-scan", "hull",
               "project-fit", "containment", "levi-flat", "sing-locus", "classify-sing",
               "segre-variety", "uniqueness", "quotient-check", "sample")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# report plumbing


def _round(x: float):
    if math.isnan(x) or math.isinf(x):
        return None
    return float(f"{x:.6g}")


def normalize(obj):
    """JSON-ready copy: floats at 6 significant digits, complex as [re, im]."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real), _round(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps(report: dict) -> str:
    return json.dumps(normalize(report), sort_keys=True, indent=2) + "\n"


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    bundled = fixture_path(p.name)
    if bundled.exists():
        return bundled
    raise InputError(f"no such file: {path}")


class Inputs:
    """Reads input files once and keeps their bytes for the digest."""

    def __init__(self):
        self.blobs: list[bytes] = []

    def text(self, path: str) -> str:
        data = _resolve(path).read_bytes()
        self.blobs.append(data)
        return data.decode("utf-8")

    def digest(self, options: dict) -> str:
        h = hashlib.sha256()
        for b in self.blobs:
            h.update(hashlib.sha256(b).digest())
        h.update(json.dumps(normalize(options), sort_keys=True).encode())
        return h.hexdigest()


def _manifold(inputs: Inputs, path: str, jet, validate=True):
    M = parse_manifold(inputs.text(path), validate=validate, jet=jet)
    big = sorted({str(abs(x)) for s in M.Q for e, c in s.terms.items() if sum(e) <= 3
                  for x in (c.re, c.im) if x.denominator >= 100}, key=len)
    if big:
        warnings.warn(f"large-denominator rational {big[0]} may stand in for an irrational "
                      "parameter; closure effects of irrational exponents are not computed")
    return M


def _hypersurface(inputs: Inputs, path: str, jet):
    return parse_hypersurface(inputs.text(path), jet=jet)


def _point(text, size: int, name="--point"):
    if text is None:
        return (0,) * size
    pt = tuple(parse_point(text))
    if len(pt) != size:
        raise InputError(f"{name} needs {size} coordinates, got {len(pt)}")
    return pt


def _or(value, default):
    return default if value is None else value


# ---------------------------------------------------------------------------
# subcommands; each returns (verdicts, certificates, definite, jet)


def cmd_validate(a, inputs):
    text = inputs.text(a.file)
    if a.file.endswith(".hyp") or text.lstrip().startswith("m="):
        H = parse_hypersurface(text, jet=a.jet)
        return {"valid": True, "kind": "hypersurface"}, {"rho": format_series(H.rho)}, True, \
            H.jet_order
    M = parse_manifold(text, validate=False, jet=a.jet)
    rep = validate_normal(M)
    if not rep.ok:
        raise ValidationError("normal-coordinate identities fail", rep)
    return {"valid": True, "kind": "manifold"}, {"validation": rep.to_dict()}, True, M.jet_order


def _segre_args(a):
    return dict(samples=_or(a.samples, 25), radius=_or(a.radius, 0.1), tol=a.tol, seed=a.seed)


def cmd_segre_dim(a, inputs):
    from .segre import max_chain_length, segre_dim
    M = _manifold(inputs, a.file, a.jet)
    p = _point(a.point, M.N)
    k = _or(a.k, 2)
    if not 1 <= k <= max_chain_length(M):
        raise InputError(f"--k must lie in 1..{max_chain_length(M)}")
    cert = segre_dim(M, p, k, **_segre_args(a))
    return {"segre_dim": cert.dimension, "k": k}, {"dim": cert.to_dict()}, True, M.jet_order


def cmd_orbit_dim(a, inputs):
    from .segre import orbit_dim
    M = _manifold(inputs, a.file, a.jet)
    rep = orbit_dim(M, _point(a.point, M.N), **_segre_args(a))
    return {"orbit_dim": rep.dimension, "N": M.N}, {"orbit": rep.to_dict()}, True, M.jet_order


def cmd_minimality(a, inputs):
    from .segre import minimality_test
    M = _manifold(inputs, a.file, a.jet)
    v = minimality_test(M, _point(a.point, M.N), **_segre_args(a))
    return ({"minimality": v.verdict, "orbit_dim": v.orbit.dimension, "N": M.N},
            {"orbit": v.orbit.to_dict()}, True, M.jet_order)


def cmd_almost_minimal_scan(a, inputs):
    from .segre import almost_minimality_scan
    M = _manifold(inputs, a.file, a.jet)
    rep = almost_minimality_scan(M, degree_bound=_or(a.degree, 4), seed=a.seed,
                                 samples=_or(a.samples, 25), tol=a.tol)
    return {"almost_minimality": rep.verdict}, {"scan": rep.to_dict()}, True, M.jet_order


def cmd_hull(a, inputs):
    from .segre import HULL_RADIUS, algebraic_hull, max_chain_length, segre_set_param
    M = _manifold(inputs, a.file, a.jet)
    p = _point(a.point, M.N)
    k = _or(a.k, 2 * (M.d + 1))
    if not 1 <= k <= max_chain_length(M):
        raise InputError(f"--k must lie in 1..{max_chain_length(M)}")
    degree = _or(a.degree, 2)
    param = segre_set_param(M, p, k)
    h = algebraic_hull(param, degree, a.samples, a.tol, a.seed, _or(a.radius, HULL_RADIUS))
    verdict = "hull-found" if h.found else f"no hull up to degree {degree}"
    return ({"hull": verdict, "polynomials": h.to_dict()["polynomials"], "k": k},
            {"hull": h.to_dict()}, True, M.jet_order)


def cmd_project_fit(a, inputs):
    from .leviflat import FIT_RADIUS, fit_hypersurface
    M = _manifold(inputs, a.file, a.jet)
    degree = _or(a.degree, 2)
    fits = []
    for D in range(1, degree + 1):
        fit = fit_hypersurface(M, D, a.samples, _or(a.radius, FIT_RADIUS), a.tol, a.seed)
        fits.append(fit.to_dict())
        if fit.found:
            break
    found = fits[-1]["found"]
    verdicts = {"fit": "found" if found else f"none up to degree {degree}",
                "degree_bound": degree, "rho": fits[-1]["rho"]}
    return verdicts, {"fits": fits}, True, M.jet_order


def cmd_containment(a, inputs):
    from .leviflat import FIT_RADIUS, containment_test
    if a.hypersurface is None:
        raise InputError("containment needs a hypersurface file")
    M = _manifold(inputs, a.file, a.jet)
    H = _hypersurface(inputs, a.hypersurface, a.jet)
    v = containment_test(M, H, samples=_or(a.samples, 50), radius=_or(a.radius, FIT_RADIUS),
                         tol=a.tol, seed=a.seed + 1)
    return ({"containment": v.verdict, "residual": v.residual},
            {"containment": v.to_dict()}, v.flatness.flat is not None or not v.contained,
            H.jet_order)


def cmd_levi_flat(a, inputs):
    from .leviflat import is_levi_flat, levi_form
    H = _hypersurface(inputs, a.file, a.jet)
    if a.point is not None:
        r = levi_form(H, [complex(x) for x in _point(a.point, H.m)], a.tol)
        return {"levi_form": r.verdict}, {"levi_form": r.to_dict()}, True, H.jet_order
    v = is_levi_flat(H, samples=_or(a.samples, 10), radius=_or(a.radius, 1.0), tol=a.tol,
                     seed=a.seed)
    return {"levi_flat": v.verdict}, {"flatness": v.to_dict()}, v.flat is not None, H.jet_order


def cmd_sing_locus(a, inputs):
    from .leviflat import singular_locus_equations
    H = _hypersurface(inputs, a.file, a.jet)
    loc = singular_locus_equations(H, samples=_or(a.samples, 20), radius=_or(a.radius, 1.0),
                                   seed=a.seed)
    verdict = "solutions-found" if len(loc.solutions) else "no-solutions-sampled"
    return {"singular_locus": verdict, "solution_count": len(loc.solutions)}, \
        {"singular_locus": loc.to_dict()}, True, H.jet_order


def cmd_classify_sing(a, inputs):
    from .language import parse_series
    from .leviflat import classify_singular_point
    H = _hypersurface(inputs, a.file, a.jet)
    if not a.locus:
        raise InputError("classify-sing needs at least one --locus equation")
    V = hypersurface_variables(H.m)
    locus = [parse_series(e, V, H.jet_order) for e in a.locus]
    p = [complex(x) for x in _point(a.point, H.m)]
    c = classify_singular_point(H, locus, p, tol=1e-9)
    return {"classification": c.kind}, {"classification": c.to_dict(),
                                        "locus": [format_series(s) for s in locus]}, True, \
        H.jet_order


def cmd_segre_variety(a, inputs):
    from .leviflat import segre_variety_of_hypersurface
    H = _hypersurface(inputs, a.file, a.jet)
    sv = segre_variety_of_hypersurface(H, _point(a.point, H.m))
    return {"degenerate": sv.degenerate, "equation": format_series(sv.series)}, \
        {"segre_variety": sv.to_dict()}, True, H.jet_order


def cmd_uniqueness(a, inputs):
    from .uniqueness import monomial_independence
    M = _manifold(inputs, a.file, None)
    rep = monomial_independence(M, _or(a.K, 2), a.jet)
    witnesses = [f"{list(x)}={list(y)}" for x, y in rep.coincident_pairs]
    return {"independence": rep.verdict, "statement": rep.statement(),
            "witnesses": witnesses}, {"independence": rep.to_dict()}, True, rep.jet_order


def cmd_quotient_check(a, inputs):
    from .language import parse_series
    from .uniqueness import quotient_variables, z_independence_check
    M = _manifold(inputs, a.file, a.jet)
    if a.f is None or a.g is None:
        raise InputError("quotient-check needs --f and --g")
    V = quotient_variables(M)
    f = parse_series(a.f, V, M.jet_order)
    g = parse_series(a.g, V, M.jet_order)
    rep = z_independence_check(f, g, M, samples=_or(a.samples, 50), radius=_or(a.radius, 0.1),
                               tol=a.tol, seed=a.seed)
    return ({"quotient": rep.verdict, "reality_check": rep.reality.verdict,
             "theorem_consistent": rep.consistent},
            {"quotient": rep.to_dict()}, rep.reality.passed is not None, M.jet_order)


def cmd_sample(a, inputs):
    from .segre import sample_points
    M = _manifold(inputs, a.file, a.jet)
    pts = sample_points(M, _or(a.samples, 25), _or(a.radius, 0.1), a.seed)
    res = M.membership_residual(pts) if len(pts) else np.zeros(0)
    return ({"sample_count": len(pts), "max_membership_residual": float(res.max(initial=0.0))},
            {"points": [[complex(x) for x in q] for q in pts], "variables":
             list(M.z_vars) + [f"w{j}" for j in range(1, M.d + 1)]}, True, M.jet_order)


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in SUBCOMMANDS}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--point", help="comma-separated a+bi coordinates (default origin)")
    common.add_argument("--k", type=int, help="Segre chain length")
    common.add_argument("--samples", type=int,
                        help="sample count (25 for Segre ranks; other commands scale up)")
    common.add_argument("--radius", type=float,
                        help="sampling radius (0.1 for Segre ranks; fits and hulls use wider)")
    common.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL)
    common.add_argument("--jet", type=int, help="jet order override")
    common.add_argument("--degree", type=int, help="degree bound")
    common.add_argument("--K", type=int, help="max exponent per factor")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--text", action="store_true", help="also print a summary to stderr")
    common.add_argument("--timing", action="store_true", help="record wall-clock seconds")
    common.add_argument("--f", help="numerator series in z, w")
    common.add_argument("--g", help="denominator series in z, w")
    common.add_argument("--locus", action="append",
                        help="real defining series of the singular manifold (repeatable)")
    parser = _Parser(prog=TOOL, description="Segre sets, minimality and Levi-flat containment.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file")
        if name == "containment":
            sp.add_argument("hypersurface", nargs="?")
    return parser


def _summary(report: dict) -> str:
    lines = [f"{TOOL} {report['command']}"]
    for k, v in sorted((report.get("verdicts") or {}).items()):
        lines.append(f"  {k}: {v}")
    if report.get("error"):
        lines.append(f"  error: {report['error']}")
    for w in report.get("warnings", []):
        lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    report = {"tool": TOOL, "version": __version__, "command": " ".join(argv), "seed": None,
              "jet_order": None, "inputs_digest": None, "verdicts": None, "certificates": None,
              "warnings": [], "wall_clock": None, "exit_code": EXIT_INPUT, "error": None}
    inputs = Inputs()
    text = "--text" in argv
    start = time.perf_counter()
    try:
        a = build_parser().parse_args(argv)
        report["seed"] = a.seed
        text = a.text
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            verdicts, certs, definite, jet = HANDLERS[a.command](a, inputs)
        report.update(verdicts=verdicts, certificates=certs, jet_order=jet,
                      exit_code=EXIT_OK if definite else EXIT_INCONCLUSIVE)
        seen = []
        for w in caught:
            msg = str(w.message)
            if msg not in seen:
                seen.append(msg)
        report["warnings"] = seen
        opts = {k: v for k, v in vars(a).items() if k not in ("text", "timing")}
        report["inputs_digest"] = inputs.digest(opts)
        if a.timing:
            report["wall_clock"] = time.perf_counter() - start
    except SystemExit as exc:                  # --help / --version
        return int(exc.code or 0)
    except ValidationError as exc:
        report["error"] = str(exc)
        report["verdicts"] = {"valid": False}
        if getattr(exc, "report", None) is not None:
            report["certificates"] = {"validation": exc.report.to_dict()}
    except (InputError, ParseError, ValueError, JetReachError, OSError, ArithmeticError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        if isinstance(exc, InputError):
            stderr.write(build_parser().format_usage())
    stdout.write(dumps(report))
    if text:
        stderr.write(_summary(report))
    return report["exit_code"]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
