"""Command-line front end: ``hankelscope <subcommand> ...``.

Exit status: 0 on success, 1 on usage or input errors, 2 when a computation
ends inconclusive (kernel window cap, inconclusive classification, corpus
disagreement).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import analysis
from .analysis import ClassifierConfig
from .berezin import DEFAULT_TOL, WINDOW_CAP, PathSpec, berezin_sample, boundary_profile
from .domains import ProductDomain
from .errors import DomainError, HankelscopeError, MarginError
from .operators import Window, hankel_product_matrix, toeplitz_matrix
from .symbols import LaurentSymbol

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 2

FLOAT_FMT = ".12g"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# formatting


def canonical(obj):
    """Round floats to 12 significant digits and make the structure JSON-safe."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        x = float(format(x, FLOAT_FMT))
        return 0.0 if x == 0 else x
    if isinstance(obj, (complex, np.complexfloating)):
        return [canonical(obj.real), canonical(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dump_json(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


def fmt(x: float) -> str:
    x = float(x)
    return "0" if x == 0 else format(x, FLOAT_FMT)


# ---------------------------------------------------------------------------
# input parsing


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(p) for p in text.split(",") if p.strip()]


def load_json_file(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_symbol_file(path: str, need_psi: bool = True):
    """Read ``{"domain": ..., "phi": [...], "psi": [...]}``."""
    obj = load_json_file(path)
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: top level must be an object")
    try:
        dom = ProductDomain.from_json(obj.get("domain"))
    except DomainError as exc:
        raise UsageError(f"{path}: field 'domain': {exc}") from None
    try:
        phi = LaurentSymbol.from_json(dom, obj.get("phi"), "phi")
        psi = None
        if "psi" in obj or need_psi:
            psi = LaurentSymbol.from_json(dom, obj.get("psi"), "psi")
    except DomainError as exc:
        raise UsageError(f"{path}: field {exc}") from None
    return dom, phi, psi


def parse_window(text: str, dom: ProductDomain) -> Window:
    text = text.strip()
    try:
        if ":" not in text:
            size = int(text)
            if size < 1:
                raise ValueError
            half = size // 2
            return Window(tuple((0, size - 1) if f.is_disk else (-half, size - 1 - half)
                                for f in dom.factors))
        ranges = []
        for part in text.split(","):
            lo, hi = part.split(":")
            ranges.append((int(lo), int(hi)))
        w = Window(tuple(ranges))
        w.validate(dom)
        return w
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad window {text!r}: {exc or 'expected N or lo:hi,...'}") from None


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return conv


pos_float = _positive(float)
pos_int = _positive(int)


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _classifier_config(args) -> ClassifierConfig:
    return ClassifierConfig(decay_threshold=args.decay_threshold, floor=args.floor,
                            steps=args.steps, tol=args.tol, cap=args.cap)


# ---------------------------------------------------------------------------
# subcommands


def cmd_matrix(args, out):
    dom, phi, psi = load_symbol_file(args.symbols, need_psi=args.kind == "hankel")
    w = parse_window(args.window, dom)
    if args.kind == "toeplitz":
        sym = phi if args.which == "phi" else psi
        if sym is None:
            raise UsageError("symbol file has no 'psi'")
        m = toeplitz_matrix(sym, w)
    else:
        try:
            m = hankel_product_matrix(phi, psi, w, args.margin)
        except MarginError as exc:
            raise UsageError(f"{exc} (use --margin {exc.required})") from None
    if args.format == "csv":
        out.write(m.to_csv(FLOAT_FMT))
    else:
        out.write(dump_json(m.to_json()))
    return EXIT_OK


def cmd_berezin(args, out):
    dom, phi, psi = load_symbol_file(args.symbols, need_psi=False)
    psi = phi if psi is None else psi
    if args.profile:
        path = _path_from_args(args, dom)
        prof = boundary_profile(phi, psi, path, args.steps, args.tol, args.cap)
        if args.format == "csv":
            out.write(prof.to_csv(FLOAT_FMT))
        else:
            out.write(dump_json(prof.to_json()))
        return EXIT_OK if all(s.conclusive for s in prof.samples) else EXIT_INCONCLUSIVE
    if args.point is None:
        raise UsageError("give --point or --profile")
    z = parse_complex_list(args.point)
    res = berezin_sample(phi, psi, z, args.tol, args.cap)
    if args.format == "csv":
        out.write("re,im,tail_bound,error_bound,window,conclusive\n")
        out.write(",".join([fmt(res.value.real), fmt(res.value.imag), fmt(res.tail_bound),
                            fmt(res.error_bound), "x".join(map(str, res.window.shape)),
                            str(int(res.conclusive))]) + "\n")
    else:
        out.write(dump_json({"point": z, "value": res.value, "tail_bound": res.tail_bound,
                             "error_bound": res.error_bound, "window": list(res.window.shape),
                             "conclusive": res.conclusive}))
    return EXIT_OK if res.conclusive else EXIT_INCONCLUSIVE


def _path_from_args(args, dom: ProductDomain) -> PathSpec:
    xis = parse_complex_list(args.xi) if args.xi else None
    if args.distinguished:
        xis = xis or [1.0] * dom.n
        if len(xis) != dom.n:
            raise UsageError(f"--xi needs {dom.n} values for --distinguished")
        return PathSpec.distinguished(dom, xis)
    if args.face is None:
        raise UsageError("--profile needs --face J or --distinguished")
    if not 1 <= args.face <= dom.n:
        raise UsageError(f"--face must lie in 1..{dom.n}")
    anchor = parse_complex_list(args.anchor) if args.anchor else [0j] * dom.n
    if len(anchor) != dom.n:
        raise UsageError(f"--anchor needs {dom.n} coordinates")
    xi = xis[0] if xis else 1.0
    try:
        path = PathSpec.face(dom, args.face, anchor, xi)
        if args.inner:
            flags = tuple(i == args.face - 1 for i in range(dom.n))
            path = PathSpec(path.anchor, path.direction, flags)
        for t in (1,):
            if not dom.contains(path.point(dom, t)):
                raise DomainError("anchor is not interior to the domain")
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return path


def cmd_check_thm1(args, out):
    _, phi, psi = load_symbol_file(args.symbols)
    try:
        report = analysis.thm1_check(phi, psi)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    out.write(dump_json(report.to_json()))
    if args.strict_hypothesis and report.hypothesis_warnings:
        print("hankelscope: restrictions are not pluriharmonic (--strict-hypothesis)",
              file=sys.stderr)
        return EXIT_USAGE
    for w in report.hypothesis_warnings:
        print(f"warning: face j={w['j']}: {w['symbol']} {w['message']}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args, out):
    _, phi, psi = load_symbol_file(args.symbols)
    verdict = analysis.classify_compactness(phi, psi, _classifier_config(args))
    out.write(dump_json(verdict.to_json(full_profiles=args.full)))
    return EXIT_INCONCLUSIVE if verdict.verdict == analysis.INCONCLUSIVE else EXIT_OK


def cmd_prop1(args, out):
    sub = args.prop1_cmd
    if sub == "coeff":
        _, phi, psi = load_symbol_file(args.symbols)
        try:
            rep = analysis.prop1_coeff_check(phi, psi)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        out.write(dump_json(rep.to_json()))
    elif sub == "fixed-point":
        grid = [float(g) for g in args.grid.split(",")] if args.grid else None
        try:
            r = analysis.berezin_fixed_point_residual(args.m, args.rho, grid, args.tol)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        out.write(dump_json({"m": args.m, "rho": args.rho, "residual": r})
                  if args.format == "json" else fmt(r) + "\n")
    elif sub == "eq1":
        try:
            r = analysis.eq1_residual(args.l, args.m, args.xi)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out.write(dump_json({"l": args.l, "m": args.m, "xi": args.xi, "residual": r})
                  if args.format == "json" else fmt(r) + "\n")
    elif sub == "fl-scan":
        try:
            scan = analysis.fl_scan(args.l, args.m, args.xi, args.samples)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        data = scan.to_json()
        data["smallest_monotone_l"] = analysis.smallest_monotone_l(args.m, args.xi, args.samples)
        if args.format == "json":
            out.write(dump_json(data))
        else:
            out.write("x,f,log_derivative\n")
            for x, f, g in zip(scan.x, scan.values, scan.log_derivative):
                out.write(f"{fmt(x)},{fmt(f)},{fmt(g)}\n")
    return EXIT_OK


def cmd_directions(args, out):
    try:
        fam = analysis.direction_family(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        out.write(dump_json(fam.to_json()))
    else:
        out.write("subset,det\n")
        for s, d in fam.determinants.items():
            out.write(" ".join(str(i + 1) for i in s) + f",{d}\n")
    return EXIT_OK


def cmd_corpus(args, out):
    try:
        entries = analysis.load_corpus(args.corpus)
    except DomainError as exc:
        raise UsageError(f"{args.corpus or 'bundled corpus'}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.corpus}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise UsageError(f"{args.corpus}: {exc.strerror}") from None
    report = analysis.run_corpus(entries, _classifier_config(args))
    if args.format == "csv":
        out.write("name,expected,thm1_pass,classifier,agree\n")
        for r in report["pairs"]:
            out.write(f"{r['name']},{r['expected']},{int(r['thm1_pass'])},{r['classifier']},"
                      f"{'' if r['agree'] is None else int(r['agree'])}\n")
    else:
        out.write(dump_json(report))
    return EXIT_OK if report["inconclusive"] == 0 and report["all_agree"] else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# parser


def _add_format(p, default="json"):
    p.add_argument("--format", choices=("csv", "json"), default=default, help="output format")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def _add_classifier(p):
    p.add_argument("--decay-threshold", type=pos_float, default=1e-3)
    p.add_argument("--floor", type=pos_float, default=1e-2)
    p.add_argument("--steps", type=pos_int, default=10)
    p.add_argument("--tol", type=pos_float, default=DEFAULT_TOL)
    p.add_argument("--cap", type=pos_int, default=WINDOW_CAP, help="kernel window cap per factor")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hankelscope",
                     description="Toeplitz/Hankel operators and Berezin transforms on product domains.")
    sub = parser.add_subparsers(dest="cmd", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("matrix", help="dump a Toeplitz or Hankel-product matrix",
                       description="Dump the compression of T_phi (or T_psi) or of H_psi^* H_phi.")
    p.add_argument("--symbols", required=True, help="symbol file (JSON)")
    p.add_argument("--kind", choices=("toeplitz", "hankel"), default="hankel")
    p.add_argument("--which", choices=("phi", "psi"), default="phi", help="symbol for --kind toeplitz")
    p.add_argument("--window", default="4", help="N, or per-factor ranges lo:hi,lo:hi")
    p.add_argument("--margin", type=_nonneg_int, default=None)
    _add_format(p, "csv")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("berezin", help="Berezin transform at a point or along a boundary path",
                       description="Berezin transform of H_psi^* H_phi (psi defaults to phi).")
    p.add_argument("--symbols", required=True)
    p.add_argument("--point", help="comma-separated coordinates, e.g. 0,0.5+0.1i")
    p.add_argument("--profile", action="store_true", help="sample along a radial path")
    p.add_argument("--anchor", help="fixed coordinates of the path")
    p.add_argument("--face", type=pos_int, help="factor (1-based) that moves to the boundary")
    p.add_argument("--distinguished", action="store_true", help="move every factor")
    p.add_argument("--xi", help="unimodular direction(s) of the moving factor(s)")
    p.add_argument("--inner", action="store_true", help="approach the inner circle of an annulus")
    p.add_argument("--steps", type=pos_int, default=10)
    p.add_argument("--tol", type=pos_float, default=DEFAULT_TOL)
    p.add_argument("--cap", type=pos_int, default=WINDOW_CAP)
    _add_format(p, "csv")
    p.set_defaults(func=cmd_berezin)

    p = sub.add_parser("check-thm1", help="symbolic slice-holomorphy check on the polydisk",
                       description="Check, for every face z_j = xi and k != j, whether phi or psi "
                                   "restricted to the face is holomorphic in z_k.")
    p.add_argument("--symbols", required=True)
    p.add_argument("--strict-hypothesis", action="store_true",
                   help="fail (exit 1) when a restriction is not pluriharmonic")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_check_thm1)

    p = sub.add_parser("classify", help="numerical compactness classification",
                       description="Classify the boundary decay of B(H_psi^* H_phi).")
    p.add_argument("--symbols", required=True)
    p.add_argument("--full", action="store_true", help="include every profile sample")
    _add_classifier(p)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("prop1", help="annulus rigidity computations",
                       description="Coefficient check, Berezin fixed-point residual, "
                                   "coefficient identity residual and f_l scan.")
    psub = p.add_subparsers(dest="prop1_cmd", metavar="check", parser_class=_Parser)
    psub.required = True
    q = psub.add_parser("coeff", help="radiality of conj(psi') phi'")
    q.add_argument("--symbols", required=True)
    q.add_argument("--output", "-o")
    q = psub.add_parser("fixed-point", help="max |B(|z|^{2m}) - |w|^{2m}| on a radial grid")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--rho", type=float, required=True)
    q.add_argument("--grid", help="comma-separated radii in (rho, 1)")
    q.add_argument("--tol", type=pos_float, default=1e-12)
    _add_format(q, "csv")
    q = psub.add_parser("eq1", help="residual of the coefficient identity")
    q.add_argument("--l", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--xi", type=float, required=True)
    _add_format(q, "csv")
    q = psub.add_parser("fl-scan", help="monotonicity scan of f_l on [0, m]")
    q.add_argument("--l", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--xi", type=float, required=True)
    q.add_argument("--samples", type=pos_int, default=50)
    _add_format(q, "json")
    p.set_defaults(func=cmd_prop1)

    p = sub.add_parser("directions", help="direction family and determinant certificate")
    p.add_argument("--n", type=pos_int, required=True)
    _add_format(p, "json")
    p.set_defaults(func=cmd_directions)

    p = sub.add_parser("corpus", help="checker/classifier agreement on a corpus",
                       description="Run the slice check and the classifier on every pair.")
    p.add_argument("--corpus", help="corpus file (default: bundled corpus)")
    _add_classifier(p)
    _add_format(p, "json")
    p.set_defaults(func=cmd_corpus)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    target = getattr(args, "output", None)
    try:
        if target:
            with open(target, "w") as fh:
                return args.func(args, fh)
        return args.func(args, sys.stdout)
    except UsageError as exc:
        print(f"hankelscope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HankelscopeError as exc:
        print(f"hankelscope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hankelscope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
