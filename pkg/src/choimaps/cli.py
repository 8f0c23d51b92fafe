"""Command-line interface: classification, witness construction, spanning
reports and figure-data sweeps with deterministic machine-readable output.

Exit codes: 0 success, 1 usage error, 2 unsupported angle, 3 constructed
witness does not detect, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from .errors import (
    NoDetectingChoiceError,
    OutOfRangeError,
    ThetaOutOfRangeError,
    UnsupportedThetaError,
)
from .faces import FaceKind, classify_face
from .linalg import hermitian_eigenvalues, partial_transpose
from .maps import MapParams, choi_matrix, cp_threshold
from .optimality import classify_optimality
from .positivity import is_completely_copositive, is_completely_positive, is_positive
from .reporting import ReportDocument, render_plain, round_real
from .spanning import has_cospanning_property, has_spanning_property
from .witness import build_witness

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNSUPPORTED_THETA = 2
EXIT_NO_DETECTION = 3
EXIT_IO = 4

_ANGLE_RE = re.compile(r"^([+-]?)(\d+)?pi(?:/(\d+))?$")


def parse_angle(text: str) -> float:
    """Parse an angle: decimal radians or a rational multiple of pi such as
    'pi/6', '-2pi/3' or '2pi'."""
    s = text.strip().lower().replace(" ", "")
    m = _ANGLE_RE.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        if den == 0:
            raise ValueError(f"bad angle literal {text!r}")
        return sign * num * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise ValueError(f"bad angle literal {text!r}") from None


def _fmt(x: float) -> str:
    return f"{round_real(x):.15g}"


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):  # noqa: D102
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _spanning_evidence(report) -> dict:
    return {
        "has_property": report.has_property,
        "case": report.case,
        "rank": report.rank,
        "det_abs": report.det_abs,
        "det_closed_form": report.det_closed_form,
    }


def _classification_document(p: MapParams) -> ReportDocument:
    w = choi_matrix(p)
    eigs = hermitian_eigenvalues(w)
    pt_eigs = hermitian_eigenvalues(partial_transpose(w))
    face = classify_face(p)
    flags: dict = {
        "cp": is_completely_positive(p),
        "ccp": is_completely_copositive(p),
        "positive": is_positive(p),
        "face": face.kind.value,
        "face_t": face.t_value,
        "face_interior": face.interior_of_face,
    }
    evidence: dict = {
        "cp_threshold": cp_threshold(p.theta),
        "choi_eigenvalues": list(eigs),
        "partial_transpose_eigenvalues": list(pt_eigs),
    }
    if flags["positive"]:
        span = has_spanning_property(p)
        cospan = has_cospanning_property(p)
        flags.update(
            spanning=span.has_property,
            co_spanning=cospan.has_property,
            bi_spanning=span.has_property and cospan.has_property,
        )
        evidence["spanning"] = _spanning_evidence(span)
        evidence["co_spanning"] = _spanning_evidence(cospan)
        if face.kind not in (FaceKind.INTERIOR, FaceKind.EXTERIOR):
            cls = classify_optimality(p)
            flags.update(
                optimal=cls.row.optimal,
                co_optimal=cls.row.co_optimal,
                bi_optimal=cls.row.bi_optimal,
            )
            evidence["optimality"] = cls.evidence
    params = {"a": p.a, "b": p.b, "c": p.c, "theta": p.theta}
    return ReportDocument(params=params, flags=flags, evidence=evidence)


def _emit(doc: ReportDocument, as_json: bool) -> None:
    sys.stdout.write(doc.to_json() + "\n" if as_json else render_plain(doc))


def cmd_classify(args) -> int:
    try:
        p = MapParams(args.a, args.b, args.c, parse_angle(args.theta))
    except ValueError as exc:
        sys.stderr.write(f"classify: {exc}\n")
        return EXIT_USAGE
    try:
        doc = _classification_document(p)
    except UnsupportedThetaError as exc:
        sys.stderr.write(f"classify: {exc}\n")
        return EXIT_UNSUPPORTED_THETA
    _emit(doc, args.json)
    return EXIT_OK


def cmd_spanning(args) -> int:
    try:
        p = MapParams(args.a, args.b, args.c, parse_angle(args.theta))
    except ValueError as exc:
        sys.stderr.write(f"spanning: {exc}\n")
        return EXIT_USAGE
    try:
        span = has_spanning_property(p)
        cospan = has_cospanning_property(p)
    except UnsupportedThetaError as exc:
        sys.stderr.write(f"spanning: {exc}\n")
        return EXIT_UNSUPPORTED_THETA
    doc = ReportDocument(
        params={"a": p.a, "b": p.b, "c": p.c, "theta": p.theta},
        flags={
            "spanning": span.has_property,
            "co_spanning": cospan.has_property,
            "bi_spanning": span.has_property and cospan.has_property,
        },
        evidence={
            "spanning": _spanning_evidence(span),
            "co_spanning": _spanning_evidence(cospan),
        },
    )
    _emit(doc, args.json)
    return EXIT_OK


def cmd_witness(args) -> int:
    try:
        theta = parse_angle(args.theta)
    except ValueError as exc:
        sys.stderr.write(f"witness: {exc}\n")
        return EXIT_USAGE
    try:
        spec = build_witness(theta, args.b, args.alpha_tilde)
    except (ThetaOutOfRangeError, UnsupportedThetaError) as exc:
        sys.stderr.write(f"witness: {exc}\n")
        return EXIT_UNSUPPORTED_THETA
    except OutOfRangeError as exc:
        sys.stderr.write(f"witness: {exc}\n")
        return EXIT_USAGE
    except NoDetectingChoiceError as exc:
        sys.stderr.write(f"witness: {exc}\n")
        return EXIT_NO_DETECTION
    doc = ReportDocument(
        params={"theta": spec.theta, "b": spec.b, "t": spec.t},
        flags={
            "detects": spec.detects,
            "detection_value": spec.detection_value,
        },
        evidence={
            "alpha_tilde": spec.alpha_tilde,
            "beta_tilde": spec.beta_tilde,
            "gamma_tilde": spec.gamma_tilde,
            "b_slot": spec.b_slot,
            "c_slot": spec.c_slot,
            "scale": spec.scale,
            "normalized_params": {
                "a": spec.normalized_params.a,
                "b": spec.normalized_params.b,
                "c": spec.normalized_params.c,
                "theta": spec.normalized_params.theta,
            },
        },
    )
    _emit(doc, args.json)
    if not spec.detects:
        sys.stderr.write("witness: warning: nonnegative detection pairing, witness does not detect\n")
        return EXIT_NO_DETECTION
    return EXIT_OK


_SWEEP_HEADER = "a,b,c,theta,face,cp,ccp,positive"


def _sweep_rows(theta: float, grid_n: int, plane: str, box: float):
    pth = cp_threshold(theta)
    axis = np.linspace(0.0, box, grid_n)
    if plane == "abc_simplex":
        axis = np.linspace(0.0, pth, grid_n)
        for a in axis:
            for b in axis:
                c = pth - a - b
                if c < -1e-12:
                    continue
                yield a, b, max(c, 0.0)
    elif plane == "ab":
        for a in axis:
            for b in axis:
                yield a, b, 0.0
    elif plane == "ac":
        for a in axis:
            for c in axis:
                yield a, 0.0, c
    elif plane == "bc":
        for b in axis:
            for c in axis:
                yield 0.0, b, c
    else:
        raise ValueError(f"unknown plane {plane!r}")


def _write_text(path: str, text: str) -> int:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        sys.stderr.write(f"error: cannot write {path}: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        theta = parse_angle(args.theta)
    except ValueError as exc:
        sys.stderr.write(f"sweep: {exc}\n")
        return EXIT_USAGE
    if not 1 <= args.grid_n <= 2000:
        sys.stderr.write(f"sweep: grid_n must be in [1, 2000], got {args.grid_n}\n")
        return EXIT_USAGE
    try:
        cp_threshold_ok = 1.0 + 1e-12 < cp_threshold(theta) < 2.0 - 1e-12
        if not cp_threshold_ok:
            raise UnsupportedThetaError(f"sweep needs cp_threshold in (1, 2) at theta={theta}")
        lines = [_SWEEP_HEADER]
        for a, b, c in _sweep_rows(theta, args.grid_n, args.plane, args.box):
            p = MapParams(a, b, c, theta)
            face = classify_face(p)
            lines.append(
                ",".join(
                    (
                        _fmt(a),
                        _fmt(b),
                        _fmt(c),
                        _fmt(theta),
                        face.kind.value,
                        str(int(is_completely_positive(p))),
                        str(int(is_completely_copositive(p))),
                        str(int(is_positive(p))),
                    )
                )
            )
    except UnsupportedThetaError as exc:
        sys.stderr.write(f"sweep: {exc}\n")
        return EXIT_UNSUPPORTED_THETA
    return _write_text(args.out, "\n".join(lines) + "\n")


def cmd_figure_data(args) -> int:
    try:
        theta = parse_angle(args.theta)
    except ValueError as exc:
        sys.stderr.write(f"figure-data: {exc}\n")
        return EXIT_USAGE
    if not 2 <= args.points <= 100000:
        sys.stderr.write(f"figure-data: points must be in [2, 100000], got {args.points}\n")
        return EXIT_USAGE
    if args.figure == "1":
        lines = ["theta,p_theta"]
        for th in np.linspace(-math.pi, math.pi, args.points):
            lines.append(f"{_fmt(th)},{_fmt(cp_threshold(th))}")
    elif args.figure == "2":
        ns = argparse.Namespace(
            theta=args.theta, grid_n=args.points, plane="abc_simplex", box=2.5, out=args.out
        )
        return cmd_sweep(ns)
    else:  # figure 3: positivity scans at thresholds 1, the given angle, 2
        lines = ["label,theta,a,b,c,positive"]
        for label, th in (("p=1", math.pi / 3.0), ("1<p<2", theta), ("p=2", 0.0)):
            axis = np.linspace(0.0, 2.5, args.points)
            for a in axis:
                for b in axis:
                    for c in axis:
                        p = MapParams(a, b, c, th)
                        lines.append(
                            f"{label},{_fmt(th)},{_fmt(a)},{_fmt(b)},{_fmt(c)},{int(is_positive(p))}"
                        )
    return _write_text(args.out, "\n".join(lines) + "\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="choimaps", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("classify", help="classify one parameter tuple")
    pc.add_argument("a", type=float)
    pc.add_argument("b", type=float)
    pc.add_argument("c", type=float)
    pc.add_argument("theta", type=str)
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(func=cmd_classify)

    ps = sub.add_parser("spanning", help="spanning / co-spanning report for a point")
    ps.add_argument("a", type=float)
    ps.add_argument("b", type=float)
    ps.add_argument("c", type=float)
    ps.add_argument("theta", type=str)
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(func=cmd_spanning)

    pw = sub.add_parser("witness", help="construct an edge-state witness")
    pw.add_argument("theta", type=str)
    pw.add_argument("b", type=float)
    pw.add_argument("--alpha-tilde", type=float, default=None)
    pw.add_argument("--json", action="store_true")
    pw.set_defaults(func=cmd_witness)

    pv = sub.add_parser("sweep", help="classification sweep to CSV")
    pv.add_argument("theta", type=str)
    pv.add_argument("grid_n", type=int)
    pv.add_argument("--out", required=True)
    pv.add_argument("--plane", choices=("abc_simplex", "ab", "ac", "bc"), default="abc_simplex")
    pv.add_argument("--box", type=float, default=2.5)
    pv.set_defaults(func=cmd_sweep)

    pf = sub.add_parser("figure-data", help="emit figure data CSV")
    pf.add_argument("figure", choices=("1", "2", "3"))
    pf.add_argument("--out", required=True)
    pf.add_argument("--theta", type=str, default="pi/6")
    pf.add_argument("--points", type=int, default=1000)
    pf.set_defaults(func=cmd_figure_data)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
