"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 oracle disagreement or a
violated invariant.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .census import CensusConfig, CensusError, emit_report, report_text, run_census
from .curves import CurveError, EllipticCurve, Genus2Curve, OracleDisagreement, classify, classify_elliptic
from .dieudonne import DieudonneError, h2_model, height_from_models, phi2_vanishes
from .fields import FieldError, parse_poly, prime_field
from .formalgroup import (FormalGroupError, additive_fgl, default_precision, elliptic_fgl, height_of,
                          multiplicative_fgl, p_series)
from .selfcheck import witt_selfcheck
from .strata import INF, format_height, parse_height
from .tables import DimensionReport, SurfaceType, TableError, consistency_check
from .witt import WittError

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2

GLOBAL_DEFAULTS = {"p": None, "field_deg": 1, "jobs": 1, "seed": 0, "out": None, "format": None}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(parser: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    g = parser.add_argument_group("global options")
    g.add_argument("--p", type=int, default=S, help="characteristic")
    g.add_argument("--field-deg", type=int, default=S, help="extension degree d of F_q, q = p^d")
    g.add_argument("--jobs", type=int, default=S, help="worker processes")
    g.add_argument("--seed", type=int, default=S)
    g.add_argument("--out", default=S, help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="brauerheight", description=__doc__.splitlines()[0])
    _global_flags(parser)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify one curve y^2 = f(x)")
    _global_flags(c)
    c.add_argument("--curve", required=True, help='f in canonical form, e.g. "x^5+x^2+1"')
    c.add_argument("--verify", action="store_true", help="cross-check by point counting")

    c = sub.add_parser("census", help="classify every curve of the given shape")
    _global_flags(c)
    c.add_argument("--degree", choices=("5", "6", "both"), default="both")
    c.add_argument("--genus", type=int, choices=(1, 2), default=2)
    c.add_argument("--verify", action="store_true")
    c.add_argument("--sample", type=int, default=None, help="seeded sample size instead of exhaustive")

    c = sub.add_parser("witt", help="Witt vector utilities")
    wsub = c.add_subparsers(dest="witt_command", required=True, parser_class=_Parser)
    w = wsub.add_parser("selfcheck", help="randomized property suite for W_n(F_q)")
    _global_flags(w)
    w.add_argument("--deg", type=int, default=None, help="field degree (alias of --field-deg)")
    w.add_argument("--len", type=int, default=3, dest="length")
    w.add_argument("--samples", type=int, default=1000)
    w.add_argument("--no-ghost", action="store_true", help="skip the ghost-component oracle")

    c = sub.add_parser("tables", help="cohomology dimension tables")
    _global_flags(c)
    c.add_argument("--type", choices=[t.value for t in SurfaceType])
    c.add_argument("--i", type=int, default=None)
    c.add_argument("--check", action="store_true", help="run the consistency checks")

    c = sub.add_parser("dieudonne", help="graded Dieudonne model of H^2(W_i O)")
    _global_flags(c)
    c.add_argument("--height", required=True, help="1, 2, ... or inf")
    c.add_argument("--len", type=int, required=True, dest="length")

    c = sub.add_parser("formal-group", help="[p]-series and height of a formal group law")
    _global_flags(c)
    c.add_argument("--a", type=int, default=None)
    c.add_argument("--b", type=int, default=None)
    c.add_argument("--prec", type=int, default=None)
    c.add_argument("--builtin", choices=("gm", "ga"), default=None)
    return parser


def _options(ns: argparse.Namespace) -> argparse.Namespace:
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(ns, k):
            setattr(ns, k, v)
    return ns


def _need_p(ns) -> int:
    if ns.p is None:
        raise UsageError("--p is required")
    return ns.p


def _write(ns, text: str) -> None:
    if ns.out:
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_classify(ns) -> int:
    F = prime_field(_need_p(ns), ns.field_deg)
    f = parse_poly(ns.curve, F)
    if f.degree == 3 and f.coeff(2) == 0 and f.lead == 1:
        E = EllipticCurve(F, f.coeff(1), f.coeff(0))
        out = classify_elliptic(E, verify=ns.verify).to_dict()
    else:
        rec = classify(Genus2Curve(F, f), verify=ns.verify)
        out = rec.to_dict()
    out = {"p": F.p, "q": F.q, "f": ns.curve, **out}
    _write(ns, _json(out))
    return EXIT_OK


def cmd_census(ns) -> int:
    degrees = (5, 6) if ns.degree == "both" else (int(ns.degree),)
    fmt = ns.format or ("json" if ns.out and ns.out.endswith(".json") else "csv")
    cfg = CensusConfig(_need_p(ns), ns.field_deg, ns.genus, degrees, ns.verify, ns.jobs, ns.seed,
                       ns.sample, ns.out, fmt)
    rep = run_census(cfg)
    if ns.out:
        emit_report(rep, ns.out, fmt)
    else:
        sys.stdout.write(report_text(rep, fmt))
    hc = rep.height_counts()
    print(f"{rep.total} curves over F_{cfg.q}: h=1 {hc['1']}, h=2 {hc['2']}, h=inf {hc['inf']}; "
          f"oracle agreements {rep.agreements}, disagreements {rep.disagreements}; "
          f"{rep.elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_witt(ns) -> int:
    d = ns.deg if ns.deg is not None else ns.field_deg
    res = witt_selfcheck(_need_p(ns), d, ns.length, ns.samples, ns.seed, ghost=not ns.no_ghost)
    text = "\n".join(res.lines()) + "\n"
    text += f"{'PASS' if res.ok else 'FAIL'} W_{ns.length}(F_{ns.p}^{d}) selfcheck\n"
    _write(ns, text)
    return EXIT_OK if res.ok else EXIT_INVARIANT


def cmd_tables(ns) -> int:
    if ns.check:
        rep = consistency_check()
        _write(ns, _json(rep.to_dict()))
        return EXIT_OK if rep.ok else EXIT_INVARIANT
    if ns.type is None:
        raise UsageError("tables needs --type or --check")
    types = [SurfaceType(ns.type)]
    idx = [ns.i] if ns.i is not None else list(range(1, 11))
    rows = [DimensionReport.build(t, i).to_dict() for t in types for i in idx]
    _write(ns, _json(rows if len(rows) > 1 else rows[0]))
    return EXIT_OK


def cmd_dieudonne(ns) -> int:
    try:
        h = parse_height(ns.height)
    except ValueError as exc:
        raise UsageError(f"bad height {ns.height!r}") from exc
    base = prime_field(ns.p, ns.field_deg) if ns.p else None
    m = h2_model(h, ns.length, base)
    out = m.to_dict()
    if h == INF or ns.length >= h:
        out["recovered_height"] = format_height(height_from_models(h, max(ns.length, 1), base))
    if ns.length >= 2 and h != 1:
        out["phi2_vanishes"] = phi2_vanishes(h2_model(h, 2, base))
    _write(ns, _json(out))
    return EXIT_OK


def cmd_formal_group(ns) -> int:
    p = _need_p(ns)
    F = prime_field(p, ns.field_deg)
    N = ns.prec if ns.prec is not None else default_precision(p)
    if ns.builtin:
        if N < p:
            raise UsageError(f"--prec must be >= p = {p}")
        G = (multiplicative_fgl if ns.builtin == "gm" else additive_fgl)(F, N)
    else:
        if ns.a is None or ns.b is None:
            raise UsageError("formal-group needs --a and --b, or --builtin")
        if N < p * p + 1:
            raise UsageError(f"--prec must be >= p^2 + 1 = {p * p + 1} for an elliptic curve")
        G = elliptic_fgl(EllipticCurve(F, F.scalar(ns.a) if F.d == 1 else ns.a,
                                       F.scalar(ns.b) if F.d == 1 else ns.b), N)
    s = p_series(G)
    h = height_of(s)
    v = s.valuation
    out = {"law": G.name, "p": p, "q": F.q, "precision": N,
           "leading_term": None if v is None else {"coefficient": s.leading(), "exponent": v},
           "valuation": v, "height": None if h == INF else h, "height_is_infinite": h == INF}
    _write(ns, _json(out))
    return EXIT_OK


COMMANDS = {"classify": cmd_classify, "census": cmd_census, "witt": cmd_witt, "tables": cmd_tables,
            "dieudonne": cmd_dieudonne, "formal-group": cmd_formal_group}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = _options(parser.parse_args(argv))
    except SystemExit as exc:  # --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[ns.command](ns)
    except OracleDisagreement as exc:
        print(f"oracle disagreement: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (FormalGroupError, AssertionError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, FieldError, CurveError, CensusError, TableError, DieudonneError, WittError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
