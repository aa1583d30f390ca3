"""Enumerate curves over F_q, classify them, and write CSV/JSON reports."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .curves import (ClassificationRecord, CurveError, EllipticCurve, Genus2Curve, classify,
                     classify_elliptic)
from .fields import Poly, format_poly, is_squarefree, parse_poly, prime_field
from .strata import INF, case_type, format_height, height_from_p_rank, parse_height

log = logging.getLogger(__name__)

EXHAUSTIVE_CAP = 10**7
CSV_HEADER = ("p", "f", "p_rank", "a_number", "height", "case", "a1", "a2")
ELLIPTIC_CASES = ("ordinary", "supersingular")
CHUNK = 256


class CensusError(ValueError):
    pass


@dataclass(frozen=True)
class CensusConfig:
    p: int
    d: int = 1
    genus: int = 2
    degrees: tuple = (5, 6)
    verify: bool = False
    jobs: int = 1
    seed: int = 0
    sample: int | None = None  # None: exhaustive
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.genus not in (1, 2):
            raise CensusError("genus must be 1 or 2")
        if self.genus == 2 and (not self.degrees or not set(self.degrees) <= {5, 6}):
            raise CensusError("genus-2 degrees must be a nonempty subset of {5, 6}")
        if self.fmt not in ("csv", "json"):
            raise CensusError(f"unknown format {self.fmt!r}")
        if self.jobs < 1:
            raise CensusError("jobs must be >= 1")
        if self.sample is None:
            for deg in self.curve_degrees:
                if self.q ** (deg + 1) > EXHAUSTIVE_CAP:
                    raise CensusError(f"exhaustive census over F_{self.q} in degree {deg} exceeds "
                                      f"{EXHAUSTIVE_CAP} candidates; use sampled mode")
        elif self.sample < 0:
            raise CensusError("sample size must be >= 0")

    @property
    def q(self) -> int:
        return self.p**self.d

    @property
    def curve_degrees(self) -> tuple:
        return (3,) if self.genus == 1 else tuple(sorted(set(self.degrees)))

    @property
    def mode(self) -> str:
        return "exhaustive" if self.sample is None else "sampled"

    def summary(self) -> dict:
        return {"p": self.p, "d": self.d, "genus": self.genus, "degrees": list(self.curve_degrees),
                "verify": self.verify, "mode": self.mode, "seed": self.seed, "sample": self.sample}


def _leads(F, deg: int) -> list[int]:
    units = list(range(1, F.q))
    if deg == 6:
        # two square classes cover every quadratic twist
        return [1, next(c for c in units if not F.is_square(c))]
    return units


def _candidates(cfg: CensusConfig):
    """Raw coefficient tuples (low degree first), before the smoothness filter."""
    F = prime_field(cfg.p, cfg.d)
    q = F.q
    if cfg.genus == 1:
        pairs = itertools.product(range(q), repeat=2)
        if cfg.sample is None:
            yield from pairs
        else:
            rng = random.Random(cfg.seed)
            for _ in range(cfg.sample):
                yield (rng.randrange(q), rng.randrange(q))
        return
    if cfg.sample is None:
        for deg in cfg.curve_degrees:
            for lead in _leads(F, deg):
                for low in itertools.product(range(q), repeat=deg):
                    yield tuple(reversed(low)) + (lead,)
        return
    rng = random.Random(cfg.seed)
    degs = cfg.curve_degrees
    for _ in range(cfg.sample):
        deg = rng.choice(degs)
        lead = rng.choice(_leads(F, deg))
        yield tuple(rng.randrange(q) for _ in range(deg)) + (lead,)


def _make_curve(F, genus: int, raw: tuple):
    if genus == 1:
        return EllipticCurve(F, raw[0], raw[1])
    return Genus2Curve(F, Poly(F, list(raw)))


def enumerate_curves(cfg: CensusConfig):
    """Smooth curves in a deterministic order: all of them, or a seeded sample
    (candidates failing the smoothness filter are dropped, not redrawn)."""
    F = prime_field(cfg.p, cfg.d)
    for raw in _candidates(cfg):
        if cfg.genus == 2 and not is_squarefree(Poly(F, list(raw))):
            continue
        try:
            yield _make_curve(F, cfg.genus, raw)
        except CurveError:
            continue


@dataclass(frozen=True)
class CensusRow:
    p: int
    f: str
    p_rank: int
    a_number: int
    height: object  # 1, 2 or INF
    case: str
    a1: int | None = None
    a2: int | None = None

    def csv_fields(self) -> list[str]:
        return [str(self.p), self.f, str(self.p_rank), str(self.a_number), format_height(self.height),
                self.case, "" if self.a1 is None else str(self.a1), "" if self.a2 is None else str(self.a2)]

    def to_dict(self) -> dict:
        return {"p": self.p, "f": self.f, "p_rank": self.p_rank, "a_number": self.a_number,
                "height": None if self.height == INF else int(self.height),
                "height_is_infinite": self.height == INF, "case": self.case, "a1": self.a1, "a2": self.a2}

    @property
    def elliptic(self) -> bool:
        # the leading term of the canonical form carries the degree
        lead = self.f.split("+", 1)[0]
        return lead.endswith("x^3")

    @property
    def stratum(self) -> tuple:
        return (self.p_rank, self.a_number, format_height(self.height), self.case)

    def validate(self) -> None:
        """Row-level partition/consistency invariants."""
        if self.elliptic:
            expect_h = 1 if self.p_rank == 1 else 2
            ok = self.p_rank in (0, 1) and self.a_number == 1 - self.p_rank and self.height == expect_h \
                and self.case == ELLIPTIC_CASES[1 - self.p_rank]
        else:
            ok = (self.p_rank in (0, 1, 2) and self.a_number in (0, 1, 2)
                  and self.height == height_from_p_rank(self.p_rank)
                  and self.case == case_type(self.p_rank, self.a_number).value
                  and (self.p_rank == 2) == (self.a_number == 0))
        if not ok:
            raise CensusError(f"inconsistent row {self}")


def _row(C, rec, p: int) -> CensusRow:
    if isinstance(rec, ClassificationRecord):
        a1 = a2 = None
        if rec.l_poly is not None:
            a1, a2 = rec.l_poly.coeffs[1], rec.l_poly.coeffs[2]
        return CensusRow(p, format_poly(C.f), rec.p_rank, rec.a_number, rec.height, rec.case_type.value, a1, a2)
    case = ELLIPTIC_CASES[0] if rec.p_rank == 1 else ELLIPTIC_CASES[1]
    return CensusRow(p, format_poly(C.f), rec.p_rank, rec.a_number, rec.height, case, rec.a1, None)


def classify_one(C, verify: bool) -> CensusRow:
    if isinstance(C, EllipticCurve):
        rec = classify_elliptic(C, verify=verify)
    else:
        rec = classify(C, verify=verify)
    return _row(C, rec, C.p)


def _classify_chunk(p: int, d: int, genus: int, verify: bool, raws: list) -> list[CensusRow]:
    F = prime_field(p, d)
    return [classify_one(_make_curve(F, genus, raw), verify) for raw in raws]


def _raw(C) -> tuple:
    return (C.a, C.b) if isinstance(C, EllipticCurve) else tuple(C.f.coeffs)


@dataclass
class CensusReport:
    config: dict
    rows: list = field(default_factory=list)
    strata: dict = field(default_factory=dict)
    total: int = 0
    agreements: int = 0
    disagreements: int = 0
    elapsed: float = 0.0

    def stratum_count(self, **match) -> int:
        keys = ("p_rank", "a_number", "height", "case")
        if "height" in match and not isinstance(match["height"], str):
            match = dict(match, height=format_height(match["height"]))
        total = 0
        for key, n in self.strata.items():
            kv = dict(zip(keys, key))
            if all(kv[k] == v for k, v in match.items()):
                total += n
        return total

    def height_counts(self) -> dict:
        return {h: self.stratum_count(height=h) for h in ("1", "2", "inf")}

    def comparable(self) -> dict:
        """Everything except the wall-clock time."""
        d = self.to_dict()
        d.pop("elapsed_seconds")
        return d

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "total": self.total,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "strata": [{"p_rank": k[0], "a_number": k[1], "height": k[2], "case": k[3], "count": n}
                       for k, n in sorted(self.strata.items(), key=lambda kv: _stratum_order(kv[0]))],
            "elapsed_seconds": round(self.elapsed, 6),
            "records": [r.to_dict() for r in self.rows],
        }


def _stratum_order(key: tuple) -> tuple:
    return (-key[0], key[1], key[2], key[3])


def _batches(it, size: int):
    it = iter(it)
    while batch := list(itertools.islice(it, size)):
        yield batch


def run_census(cfg: CensusConfig) -> CensusReport:
    """Classify every enumerated curve; with ``verify`` each one is cross-checked
    by point counting and an OracleDisagreement aborts the run."""
    t0 = time.perf_counter()
    raws = (_raw(C) for C in enumerate_curves(cfg))
    rows: list[CensusRow] = []
    if cfg.jobs == 1:
        for batch in _batches(raws, CHUNK):
            rows.extend(_classify_chunk(cfg.p, cfg.d, cfg.genus, cfg.verify, batch))
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futures = [ex.submit(_classify_chunk, cfg.p, cfg.d, cfg.genus, cfg.verify, batch)
                       for batch in _batches(raws, CHUNK)]
            for fut in futures:  # submission order keeps the merge deterministic
                rows.extend(fut.result())
    rep = CensusReport(cfg.summary(), rows)
    rep.strata = dict(Counter(r.stratum for r in rows))
    rep.total = len(rows)
    rep.agreements = len(rows) if cfg.verify else 0
    rep.elapsed = time.perf_counter() - t0
    assert sum(rep.strata.values()) == rep.total
    _log_frequencies(rep, cfg)
    return rep


def _log_frequencies(rep: CensusReport, cfg: CensusConfig) -> None:
    if not rep.total:
        return
    hc = rep.height_counts()
    ge2 = (hc["2"] + hc["inf"]) / rep.total
    inf = hc["inf"] / rep.total
    log.info("F_%d census: %d curves; frac(h>=2)=%.4f (x q = %.2f); frac(h=inf)=%.4f (x q^2 = %.2f)",
             cfg.q, rep.total, ge2, ge2 * cfg.q, inf, inf * cfg.q**2)


# --- report files ------------------------------------------------------------

def report_text(rep: CensusReport, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rep.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(rep.to_dict(), indent=2, sort_keys=False) + "\n"
    raise CensusError(f"unknown format {fmt!r}")


def emit_report(rep: CensusReport, path, fmt: str | None = None) -> Path:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    text = report_text(rep, fmt)
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write census report to {path}: {exc}") from exc
    return path


def _opt_int(s) -> int | None:
    return None if s in ("", None) else int(s)


def read_rows(path, fmt: str | None = None) -> list[CensusRow]:
    """Parse a CSV or JSON report back into rows."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    text = path.read_text(encoding="utf-8")
    if fmt == "json":
        out = []
        for d in json.loads(text)["records"]:
            h = INF if d["height_is_infinite"] else d["height"]
            out.append(CensusRow(d["p"], d["f"], d["p_rank"], d["a_number"], h, d["case"], d["a1"], d["a2"]))
        return out
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader, ()))
    if header != CSV_HEADER:
        raise CensusError(f"unexpected CSV header {header}")
    return [CensusRow(int(r[0]), r[1], int(r[2]), int(r[3]), parse_height(r[4]), r[5], _opt_int(r[6]),
                      _opt_int(r[7])) for r in reader]


def row_curve(row: CensusRow, d: int = 1):
    """Rebuild the curve named by a row (for re-validation)."""
    F = prime_field(row.p, d)
    f = parse_poly(row.f, F)
    if f.degree == 3:
        return EllipticCurve(F, f.coeff(1), f.coeff(0))
    return Genus2Curve(F, f)

