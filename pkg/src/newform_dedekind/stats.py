"""Sweep harnesses over admissible (a, c) with deterministic emission.

scan_F counts threshold exceedances |S| > alpha * log^3(C_max) over
1 <= a < c <= C_max with gcd(a, c) = 1 and q1*q2 | c. Partitioning is by c
with ordered merge, so results are byte-identical for any worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from multiprocessing import Pool

from . import dedekind
from .characters import character_from_index
from .contfrac import expand
from .errors import DivisibilityError

__all__ = [
    "ScanConfig",
    "ScanRecord",
    "LargevalRecord",
    "scan_F",
    "second_moment",
    "largeval_sweep",
    "emit",
    "read_records",
    "summarize",
]

CSV_HEADER = ("c", "a", "d", "D", "cf_len", "S_re", "S_im", "S_abs", "bound_ratio", "exceeds")


@dataclass(frozen=True)
class ScanConfig:
    char_pair: tuple  # ((q1, index1), (q2, index2))
    C_max: int
    alpha: float
    method: str = "analytic"  # 'analytic' | 'double_sum' | 'both'
    target_error: float = 1e-6
    worker_count: int = 1
    output_path: str = ""  # when set, scan_F writes CSV (or JSONL by suffix)
    exceedances_only: bool = False


@dataclass(frozen=True)
class ScanRecord:
    c: int
    a: int
    d: int
    D: int  # largest partial quotient of a/c'
    cf_len: int  # partial count of the canonical expansion of a/c'
    S_re: float
    S_im: float
    S_abs: float
    bound_ratio: float
    exceeds_threshold: bool


@dataclass(frozen=True)
class LargevalRecord:
    k: int
    c: int
    c_prime: int
    a: int
    d: int
    m: int
    S_re: float
    S_im: float
    main_re: float
    main_im: float
    residual: float
    normalized_residual: float  # residual / (1 + log c')
    skipped: bool


def _resolve_pair(config):
    (q1, i1), (q2, i2) = config.char_pair
    return character_from_index(q1, i1), character_from_index(q2, i2)


def _scan_one_c(c, chi1, chi2, threshold, method, target_error, exceed_only):
    q2 = chi2.modulus
    cp = c // q2
    log2cp = math.log(cp) ** 2
    count = 0
    records = []
    max_dev = 0.0
    for a in range(1, c):
        if math.gcd(a, c) != 1:
            continue
        if method == "double_sum":
            res = dedekind.s_double_sum(chi1, chi2, a, c)
        else:
            res = dedekind.s_analytic(chi1, chi2, a, c, target_error)
            if method == "both":
                ref = dedekind.s_double_sum(chi1, chi2, a, c)
                dev = abs(res.value - ref.value)
                if dev > 1e-6 + res.truncation_bound:
                    raise RuntimeError(
                        f"method disagreement {dev:.3g} at (a={a}, c={c})"
                    )
                max_dev = max(max_dev, dev)
        val = res.value
        sabs = abs(val)
        exceeds = sabs > threshold
        if exceeds:
            count += 1
        if exceeds or not exceed_only:
            cf = expand(a, cp)
            records.append(
                ScanRecord(
                    c=c,
                    a=a,
                    d=res.d_used,
                    D=max(cf.partials),
                    cf_len=cf.n,
                    S_re=val.real,
                    S_im=val.imag,
                    S_abs=sabs,
                    bound_ratio=sabs / (max(cf.partials) * log2cp),
                    exceeds_threshold=exceeds,
                )
            )
    return count, records, max_dev


_WORKER_ARGS = None


def _init_worker(*args):
    global _WORKER_ARGS
    _WORKER_ARGS = args


def _scan_worker(c):
    return _scan_one_c(c, *_WORKER_ARGS)


def scan_F(config):
    """Run the sweep; returns (exceedance_count, records).

    Deterministic for any worker_count: tasks are whole c values, merged in
    order. An empty range (C_max < q1*q2) gives (0, []).
    """
    chi1, chi2 = _resolve_pair(config)
    dedekind._validate_pair(chi1, chi2)
    if config.C_max < 1:
        raise ValueError("C_max must be a positive integer")
    if config.alpha <= 0:
        raise ValueError("alpha must be positive")
    if not 0 < config.target_error <= 1e-3:
        raise ValueError("target_error must lie in (0, 1e-3]")
    if config.worker_count < 1:
        raise ValueError("worker_count must be >= 1")
    if config.method not in ("analytic", "double_sum", "both"):
        raise ValueError(f"unknown method {config.method!r}")
    q1q2 = chi1.modulus * chi2.modulus
    threshold = config.alpha * math.log(config.C_max) ** 3
    cs = range(q1q2, config.C_max + 1, q1q2)
    args = (chi1, chi2, threshold, config.method, config.target_error,
            config.exceedances_only)
    if config.worker_count == 1 or len(cs) <= 1:
        chunks = [_scan_one_c(c, *args) for c in cs]
    else:
        with Pool(config.worker_count, initializer=_init_worker, initargs=args) as pool:
            chunks = pool.map(_scan_worker, cs)
    count = sum(ch[0] for ch in chunks)
    records = [rec for ch in chunks for rec in ch[1]]
    scan_F.last_max_deviation = max((ch[2] for ch in chunks), default=0.0)
    if config.output_path:
        fmt = "jsonl" if config.output_path.endswith(".jsonl") else "csv"
        emit(records, fmt, config.output_path)
    return count, records


def second_moment(chi1, chi2, c, method="analytic", target_error=1e-6):
    """Sum of |S(a, c)|^2 over the phi(c) residues coprime to c."""
    dedekind._validate_pair(chi1, chi2)
    if c < 1 or c % (chi1.modulus * chi2.modulus):
        raise DivisibilityError(
            f"q1*q2 = {chi1.modulus * chi2.modulus} must divide c = {c}"
        )
    total = 0.0
    for a in range(1, c):
        if math.gcd(a, c) != 1:
            continue
        if method == "double_sum":
            val = dedekind.s_double_sum(chi1, chi2, a, c).value
        else:
            val = dedekind.s_analytic(chi1, chi2, a, c, target_error).value
        total += abs(val) ** 2
    return total


def largeval_sweep(chi1, chi2, n, k_range, target_error=1e-8):
    """Track S against the predicted main term beta * c' along c = k*q1*q2.

    For each k: c = k*q1*q2, c' = c/q2, a = 1 + n*c'. Since a = 1 (mod c'),
    the completed d satisfies d = 1 (mod c') and m = (1 - d)/c' is integral.
    Non-coprime a yields a flagged record with NaN values.
    """
    dedekind._validate_pair(chi1, chi2)
    q1, q2 = chi1.modulus, chi2.modulus
    records = []
    for k in k_range:
        if k < 1:
            raise ValueError("k values must be >= 1")
        c = k * q1 * q2
        cp = c // q2
        a = 1 + n * cp
        if math.gcd(a, c) != 1:
            nan = math.nan
            records.append(
                LargevalRecord(k, c, cp, a, 0, 0, nan, nan, nan, nan, nan, nan, True)
            )
            continue
        res = dedekind.s_analytic(chi1, chi2, a, c, target_error)
        d = res.d_used
        assert (1 - d) % cp == 0
        m = (1 - d) // cp
        beta = dedekind.beta_constant(chi1, chi2, m, n, d % q2)
        main = beta * cp
        residual = abs(res.value - main)
        records.append(
            LargevalRecord(
                k=k,
                c=c,
                c_prime=cp,
                a=a,
                d=d,
                m=m,
                S_re=res.value.real,
                S_im=res.value.imag,
                main_re=main.real,
                main_im=main.imag,
                residual=residual,
                normalized_residual=residual / (1 + math.log(cp)),
                skipped=False,
            )
        )
    return records


def _fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _row_dict(record):
    if isinstance(record, ScanRecord):
        d = asdict(record)
        d["exceeds"] = d.pop("exceeds_threshold")
        return {k: d[k] for k in CSV_HEADER}
    return asdict(record)


def emit(records, fmt="csv", dest=None):
    """Write records as CSV (fixed header) or JSON lines.

    Records are sorted by (c, a); floats carry 12 significant digits; CSV
    booleans are 1/0. dest may be a path, a file-like object, or None to get
    the rendered text back. An empty record list yields a header-only CSV
    (scan header).
    """
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {fmt!r}")
    rows = [_row_dict(r) for r in sorted(records, key=lambda r: (r.c, r.a))]
    buf = io.StringIO()
    if fmt == "csv":
        header = list(rows[0]) if rows else list(CSV_HEADER)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
    else:
        for row in rows:
            clean = {
                k: (float(format(v, ".12g")) if isinstance(v, float) else v)
                for k, v in row.items()
            }
            buf.write(json.dumps(clean) + "\n")
    text = buf.getvalue()
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)
    return None


def read_records(source, fmt="csv"):
    """Parse emitted scan records back (path, file-like, or text)."""
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {fmt!r}")
    if hasattr(source, "read"):
        text = source.read()
    elif "\n" in source or "," in source:
        text = source
    else:
        with open(source) as fh:
            text = fh.read()
    records = []
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        for row in reader:
            records.append(
                ScanRecord(
                    c=int(row["c"]),
                    a=int(row["a"]),
                    d=int(row["d"]),
                    D=int(row["D"]),
                    cf_len=int(row["cf_len"]),
                    S_re=float(row["S_re"]),
                    S_im=float(row["S_im"]),
                    S_abs=float(row["S_abs"]),
                    bound_ratio=float(row["bound_ratio"]),
                    exceeds_threshold=row["exceeds"] == "1",
                )
            )
    elif fmt == "jsonl":
        for line in text.splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            row["exceeds_threshold"] = bool(row.pop("exceeds"))
            records.append(ScanRecord(**row))
    return records


def summarize(config, count, records):
    """Summary dict {count, C, alpha, pair, max_bound_ratio, second_moment_table}.

    The per-c moment table is accumulated from the records, so it equals the
    true second moment only when the scan recorded every pair.
    """
    table = {}
    for r in records:
        table[str(r.c)] = table.get(str(r.c), 0.0) + r.S_abs**2
    (q1, i1), (q2, i2) = config.char_pair
    out = {
        "count": count,
        "C": config.C_max,
        "alpha": config.alpha,
        "pair": [{"q": q1, "index": i1}, {"q": q2, "index": i2}],
        "max_bound_ratio": max((r.bound_ratio for r in records), default=0.0),
        "second_moment_table": table,
    }
    if config.method == "both":
        out["max_method_deviation"] = getattr(scan_F, "last_max_deviation", 0.0)
    return out
