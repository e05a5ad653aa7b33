"""Parameter scans over (q, a, n) with resumable, deterministic output."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal

from .bounds import case_split_values, main_theorem_bound
from .factor import Budget, largest_known_prime_factor
from .primitive import primitive_primes
from .quadratic import FrobeniusParams, gamma_class
from .sequence import PsiFactorCache, order_value

Format = Literal["csv", "json"]


@dataclass(frozen=True)
class ScanConfig:
    q_values: tuple[int, ...] = (2, 3, 4, 5)
    a_values: tuple[int, ...] | None = None  # None means every admissible a
    n_lo: int = 1
    n_hi: int = 30
    rho_iterations: int | None = None
    budget_ms: int | None = None
    fmt: Format = "csv"
    output: str | None = None
    precision_bits: int = 128
    seed: int = 0
    threads: int = 1

    def budget(self) -> Budget:
        b = Budget(time_ms=self.budget_ms)
        if self.rho_iterations is not None:
            b = dataclasses.replace(b, rho_iterations=self.rho_iterations)
        return b

    def pairs(self) -> list[FrobeniusParams]:
        out = []
        for q in sorted(set(self.q_values)):
            if q < 2:
                continue
            admissible = FrobeniusParams.admissible(q)
            if self.a_values is not None:
                admissible = [p for p in admissible if p.a in set(self.a_values)]
            out.extend(admissible)
        return out

    def n_values(self) -> range:
        return range(max(self.n_lo, 1), self.n_hi + 1)

    def digest(self) -> str:
        """Hash of everything that affects row content (not output location or threads)."""
        keyed = dataclasses.asdict(self)
        for k in ("output", "threads", "fmt"):
            keyed.pop(k)
        keyed["budget"] = dataclasses.asdict(self.budget())
        return hashlib.sha256(json.dumps(keyed, sort_keys=True).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ScanRow:
    q: int
    a: int
    n: int
    t_n: int
    N_n: str
    factors: str
    complete: bool
    largest_prime: int
    p_over_n: float
    log_bound: float | None
    primitive: str
    primitive_status: str
    split_mass: float | None
    inert_mass: float | None
    gamma_degenerate: bool = field(default=False)

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.q, self.a, self.n)

    def primitive_primes(self) -> list[tuple[int, str]]:
        if not self.primitive:
            return []
        return [(int(p), k) for p, k in (s.split(":") for s in self.primitive.split(";"))]

    def to_record(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_record(cls, rec: dict) -> ScanRow:
        """Inverse of to_record, also accepting the all-string CSV form."""
        out = {}
        for f in dataclasses.fields(cls):
            v = rec[f.name]
            if isinstance(v, str) and f.type not in ("str",):
                v = _parse_field(f.type, v)
            out[f.name] = v
        return cls(**out)


def _parse_field(typ: str, v: str):
    if typ == "int":
        return int(v)
    if typ == "bool":
        return v == "true"
    if typ == "float":
        return float(v)
    if typ == "float | None":
        return None if v == "" else float(v)
    raise TypeError(typ)


FIELDS = [f.name for f in dataclasses.fields(ScanRow)]


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def encode_rows(rows: Iterable[ScanRow], fmt: Format, header: bool) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, quoting=csv.QUOTE_ALL, lineterminator="\r\n")
        if header:
            w.writerow(FIELDS)
        for r in rows:
            rec = r.to_record()
            w.writerow([_csv_cell(rec[k]) for k in FIELDS])
    elif fmt == "json":
        for r in rows:
            buf.write(json.dumps(r.to_record(), sort_keys=False) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue()


def read_rows(path: str | Path, fmt: Format) -> list[ScanRow]:
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "csv":
        return [ScanRow.from_record(r) for r in csv.DictReader(io.StringIO(text, newline=""))]
    return [ScanRow.from_record(json.loads(line)) for line in text.splitlines() if line]


def scan_row(params: FrobeniusParams, n: int, cache: PsiFactorCache) -> ScanRow:
    ov = order_value(params, n)
    rep = primitive_primes(params, n, cache=cache)
    f = rep.factored
    P, _ = largest_known_prime_factor(f)
    A = B = None
    if rep.complete:
        A, B, _ = case_split_values(rep)
    return ScanRow(
        q=params.q,
        a=params.a,
        n=n,
        t_n=ov.t_n,
        N_n=str(ov.N_n),
        factors=f.summary(),
        complete=f.complete,
        largest_prime=P,
        p_over_n=P / n,
        log_bound=main_theorem_bound(n) if n >= 16 else None,
        primitive=";".join(f"{r.p}:{r.kind}" for r in rep.primitive),
        primitive_status=rep.status,
        split_mass=A,
        inert_mass=B,
        gamma_degenerate=gamma_class(params).degenerate,
    )


def _pair_rows(args: tuple[FrobeniusParams, tuple[int, ...], Budget]) -> list[ScanRow]:
    params, ns, budget = args
    cache = PsiFactorCache(params, budget)
    return [scan_row(params, n, cache) for n in ns]


def iter_rows(
    config: ScanConfig, after: tuple[int, int, int] | None = None
) -> Iterator[ScanRow]:
    """Rows in sorted (q, a, n) order, optionally skipping keys <= ``after``."""
    budget = config.budget()
    jobs = []
    for params in config.pairs():
        ns = tuple(n for n in config.n_values() if after is None or (params.q, params.a, n) > after)
        if ns:
            jobs.append((params, ns, budget))
    threads = int(os.environ.get("ELLPRIM_THREADS", config.threads))
    if threads <= 1 or len(jobs) <= 1:
        for job in jobs:
            yield from _pair_rows(job)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        # map keeps submission order, so the output never depends on scheduling
        for rows in pool.map(_pair_rows, jobs):
            yield from rows


def checkpoint_path(output: str | Path) -> Path:
    return Path(str(output) + ".ckpt")


def run_scan(config: ScanConfig, resume: bool = True, stop_after: int | None = None) -> Path:
    """Write the scan to ``config.output``, checkpointing after every row.

    With ``resume`` and a checkpoint for the same config, the file is cut
    back to the last committed byte and the scan continues after the last
    committed key.  ``stop_after`` ends early after that many new rows.
    """
    if config.output is None:
        raise ValueError("run_scan needs an output path")
    out = Path(config.output)
    ckpt = checkpoint_path(out)
    digest = config.digest()
    after, offset = None, 0
    if resume and ckpt.exists() and out.exists():
        state = json.loads(ckpt.read_text())
        if state.get("config") == digest and state.get("fmt") == config.fmt:
            after = tuple(state["last_key"]) if state["last_key"] else None
            offset = state["offset"]
    mode = "r+b" if offset else "wb"
    with open(out, mode) as fh:
        fh.seek(offset)
        fh.truncate()
        if not offset:
            fh.write(encode_rows([], config.fmt, header=True).encode())
            _commit(ckpt, digest, config.fmt, None, fh.tell())
        written = 0
        for row in iter_rows(config, after):
            fh.write(encode_rows([row], config.fmt, header=False).encode())
            fh.flush()
            _commit(ckpt, digest, config.fmt, row.key, fh.tell())
            written += 1
            if stop_after is not None and written >= stop_after:
                break
    return out


def _commit(ckpt: Path, digest: str, fmt: str, key, offset: int) -> None:
    tmp = ckpt.with_suffix(".tmp")
    tmp.write_text(json.dumps({"config": digest, "fmt": fmt, "last_key": key, "offset": offset}))
    os.replace(tmp, ckpt)
