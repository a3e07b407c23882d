"""Random instance generation and plain-text instance / result-CSV IO.

Instance file format (bit-exact round trip):

    line 1:      "n m"
    line 2:      "# seed=<u64> mode=<uniform|biased:p> rng=<id>"   (optional comment)
    lines 3..:   one profile per line, m characters from {0,1}

The generator identifier recorded in the header names the PRNG stream
(numpy PCG64) so a corpus stays reproducible across implementations.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError, ParseError
from .model import Instance

__all__ = [
    "GenConfig",
    "ResultRecord",
    "generate",
    "write_instance",
    "read_instance",
    "write_results_csv",
    "read_results_csv",
    "RESULT_COLUMNS",
]

RNG_ID = "pcg64"

DEFAULT_BIAS = 0.25  # undocumented in the source protocol; our fixed default


@dataclass(frozen=True)
class GenConfig:
    """Parameters of the synthetic-instance protocol."""

    n: int
    m: int
    mode: str = "uniform"  # "uniform" | "biased"
    p: float = DEFAULT_BIAS  # approval probability, used in biased mode only
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidArgumentError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.mode not in ("uniform", "biased"):
            raise InvalidArgumentError(f"mode must be uniform or biased, got {self.mode!r}")
        if self.mode == "biased" and not 0.0 < self.p < 1.0:
            raise InvalidArgumentError(f"bias probability must be in (0,1), got {self.p}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must fit in an unsigned 64-bit integer")

    @property
    def probability(self) -> float:
        return 0.5 if self.mode == "uniform" else self.p

    @property
    def mode_tag(self) -> str:
        return "uniform" if self.mode == "uniform" else f"biased:{self.p:g}"


def generate(config: GenConfig) -> Instance:
    """Draw each profile bit independently with the configured probability."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    bits = (rng.random((config.n, config.m)) < config.probability).astype(np.uint8)
    return Instance.from_rows(bits.tolist())


def write_instance(instance: Instance, path, config: Optional[GenConfig] = None) -> None:
    """Write the plain-text format; the header comment is emitted when the
    generating config is known."""
    lines = [f"{instance.n} {instance.m}"]
    if config is not None:
        lines.append(f"# seed={config.seed} mode={config.mode_tag} rng={RNG_ID}")
    for i in range(instance.n):
        lines.append("".join(str(b) for b in instance.profile_bits(i)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_instance(path) -> Instance:
    """Parse the plain-text format; errors name line and column."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty instance file", line=1)
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"expected 'n m' on the first line, got {lines[0]!r}", line=1)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"non-integer dimensions {lines[0]!r}", line=1) from None
    if n < 1 or m < 1:
        raise ParseError(f"dimensions must be positive, got n={n} m={m}", line=1)

    body = lines[1:]
    if body and body[0].lstrip().startswith("#"):
        body = body[1:]
        first_profile_line = 3
    else:
        first_profile_line = 2

    if len(body) < n:
        raise ParseError(
            f"expected {n} profile rows, found {len(body)}",
            line=first_profile_line + len(body),
        )
    if len(body) > n and any(row.strip() for row in body[n:]):
        raise ParseError(
            f"unexpected content after {n} profile rows",
            line=first_profile_line + n,
        )

    rows = []
    for r, row in enumerate(body[:n]):
        if len(row) != m:
            raise ParseError(
                f"profile row has length {len(row)}, expected {m}",
                line=first_profile_line + r,
            )
        for c, ch in enumerate(row):
            if ch not in "01":
                raise ParseError(
                    f"invalid character {ch!r} in profile row",
                    line=first_profile_line + r,
                    column=c + 1,
                )
        rows.append([int(ch) for ch in row])
    return Instance.from_rows(rows)


RESULT_COLUMNS = (
    "instance_id",
    "n",
    "m",
    "k",
    "objective",
    "time_s",
    "nodes",
    "root_bound",
    "root_gap_pct",
    "solved_at_root",
    "pct_fixed",
)


@dataclass(frozen=True)
class ResultRecord:
    """One solve, one CSV row; columns mirror the benchmark tables."""

    instance_id: str
    n: int
    m: int
    k: int
    objective: int
    time_s: float
    nodes: int
    root_bound: int
    root_gap_pct: float
    solved_at_root: bool
    pct_fixed: float


def write_results_csv(rows: Iterable[ResultRecord], path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(RESULT_COLUMNS)
        for r in rows:
            d = dataclasses.asdict(r)
            w.writerow(
                [
                    d["instance_id"],
                    d["n"],
                    d["m"],
                    d["k"],
                    d["objective"],
                    repr(d["time_s"]),
                    d["nodes"],
                    d["root_bound"],
                    repr(d["root_gap_pct"]),
                    int(d["solved_at_root"]),
                    repr(d["pct_fixed"]),
                ]
            )


def read_results_csv(path) -> list[ResultRecord]:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != list(RESULT_COLUMNS):
            raise ParseError(f"unexpected results header {header!r}", line=1)
        out = []
        for row in reader:
            out.append(
                ResultRecord(
                    instance_id=row[0],
                    n=int(row[1]),
                    m=int(row[2]),
                    k=int(row[3]),
                    objective=int(row[4]),
                    time_s=float(row[5]),
                    nodes=int(row[6]),
                    root_bound=int(row[7]),
                    root_gap_pct=float(row[8]),
                    solved_at_root=bool(int(row[9])),
                    pct_fixed=float(row[10]),
                )
            )
    return out
