"""SDPA sparse format.

SDPA reads ``max F0 . Y  s.t.  F_i . Y = c_i, Y >= 0`` as its dual problem,
so a maximization is written with ``F0 = C`` and a minimization with
``F0 = -C``; the latter is flagged by a ``* sense=min`` comment line.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import TextIO

import numpy as np

from .problem import DIAG, PSD, Block, SdpProblem


def _fmt(x: float) -> str:
    return repr(float(x))


def write_sdpa(p: SdpProblem, out: str | Path | TextIO, comment: str = "") -> None:
    lines = []
    if comment:
        lines.extend(f'"{line}' for line in comment.splitlines())
    if p.sense == "min":
        lines.append("* sense=min")
    lines.append(str(p.m))
    lines.append(str(len(p.blocks)))
    lines.append(" ".join(str(b.dim if b.kind == PSD else -b.dim) for b in p.blocks))
    lines.append(" ".join(_fmt(v) for v in p.b) if p.m else "")
    sign = 1.0 if p.sense == "max" else -1.0
    for blk, i, j, v in p.c_entries:
        if v:
            lines.append(f"0 {int(blk) + 1} {int(i) + 1} {int(j) + 1} {_fmt(sign * v)}")
    for k, blk, i, j, v in zip(p.a_con, p.a_blk, p.a_i, p.a_j, p.a_val):
        if v:
            lines.append(f"{k + 1} {blk + 1} {i + 1} {j + 1} {_fmt(v)}")
    text = "\n".join(lines) + "\n"
    if isinstance(out, (str, Path)):
        Path(out).write_text(text)
    else:
        out.write(text)


def read_sdpa(source: str | Path | TextIO) -> SdpProblem:
    """Parse SDPA sparse text; separators ``,(){}`` are treated as whitespace."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        text = Path(source).read_text()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    sense = "max"
    tokens: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line[0] in "\"*":
            if line.replace(" ", "").lower() == "*sense=min":
                sense = "min"
            continue
        tokens.extend(re.sub(r"[,(){}]", " ", line).split())
    pos = 0

    def take(count: int) -> list[str]:
        nonlocal pos
        if pos + count > len(tokens):
            raise ValueError("unexpected end of SDPA data")
        out = tokens[pos:pos + count]
        pos += count
        return out

    m = int(take(1)[0])
    nblocks = int(take(1)[0])
    sizes = [int(float(t)) for t in take(nblocks)]
    blocks = [Block(PSD, s) if s > 0 else Block(DIAG, -s) for s in sizes]
    b = np.array([float(t) for t in take(m)])
    rest = tokens[pos:]
    if len(rest) % 5:
        raise ValueError("entry section must consist of 5-field records")
    sign = 1.0 if sense == "max" else -1.0
    c_rows, a_rows = [], []
    for k in range(0, len(rest), 5):
        con, blk, i, j = (int(float(t)) for t in rest[k:k + 4])
        val = float(rest[k + 4])
        if not (0 <= con <= m and 1 <= blk <= nblocks):
            raise ValueError(f"entry {k // 5 + 1} refers to constraint {con} / block {blk} out of range")
        i, j = min(i, j) - 1, max(i, j) - 1
        if con == 0:
            c_rows.append((blk - 1, i, j, sign * val))
        else:
            a_rows.append((con - 1, blk - 1, i, j, val))
    a = np.array(a_rows, dtype=float).reshape(-1, 5)
    return SdpProblem(
        blocks=blocks,
        c_entries=np.array(c_rows, dtype=float).reshape(-1, 4),
        a_con=a[:, 0].astype(int),
        a_blk=a[:, 1].astype(int),
        a_i=a[:, 2].astype(int),
        a_j=a[:, 3].astype(int),
        a_val=a[:, 4],
        b=b,
        sense=sense,
    )
