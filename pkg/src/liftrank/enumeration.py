"""Exhaustive generation of stretched cliques up to isomorphism.

Vertices ``n-d+1, ..., n`` of ``K_n`` are 2-stretched one after another, each
time in the graph produced so far.  Partial graphs are deduplicated by a
canonical form that colours vertices by role, which is sound because the
final class set does not depend on the order in which pending vertices are
stretched.  Complete graphs are deduplicated by their uncoloured canonical
form.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .canon import canonical, canonical_graph
from .graph import Graph, GraphError, _bits, alpha, complete, omega
from .graphio import from_graph6, to_graph6
from .stretching import Role, StretchedClique, VertexLabel, deficiency, stretch

log = logging.getLogger(__name__)

MAX_N = 7
CACHE_ENV = "LIFTRANK_CACHE"

_PENDING, _FINAL, _HUB, _WING = 0, 1, 2, 3


class EnumerationBudgetError(GraphError):
    pass


@dataclass(frozen=True)
class EnumerationFilter:
    require_hat: bool = False
    require_tilde: bool = False
    complement_of_hat: bool = False
    max_omega: int | None = None

    def __post_init__(self):
        if self.require_hat and self.complement_of_hat:
            raise ValueError("require_hat and complement_of_hat are mutually exclusive")
        if self.max_omega is not None and self.max_omega < 1:
            raise ValueError("max_omega must be positive")

    @property
    def label(self) -> str:
        parts = ["hat" if self.require_hat else "nonhat" if self.complement_of_hat else "all"]
        if self.require_tilde:
            parts.append("tilde")
        if self.max_omega is not None:
            parts.append(f"w{self.max_omega}")
        return "-".join(parts)


@dataclass(frozen=True)
class Record:
    graph6: str
    omega: int
    alpha: int
    hat: bool
    tilde: bool
    deficiency: int

    @property
    def graph(self) -> Graph:
        return from_graph6(self.graph6)

    def line(self) -> str:
        return f"{self.graph6}\t{self.omega}\t{self.alpha}\t{int(self.hat)}\t{int(self.tilde)}\t{self.deficiency}"

    @classmethod
    def parse(cls, line: str) -> "Record":
        g6, om, al, hat, tilde, dfc = line.rstrip("\n").split("\t")
        return cls(g6, int(om), int(al), hat == "1", tilde == "1", int(dfc))


@dataclass
class EnumerationResult:
    n: int
    d: int
    filter: EnumerationFilter
    records: list[Record]
    labeled: dict[str, StretchedClique] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def graphs(self) -> list[Graph]:
        return [r.graph for r in self.records]


# -- generation ------------------------------------------------------------------


@dataclass
class _State:
    graph: Graph
    labels: list[VertexLabel]
    pending: list[int]  # base indices still to stretch


def _colors(state: _State) -> list[int]:
    out = []
    for lab in state.labels:
        if lab.role is Role.HUB:
            out.append(_HUB)
        elif lab.role is not Role.UNSTRETCHED:
            out.append(_WING)
        else:
            out.append(_PENDING if lab.base in state.pending else _FINAL)
    return out


def _covering_pairs(nbrs: int):
    """Unordered pairs ``{A1, A2}`` of submasks with ``A1 | A2 == nbrs``."""
    sub = nbrs
    while True:
        rest = nbrs & ~sub
        t = sub
        while True:
            a2 = rest | t
            if sub <= a2:
                yield sub, a2
            if t == 0:
                break
            t = (t - 1) & sub
        if sub == 0:
            break
        sub = (sub - 1) & nbrs


def _extensions(state: _State, hat: bool, max_omega: int | None):
    base = state.pending[-1]
    G = state.graph
    v = state.labels.index(VertexLabel(base, Role.UNSTRETCHED))
    wing_groups: dict[int, int] = {}
    for u, lab in enumerate(state.labels):
        if lab.role in (Role.WING1, Role.WING2):
            wing_groups[lab.base] = wing_groups.get(lab.base, 0) | 1 << u
    for a1, a2 in _covering_pairs(G.adj[v]):
        if hat and any((a1 & m).bit_count() + (a2 & m).bit_count() != 1 for m in wing_groups.values()):
            continue
        H, index, new = stretch(G, v, [_bits(a1), _bits(a2)])
        labels = [None] * H.n
        for old, nv in index.items():
            labels[nv] = state.labels[old]
        labels[new[0]] = VertexLabel(base, Role.HUB)
        labels[new[1]] = VertexLabel(base, Role.WING1)
        labels[new[2]] = VertexLabel(base, Role.WING2)
        child = _State(H, labels, state.pending[:-1])
        if max_omega is not None:
            final = [u for u, lab in enumerate(labels) if not (lab.role is Role.UNSTRETCHED and lab.base in child.pending)]
            sub, _ = H.induced(final)
            if omega(sub) > max_omega:
                continue
        yield child


def _generate(n: int, d: int, hat: bool, max_omega: int | None, progress=None, skip: int = -1,
              targets=None):
    """Yield labeled complete stretched cliques, one per role-coloured class.

    ``progress(i)`` is called after the ``i``-th first-level branch finishes.
    Branches with index ``<= skip`` are not explored.
    """
    start = _State(complete(n), [VertexLabel(i, Role.UNSTRETCHED) for i in range(1, n + 1)],
                   sorted(targets) if targets is not None else list(range(n - d + 1, n + 1)))
    if d == 0:
        yield start
        return
    seen: list[set] = [set() for _ in range(d + 1)]

    def dfs(state: _State, level: int):
        if not state.pending:
            yield state
            return
        for child in _extensions(state, hat, max_omega):
            key = canonical(child.graph, _colors(child)).key
            if key in seen[level + 1]:
                continue
            seen[level + 1].add(key)
            yield from dfs(child, level + 1)

    for i, child in enumerate(_extensions(start, hat, max_omega)):
        key = canonical(child.graph, _colors(child)).key
        if key in seen[1]:
            continue
        seen[1].add(key)
        if i <= skip:
            continue  # finished in an earlier run; its classes are already in the catalog
        yield from dfs(child, 1)
        if progress:
            progress(i)


def _to_sc(state: _State, n: int) -> StretchedClique:
    return StretchedClique(state.graph, n, tuple(state.labels))


def _classes(n, d, hat, max_omega, targets=None):
    """Map canonical graph6 to (labeled representative, hat flag, deficiency, tilde)."""
    out: dict[str, list] = {}
    for state in _generate(n, d, hat, max_omega, targets=targets):
        SC = _to_sc(state, n)
        g6 = to_graph6(canonical_graph(SC.graph))
        dfc = deficiency(SC)
        is_hat = SC.in_hat()
        entry = out.get(g6)
        if entry is None:
            out[g6] = [SC, is_hat, dfc, SC.in_tilde()]
        else:
            entry[1] |= is_hat
            entry[2] = min(entry[2], dfc)
            entry[3] |= SC.in_tilde()
    return out


def _cache_path(n: int, d: int, f: EnumerationFilter, cache_dir: str | os.PathLike | None) -> Path | None:
    root = cache_dir or os.environ.get(CACHE_ENV)
    if not root:
        return None
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path / f"knd-{n}-{d}-{f.label}.tsv"


def _read_catalog(path: Path) -> tuple[list[Record], int, bool]:
    records, last, complete_flag = [], -1, False
    for line in path.read_text().splitlines():
        if line.startswith("# progress "):
            last = int(line.split()[2])
        elif line.startswith("# complete"):
            complete_flag = True
        elif line and not line.startswith("#"):
            records.append(Record.parse(line))
    return records, last, complete_flag


def write_catalog(path: Path, records: list[Record], header: str = "") -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        fh.write("# graph6\tomega\talpha\that\ttilde\tdeficiency\n")
        for r in records:
            fh.write(r.line() + "\n")
        fh.write("# complete\n")
    os.replace(tmp, path)


def read_catalog(path: str | os.PathLike) -> list[Record]:
    return _read_catalog(Path(path))[0]


def enumerate_knd(
    n: int,
    d: int,
    f: EnumerationFilter | None = None,
    cache_dir: str | os.PathLike | None = None,
    targets=None,
) -> EnumerationResult:
    """All isomorphism classes of graphs from 2-stretching ``d`` vertices of ``K_n`` that pass ``f``.

    A class counts as *hat* when some stretched-clique labeling of it is.
    With ``complement_of_hat`` the hat classes are computed first and removed.
    When a cache directory is given (or ``LIFTRANK_CACHE`` is set) the run is
    persisted as a catalog and resumed from it.  ``targets`` picks which base
    vertices are stretched (default: the last ``d``); the class set does not
    depend on it.
    """
    f = f or EnumerationFilter()
    if not 0 <= d <= n or n > MAX_N:
        raise EnumerationBudgetError(f"enumeration supports d <= n <= {MAX_N}, got n={n}, d={d}")
    if targets is not None:
        targets = sorted(set(targets))
        if len(targets) != d or not all(1 <= t <= n for t in targets):
            raise GraphError(f"targets must be {d} distinct indices in 1..{n}")
    path = None if targets is not None else _cache_path(n, d, f, cache_dir)
    known_records: list[Record] = []
    skip = -1
    if path is not None and path.exists():
        known_records, skip, done = _read_catalog(path)
        if done:
            log.info("loaded %d records from %s", len(known_records), path)
            return EnumerationResult(n, d, f, known_records)

    progress_fh = None
    if path is not None:
        progress_fh = open(path, "a")

    found: dict[str, Record] = {r.graph6: r for r in known_records}
    labeled: dict[str, StretchedClique] = {}

    hat_keys: set[str] = set()
    if f.complement_of_hat:
        hat_keys = set(_classes(n, d, True, f.max_omega, targets))

    def accept(g6: str, SC: StretchedClique, is_hat: bool, dfc: int, tilde: bool) -> Record | None:
        is_hat = is_hat or g6 in hat_keys
        if f.require_hat and not is_hat:
            return None
        if f.complement_of_hat and is_hat:
            return None
        if f.require_tilde and not tilde:
            return None
        G = SC.graph
        return Record(g6, omega(G), alpha(G), is_hat, tilde, dfc)

    pending_lines: list[str] = []

    def progress(i: int) -> None:
        if progress_fh is None:
            return
        for line in pending_lines:
            progress_fh.write(line + "\n")
        pending_lines.clear()
        progress_fh.write(f"# progress {i}\n")
        progress_fh.flush()

    try:
        classes: dict[str, list] = {}
        for state in _generate(n, d, f.require_hat, f.max_omega, progress, skip, targets):
            SC = _to_sc(state, n)
            g6 = to_graph6(canonical_graph(SC.graph))
            is_hat, dfc, tilde = SC.in_hat(), deficiency(SC), SC.in_tilde()
            entry = classes.get(g6)
            if entry is None:
                classes[g6] = [SC, is_hat, dfc, tilde]
                if g6 not in found:
                    rec = accept(g6, SC, is_hat, dfc, tilde)
                    if rec is not None:
                        pending_lines.append(rec.line())
            else:
                entry[1] |= is_hat
                entry[2] = min(entry[2], dfc)
                entry[3] |= tilde
        for g6, (SC, is_hat, dfc, tilde) in classes.items():
            rec = accept(g6, SC, is_hat, dfc, tilde)
            if rec is None:
                found.pop(g6, None)
                continue
            old = found.get(g6)
            if old is not None:
                rec = Record(g6, rec.omega, rec.alpha, rec.hat or old.hat, rec.tilde or old.tilde,
                             min(rec.deficiency, old.deficiency))
            found[g6] = rec
            labeled[g6] = SC
    finally:
        if progress_fh is not None:
            progress_fh.close()

    records = sorted(found.values(), key=lambda r: canonical(r.graph).key)
    if path is not None:
        write_catalog(path, records, f"n={n} d={d} filter={f.label}")
    return EnumerationResult(n, d, f, records, labeled)


# -- solving a catalog --------------------------------------------------------------


@dataclass(frozen=True)
class SolveRow:
    graph6: str
    value: float
    status: str
    alpha: int

    def as_dict(self) -> dict:
        return {"graph6": self.graph6, "value": self.value, "status": self.status, "alpha": self.alpha}


def _solve_one(args) -> SolveRow:
    from .lsplus import optimize

    g6, k = args
    G = from_graph6(g6)
    res = optimize(G, k)
    return SolveRow(g6, res.value, res.status, alpha(G))


def catalog_solve(res: EnumerationResult | list[Record], k: int = 2, jobs: int = 1) -> list[SolveRow]:
    """Optimum of ``e^T x`` over the level-``k`` relaxation for every catalog graph, sorted descending."""
    records = res.records if isinstance(res, EnumerationResult) else res
    tasks = [(r.graph6, k) for r in records]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_solve_one, tasks))
    else:
        rows = [_solve_one(t) for t in tasks]
    return sorted(rows, key=lambda r: (-round(r.value, 9), r.graph6))


def rows_to_csv(rows: list[SolveRow], digits: int = 6) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph6", "value", "status", "alpha"])
    for r in rows:
        w.writerow([r.graph6, f"{r.value:.{digits}f}", r.status, r.alpha])
    return buf.getvalue()


def rows_to_json(rows: list[SolveRow], digits: int = 6) -> str:
    return json.dumps([{**r.as_dict(), "value": round(r.value, digits)} for r in rows], indent=1)
