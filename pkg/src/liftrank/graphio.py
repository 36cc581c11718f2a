"""graph6 and JSON adjacency-list encodings."""

from __future__ import annotations

import json

from .graph import Graph, GraphError


def to_graph6(G: Graph) -> str:
    n = G.n
    if n > 62:
        raise GraphError("graph6 encoder supports n <= 62")
    bits = [G.adj[j] >> i & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = value << 1 | b
        chars.append(chr(value + 63))
    return "".join(chars)


def from_graph6(text: str) -> Graph:
    """Decode a graph6 string (optional ``>>graph6<<`` header, whitespace stripped)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise GraphError("empty graph6 string")
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphError(f"invalid graph6 character {ch!r} at position {pos}")
    n = ord(s[0]) - 63
    if n == 63:
        raise GraphError("graph6 strings with n > 62 are not supported")
    nbits = n * (n - 1) // 2
    expected = 1 + (nbits + 5) // 6
    if len(s) != expected:
        raise GraphError(f"graph6 length {len(s)} does not match n={n} (expected {expected})")
    bits = []
    for ch in s[1:]:
        value = ord(ch) - 63
        bits.extend(value >> (5 - t) & 1 for t in range(6))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def to_json(G: Graph) -> str:
    return json.dumps({"n": G.n, "adjacency": [G.neighbors(v) for v in G.vertices]})


def from_json(text: str | dict) -> Graph:
    """Parse ``{"n": ..., "adjacency": [[...], ...]}`` or ``{"n": ..., "edges": [[u, v], ...]}``."""
    data = json.loads(text) if isinstance(text, str) else text
    if not isinstance(data, dict) or "n" not in data:
        raise GraphError("JSON graph must be an object with an 'n' field")
    n = int(data["n"])
    if "edges" in data:
        return Graph.from_edges(n, (tuple(e) for e in data["edges"]))
    rows = data.get("adjacency")
    if rows is None or len(rows) != n:
        raise GraphError("JSON graph needs 'edges' or an 'adjacency' list of length n")
    edges = [(v, u) for v, row in enumerate(rows) for u in row]
    G = Graph.from_edges(n, edges)
    for v, row in enumerate(rows):
        if sorted(set(row)) != G.neighbors(v):
            raise GraphError(f"adjacency list of vertex {v} is not symmetric")
    return G


def parse_graph(text: str) -> Graph:
    """Accept either JSON or graph6 input."""
    s = text.strip()
    if s.startswith("{"):
        return from_json(s)
    return from_graph6(s)
