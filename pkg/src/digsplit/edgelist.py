"""Plain-text edge lists.

Format::

    n m
    u v          (m lines, one arc u -> v each)
    part i: v v  (optional, one line per part)

Blank lines and lines starting with ``#`` are ignored.  The canonical form
written by :func:`write_edge_list` lists arcs in lexicographic order and
numbers parts ``0..k-1`` with sorted members.
"""

from __future__ import annotations

import re

from .digraph import Digraph, DigraphError

_PART = re.compile(r"^part\s+(\d+)\s*:(.*)$")


class EdgeListError(DigraphError):
    pass


def read_edge_list(text: str) -> Digraph:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise EdgeListError("empty edge list (missing 'n m' header)")
    lineno, header = lines[0]
    fields = header.split()
    if len(fields) != 2 or not all(f.isdigit() for f in fields):
        raise EdgeListError(f"line {lineno}: malformed header {header!r}, expected 'n m'")
    n, m = int(fields[0]), int(fields[1])
    arcs = []
    parts: dict[int, list[int]] = {}
    for lineno, ln in lines[1:]:
        pm = _PART.match(ln)
        if pm:
            idx = int(pm.group(1))
            if idx in parts:
                raise EdgeListError(f"line {lineno}: part {idx} listed twice")
            try:
                parts[idx] = [int(x) for x in pm.group(2).split()]
            except ValueError:
                raise EdgeListError(f"line {lineno}: malformed part line {ln!r}") from None
            continue
        if parts:
            raise EdgeListError(f"line {lineno}: arc after part lines")
        f = ln.split()
        if len(f) != 2 or not all(x.lstrip("-").isdigit() for x in f):
            raise EdgeListError(f"line {lineno}: malformed arc line {ln!r}")
        u, v = int(f[0]), int(f[1])
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError(f"line {lineno}: vertex out of range 0..{n - 1} in {ln!r}")
        if u == v:
            raise EdgeListError(f"line {lineno}: loop at vertex {u}")
        arcs.append((u, v))
    if len(arcs) != m:
        raise EdgeListError(f"header announces {m} arcs, found {len(arcs)}")
    if len(set(arcs)) != len(arcs):
        seen = set()
        for a in arcs:
            if a in seen:
                raise EdgeListError(f"duplicate arc {a[0]} {a[1]}")
            seen.add(a)
    part_list = [parts[k] for k in sorted(parts)] if parts else None
    try:
        return Digraph(n, arcs, parts=part_list)
    except DigraphError as exc:
        raise EdgeListError(str(exc)) from None


def write_edge_list(D: Digraph) -> str:
    out = [f"{D.n} {D.num_arcs}"]
    out.extend(f"{u} {v}" for u, v in D.arc_array.tolist())
    if D.parts is not None:
        for i, p in enumerate(D.parts):
            out.append(f"part {i}: " + " ".join(map(str, p)))
    return "\n".join(out) + "\n"


def canonical(text: str) -> str:
    return write_edge_list(read_edge_list(text))


def to_dot(D: Digraph) -> str:
    """Graphviz rendering; convenience only."""
    body = "".join(f"  {u} -> {v};\n" for u, v in D.arc_array.tolist())
    return "digraph D {\n" + body + "}\n"
