"""ASCII grid maps -> possible-world models.

Cell rows sit at even text rows, wall rows between them.  Within a cell
row, cells occupy even columns and the odd columns mark vertical walls;
wall rows carry horizontal-wall marks under the cell columns.

Glyphs: ``.`` free cell, ``#`` solid cell, ``I`` the initial cell, any
lowercase letter a labeled cell (the letter is the atom, unless a legend
line like ``f=fire`` renames it).  Wall marks: ``|`` and ``-`` known
walls, ``:`` and ``~`` possible walls, ``.`` or space for open.

A possible wall makes both incident cells unknown: each such cell gets
one successor pattern per subset of its adjacent possible walls.  The
wall pairs are recorded on the model so environment sampling flips one
coin per wall and applies it to both sides.
"""

from __future__ import annotations

import re

from .errors import MalformedGrid, UnknownGlyph
from .model import Pkwts

_LEGEND_RE = re.compile(r"^\s*([a-z])\s*=\s*([a-z0-9_]+)\s*$")

_OPEN = {".", " "}
_KNOWN_WALL = {"|", "-"}
_POSSIBLE_WALL = {":", "~"}
_WALL_MARKS = _OPEN | _KNOWN_WALL | _POSSIBLE_WALL


def grid_compile(text: str, cost: int = 1) -> Pkwts:
    """Compile a grid map into a model with 4-adjacency and uniform
    movement cost; labeled cells get a free self-loop so they stay valid
    sinks once the task is done there."""
    legend, lines = _split_legend(text)
    if not lines:
        raise MalformedGrid("empty map")
    n_rows = (len(lines) + 1) // 2
    if len(lines) != 2 * n_rows - 1:
        raise MalformedGrid("expected alternating cell and wall rows")
    width = max(len(line) for line in lines)
    n_cols = (width + 1) // 2
    lines = [line.ljust(2 * n_cols - 1) for line in lines]

    cells = {}     # (row, col) -> glyph
    for r in range(n_rows):
        line = lines[2 * r]
        for c in range(n_cols):
            glyph = line[2 * c]
            if glyph == " ":
                raise MalformedGrid(f"missing cell at row {r}, column {c}")
            if glyph not in {".", "#", "I"} and not glyph.islower():
                raise UnknownGlyph(f"cell glyph {glyph!r} at row {r}, column {c}")
            cells[(r, c)] = glyph

    def wall_between(a, b):
        (r1, c1), (r2, c2) = sorted((a, b))
        if r1 == r2:  # vertical wall mark inside the cell row
            mark = lines[2 * r1][2 * c1 + 1]
        else:         # horizontal wall mark in the row between
            mark = lines[2 * r1 + 1][2 * c1]
        if mark not in _WALL_MARKS:
            raise UnknownGlyph(f"wall mark {mark!r} between {a} and {b}")
        return mark

    free = [(r, c) for (r, c), g in sorted(cells.items()) if g != "#"]
    ids = {cell: i for i, cell in enumerate(free)}

    initials = [cell for cell in free if cells[cell] == "I"]
    if len(initials) != 1:
        raise MalformedGrid(f"need exactly one initial cell, found {len(initials)}")

    base = {i: set() for i in ids.values()}
    optional = {i: [] for i in ids.values()}   # (coin, neighbor id)
    coins = []
    for (r, c) in free:
        for nb in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if nb not in cells or cells[nb] == "#":
                continue
            mark = wall_between((r, c), nb)
            if mark in _KNOWN_WALL:
                continue
            if mark in _POSSIBLE_WALL:
                pair = tuple(sorted((ids[(r, c)], ids[nb])))
                if pair not in coins:
                    coins.append(pair)
                optional[ids[(r, c)]].append((pair, ids[nb]))
            else:
                base[ids[(r, c)]].add(ids[nb])

    labels = []
    weights = {}
    for cell in free:
        i = ids[cell]
        glyph = cells[cell]
        if glyph not in {".", "I"}:
            atom = legend.get(glyph, glyph)
            labels.append(frozenset({atom}))
            base[i].add(i)
            weights[(i, i)] = 0
        else:
            labels.append(frozenset())

    patterns = []
    for cell in free:
        i = ids[cell]
        opts = sorted(optional[i], key=lambda item: coins.index(item[0]))
        fam = []
        for mask in range((1 << len(opts)) - 1, -1, -1):
            extra = {nb for bit, (_, nb) in enumerate(opts) if mask & (1 << bit)}
            fam.append(tuple(sorted(base[i] | extra)))
        if not fam[-1]:
            raise MalformedGrid(f"cell {cell} would have no moves when walled in")
        patterns.append(tuple(dict.fromkeys(fam)))
        for succ in fam[0]:
            if succ != i:
                weights[(i, succ)] = cost

    try:
        return Pkwts(
            n=len(free),
            initial=ids[initials[0]],
            patterns=tuple(patterns),
            weights=weights,
            labels=tuple(labels),
            coins=tuple(coins),
        )
    except ValueError as exc:
        raise MalformedGrid(str(exc)) from exc


def _split_legend(text: str):
    legend = {}
    grid_lines = []
    in_grid = False
    for raw in text.splitlines():
        line = raw.rstrip("\n")
        if not in_grid:
            if not line.strip():
                continue
            match = _LEGEND_RE.match(line)
            if match:
                legend[match.group(1)] = match.group(2)
                continue
            in_grid = True
        if in_grid:
            grid_lines.append(line)
    while grid_lines and not grid_lines[-1].strip():
        grid_lines.pop()
    return legend, grid_lines
