"""Grid (integer-array) solution representation and the line-oriented file format.

A solution is a list of integer rows.  Rows may have unequal lengths for the
ragged design types (clique covers, cap sets).  Files hold one row per line,
cells as decimal integers separated by single spaces, LF endings.  Lines
starting with '#' are comment headers and are skipped on parse.
"""

from __future__ import annotations

Grid = list[list[int]]


class SolutionFormatError(ValueError):
    """Raised when solution text cannot be parsed as integer rows."""


def parse_grid(text: str) -> Grid:
    rows: Grid = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise SolutionFormatError(f"line {lineno}: {exc}") from None
    if not rows:
        raise SolutionFormatError("no data rows")
    return rows


def format_grid(rows: Grid, header: str | None = None) -> str:
    lines = []
    if header is not None:
        lines.append(f"# {header}")
    lines.extend(" ".join(str(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def load_grid(path) -> Grid:
    with open(path, encoding="utf-8") as fh:
        return parse_grid(fh.read())


def save_grid(path, rows: Grid, header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_grid(rows, header))


def transpose(rows: Grid) -> Grid:
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise SolutionFormatError("cannot transpose a ragged grid")
    return [list(col) for col in zip(*rows)]
