"""Plain-text dataset files.

::

    #d=4
    1010,1
    0110,0
    0001

One record per line: a ``d``-character 0/1 string, optionally followed by a
comma and a label bit. Blank lines and further ``#`` lines are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from ..gf2 import BitVec
from ..parity import LabeledSample


class DatasetFormatError(ValueError):
    pass


def parse_dataset(text: str) -> tuple[int, list[BitVec], list[int] | None]:
    """Return ``(d, vectors, labels)``; labels is None when no line has one."""
    d = None
    xs: list[BitVec] = []
    ys: list[int | None] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.replace(" ", "").startswith("#d=") and d is None:
                try:
                    d = int(line.replace(" ", "")[3:])
                except ValueError:
                    raise DatasetFormatError(f"line {lineno}: bad header {line!r}") from None
            continue
        bits, _, label = line.partition(",")
        try:
            x = BitVec.from_str(bits)
        except ValueError as exc:
            raise DatasetFormatError(f"line {lineno}: {exc}") from None
        if d is None:
            raise DatasetFormatError("missing '#d=<d>' header before first record")
        if x.d != d:
            raise DatasetFormatError(f"line {lineno}: expected {d} bits, got {x.d}")
        label = label.strip()
        if label and label not in ("0", "1"):
            raise DatasetFormatError(f"line {lineno}: label must be 0 or 1")
        xs.append(x)
        ys.append(int(label) if label else None)
    if d is None:
        raise DatasetFormatError("missing '#d=<d>' header")
    has = [y is not None for y in ys]
    if any(has) and not all(has):
        raise DatasetFormatError("either every record has a label or none does")
    return d, xs, (ys if all(has) and ys else None)  # type: ignore[return-value]


def read_dataset(path: str | Path) -> tuple[int, list[BitVec], list[int] | None]:
    return parse_dataset(Path(path).read_text())


def read_labeled(path: str | Path) -> tuple[int, list[LabeledSample]]:
    d, xs, ys = read_dataset(path)
    if ys is None:
        if xs:
            raise DatasetFormatError(f"{path}: records carry no labels")
        ys = []
    return d, [LabeledSample(x, y) for x, y in zip(xs, ys)]


def format_dataset(d: int, records: Sequence[BitVec | LabeledSample]) -> str:
    lines = [f"#d={d}"]
    for r in records:
        if isinstance(r, LabeledSample):
            lines.append(f"{r.x},{r.y}")
        else:
            lines.append(str(r))
    return "\n".join(lines) + "\n"


def write_dataset(path: str | Path, d: int, records: Sequence[BitVec | LabeledSample]) -> None:
    Path(path).write_text(format_dataset(d, records))
