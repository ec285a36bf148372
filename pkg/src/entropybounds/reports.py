"""CSV/JSON writers and text dumps for experiment output.

CSV files are UTF-8 with a header row, ``.`` as decimal separator, floats in
``repr`` form, big integers as decimal strings and booleans as
``true``/``false``. JSON summaries use sorted keys. Neither contains
timestamps, so identical runs give identical bytes.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

from .codes.bitstrings import canonical_bitstring
from .codes.families import CodeFamily, OptimalOneToOneCode
from .codes.huffman import HuffmanBlockCode


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, int) and not isinstance(obj, bool) and abs(obj) > 2**53:
        return str(obj)
    return obj


def json_text(data: Any) -> str:
    return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    Path(path).write_text(csv_text(header, rows), encoding="utf-8")


def write_json(path: Path, data: Any) -> None:
    Path(path).write_text(json_text(data), encoding="utf-8")


def sequence_literal(seq: Sequence[int], k: int) -> str:
    return "".join(map(str, seq)) if k <= 10 else ",".join(map(str, seq))


def codeword_dump(code: CodeFamily, n: int) -> str:
    """One line per sequence of X^n: ``rank codeword length``.

    Lines are in rank order for the optimal one-to-one code; other families
    use the lexicographic index of the sequence. An empty codeword leaves the
    middle field empty.
    """
    lines = []
    if isinstance(code, OptimalOneToOneCode):
        for rank in range(code.source.k**n):
            bits = canonical_bitstring(rank)
            lines.append(f"{rank} {bits} {len(bits)}")
    else:
        for index, seq in enumerate(itertools.product(range(code.k), repeat=n)):
            bits = code.encode(n, seq)
            lines.append(f"{index} {bits} {len(bits)}")
    return "\n".join(lines) + "\n"


def huffman_table_csv(code: HuffmanBlockCode) -> str:
    return csv_text(("block_index", "codeword"), code.table_rows())
