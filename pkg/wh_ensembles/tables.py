"""CSV tables with a ``# key: value`` provenance header."""

import csv
import math
import os
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from . import utils
from .exceptions import EnsembleException

Provenance = Sequence[Tuple[str, str]]


def format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "inf" if math.isinf(value) and value > 0 else utils.format_float(float(value))
    return str(value)


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence[Any]], provenance: Provenance) -> str:
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="") as file:
            for key, value in provenance:
                file.write(f"# {key}: {value}\n")
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_cell(cell) for cell in row])
    except OSError as e:
        raise EnsembleException(f"Cannot write `{path}`: {e.strerror}") from None
    utils.info(f"Wrote {path}")
    return path


def read_csv(path: str) -> Tuple[List[str], List[List[str]]]:
    with open(path, newline="") as file:
        lines = [line for line in file if not line.startswith("#")]
    table = list(csv.reader(lines))
    if not table:
        raise EnsembleException(f"Table `{path}` is empty")
    return table[0], table[1:]


def read_columns(path: str, *names: str) -> List[NDArray[np.float64]]:
    columns, rows = read_csv(path)
    missing = [name for name in names if name not in columns]
    if missing:
        raise EnsembleException(f"Table `{path}` has no column(s) {', '.join(missing)}")
    return [np.array([float(row[columns.index(name)]) for row in rows]) for name in names]
