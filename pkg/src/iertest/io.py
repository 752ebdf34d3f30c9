"""File formats: matrix CSVs, population directories, result CSVs.

A matrix file is plain-text CSV with n rows of n comma-separated
decimals; adjacency files carry 0/1.  A population is a directory of
graph_000.csv ... graph_{m-1}.csv plus meta.json with {n, m, seed}
(seed optional).  Floats are written with repr so files round-trip
bit-exactly and reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import MatrixFormatError
from .model import (
    AdjacencyMatrix,
    GraphPopulation,
    ProbabilityMatrix,
    validate_adjacency,
    validate_prob_matrix,
)


def read_matrix_csv(path) -> np.ndarray:
    """Parse a square numeric CSV; errors name the offending cell."""
    path = Path(path)
    rows: list[list[float]] = []
    with path.open(newline="") as fh:
        for r, record in enumerate(csv.reader(fh), start=1):
            if not record or (len(record) == 1 and record[0].strip() == ""):
                continue
            parsed = []
            for c, cell in enumerate(record, start=1):
                try:
                    parsed.append(float(cell.strip()))
                except ValueError:
                    raise MatrixFormatError(
                        f"{path}: row {r}, column {c}: cannot parse {cell.strip()!r} "
                        "as a number"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise MatrixFormatError(f"{path}: file holds no matrix rows")
    width = len(rows[0])
    for r, parsed in enumerate(rows, start=1):
        if len(parsed) != width:
            raise MatrixFormatError(
                f"{path}: row {r} has {len(parsed)} cells, expected {width}"
            )
    if len(rows) != width:
        raise MatrixFormatError(
            f"{path}: matrix must be square, got {len(rows)} rows of {width} cells"
        )
    return np.asarray(rows, dtype=np.float64)


def _format_cell(value: float, integer: bool) -> str:
    return str(int(value)) if integer else repr(float(value))


def write_matrix_csv(matrix, path, integer: bool = False) -> None:
    path = Path(path)
    arr = np.asarray(matrix)
    lines = [
        ",".join(_format_cell(v, integer) for v in row) for row in arr
    ]
    path.write_text("\n".join(lines) + "\n")


def read_prob_matrix(path) -> ProbabilityMatrix:
    return validate_prob_matrix(read_matrix_csv(path))


def read_adjacency(path) -> AdjacencyMatrix:
    try:
        return validate_adjacency(read_matrix_csv(path))
    except MatrixFormatError:
        raise
    except Exception as exc:
        raise MatrixFormatError(f"{path}: {exc}") from exc


def write_population(pop: GraphPopulation, outdir, seed: int | None = None) -> None:
    """Write graph_000.csv ... graph_{m-1}.csv plus meta.json."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for k, graph in enumerate(pop.graphs):
        write_matrix_csv(graph.entries, outdir / f"graph_{k:03d}.csv", integer=True)
    meta = {"n": pop.n, "m": pop.m}
    if seed is not None:
        meta["seed"] = int(seed)
    (outdir / "meta.json").write_text(json.dumps(meta, sort_keys=True) + "\n")


def read_population(path) -> GraphPopulation:
    """Load a population directory, validating every graph."""
    path = Path(path)
    meta_path = path / "meta.json"
    if not meta_path.exists():
        raise MatrixFormatError(f"{path}: missing meta.json")
    try:
        meta = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{meta_path}: invalid JSON: {exc}") from exc
    for key in ("n", "m"):
        if key not in meta:
            raise MatrixFormatError(f"{meta_path}: missing field {key!r}")
    n, m = int(meta["n"]), int(meta["m"])
    graphs = []
    for k in range(m):
        gpath = path / f"graph_{k:03d}.csv"
        if not gpath.exists():
            raise MatrixFormatError(f"{path}: missing {gpath.name}")
        graph = read_adjacency(gpath)
        if graph.n != n:
            raise MatrixFormatError(
                f"{gpath}: graph has n = {graph.n}, meta.json says {n}"
            )
        graphs.append(graph)
    return GraphPopulation(tuple(graphs))


def write_rows_csv(rows: Sequence[dict], columns: Sequence[str], path) -> None:
    """Write result rows with a fixed column order and repr'd floats."""
    path = Path(path)
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            value = row[col]
            if isinstance(value, float):
                cells.append(repr(value))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
