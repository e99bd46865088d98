"""Dataset container and CSV persistence.

File formats:
  adjacency CSV  - N rows of N comma-separated decimals, no header
  signals CSV    - header ``node_0,...,node_{N-1}``, one signal per row
  community CSV  - one integer per line, no header

Floats are written with %.17g so that save -> load -> save is byte-identical.
"""

import hashlib
import io

import numpy as np

from .errors import ValidationError
from .graphs import Graph


class SignalDataset:
    """A stack of graph signals (one per row) tied to a graph."""

    def __init__(self, graph, signals, split="train"):
        signals = np.asarray(signals, dtype=np.float64)
        if signals.ndim != 2:
            raise ValidationError(f"signals must be 2-D, got shape {signals.shape}")
        if signals.shape[0] < 1:
            raise ValidationError("dataset must contain at least one signal")
        if graph is not None and signals.shape[1] != graph.num_nodes:
            raise ValidationError(
                f"signal length {signals.shape[1]} does not match graph size {graph.num_nodes}"
            )
        if not np.all(np.isfinite(signals)):
            raise ValidationError("signals contain non-finite values")
        self.graph = graph
        self.signals = signals
        self.split = split

    @property
    def num_signals(self):
        return self.signals.shape[0]


def _fmt(value):
    return format(float(value), ".17g")


def adjacency_csv_text(graph):
    """Canonical CSV serialization of an adjacency matrix."""
    buf = io.StringIO()
    for row in graph.adjacency:
        buf.write(",".join(_fmt(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


def adjacency_hash(source):
    """Hex digest identifying a graph topology.

    Accepts a Graph (hashes its canonical CSV serialization) or a path to an
    adjacency CSV file (hashes the file bytes). The two agree for files
    written by save_adjacency_csv.
    """
    if isinstance(source, Graph):
        payload = adjacency_csv_text(source).encode()
    else:
        with open(source, "rb") as fh:
            payload = fh.read()
    return hashlib.sha256(payload).hexdigest()


def save_adjacency_csv(path, graph):
    with open(path, "w") as fh:
        fh.write(adjacency_csv_text(graph))


def _parse_float(cell, path, line_no):
    try:
        return float(cell)
    except ValueError:
        raise ValidationError(
            f"{path}: non-numeric cell {cell!r} on line {line_no}"
        ) from None


def load_adjacency_csv(path):
    rows = []
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip() != ""]
    if not lines:
        raise ValidationError(f"{path}: empty adjacency file")
    n = len(lines[0].split(","))
    for i, line in enumerate(lines, start=1):
        cells = line.split(",")
        if len(cells) != n:
            raise ValidationError(
                f"{path}: row on line {i} has {len(cells)} cells, expected {n}"
            )
        rows.append([_parse_float(c, path, i) for c in cells])
    if len(rows) != n:
        raise ValidationError(f"{path}: adjacency has {len(rows)} rows but {n} columns")
    a = np.array(rows, dtype=np.float64)
    mism = np.argwhere(a != a.T)
    if mism.size:
        i, j = mism[0]
        raise ValidationError(
            f"{path}: adjacency asymmetric at ({i},{j}): "
            f"A[{i},{j}]={a[i, j]!r} != A[{j},{i}]={a[j, i]!r} (row line {i + 1})"
        )
    return Graph(a)


def signals_csv_text(signals):
    signals = np.asarray(signals, dtype=np.float64)
    n = signals.shape[1]
    buf = io.StringIO()
    buf.write(",".join(f"node_{i}" for i in range(n)))
    buf.write("\n")
    for row in signals:
        buf.write(",".join(_fmt(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


def save_signals_csv(path, signals):
    with open(path, "w") as fh:
        fh.write(signals_csv_text(signals))


def load_signals_csv(path):
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip() != ""]
    if len(lines) < 2:
        raise ValidationError(f"{path}: needs a header line and at least one signal row")
    header = lines[0].split(",")
    n = len(header)
    if header != [f"node_{i}" for i in range(n)]:
        raise ValidationError(f"{path}: malformed header line")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != n:
            raise ValidationError(
                f"{path}: signal row on line {i} has {len(cells)} cells, expected {n}"
            )
        rows.append([_parse_float(c, path, i) for c in cells])
    return np.array(rows, dtype=np.float64)


def save_community_csv(path, communities):
    with open(path, "w") as fh:
        for c in communities:
            fh.write(f"{int(c)}\n")


def load_community_csv(path):
    values = []
    with open(path) as fh:
        for i, line in enumerate(fh.read().splitlines(), start=1):
            if line.strip() == "":
                continue
            try:
                values.append(int(line.strip()))
            except ValueError:
                raise ValidationError(
                    f"{path}: non-integer community label {line.strip()!r} on line {i}"
                ) from None
    return np.array(values, dtype=np.int64)


def load_dataset_csv(adjacency_path, signals_path, split="train"):
    """Load a (Graph, SignalDataset) pair from CSV files."""
    graph = load_adjacency_csv(adjacency_path)
    signals = load_signals_csv(signals_path)
    if signals.shape[1] != graph.num_nodes:
        raise ValidationError(
            f"{signals_path}: signals have {signals.shape[1]} nodes but the "
            f"adjacency has {graph.num_nodes}"
        )
    return graph, SignalDataset(graph, signals, split=split)
