"""File formats: graph JSON, block data and pipeline configs (TOML or JSON),
fixed-precision CSV/JSON writers and run manifests."""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io as _io
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .graph import Graph, GraphError
from .manifold import BlockDataError, BuildingBlocks, EdgeBlock, VertexBlock

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

SIG_DIGITS = 12
ZERO_CUTOFF = 1e-12


class InputError(ValueError):
    """Unreadable or malformed input file."""


# ---------------------------------------------------------------- formatting

def fmt(x: Any) -> str:
    """Fixed 12-significant-digit rendering; tiny values print as 0."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    if abs(x) < ZERO_CUTOFF:
        return "0"
    return format(x, f".{SIG_DIGITS}g")


def canonical(obj: Any) -> Any:
    """Round floats to 12 significant digits recursively, for JSON output."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return 0.0 if abs(x) < ZERO_CUTOFF else float(format(x, f".{SIG_DIGITS}g"))
    if isinstance(obj, Mapping):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [canonical(v) for v in obj]
    return obj


def dumps_json(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


def dumps_csv(header: Sequence[str], rows: Iterable[Sequence[Any]],
              comments: Sequence[str] = ()) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    for line in comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def write_text(path: str | os.PathLike | None, text: str) -> None:
    """Write to ``path`` with ``\\n`` line endings, or to stdout if ``path`` is None or '-'."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------- parsing

def read_text(path: str | os.PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None


def parse_json_text(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def load_structured(path: str | os.PathLike) -> dict:
    """Read a TOML (``.toml``) or JSON file into a dict."""
    text = read_text(path)
    if str(path).endswith(".toml"):
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise InputError(f"{path}: invalid TOML: {exc}") from None
    else:
        data = parse_json_text(text, str(path))
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def graph_from_json_text(text: str, source: str = "<input>") -> Graph:
    data = parse_json_text(text, source)
    try:
        return Graph.from_dict(data)
    except GraphError as exc:
        raise InputError(f"{source}: {exc}") from None


def load_graph(path: str | os.PathLike) -> Graph:
    return graph_from_json_text(read_text(path), str(path))


def dumps_graph(g: Graph) -> str:
    return dumps_json(g.to_dict())


# ---------------------------------------------------------------- block data

def _int_keyed(table: Mapping | None, where: str) -> dict[int, float]:
    out = {}
    for k, v in (table or {}).items():
        try:
            p = int(k)
        except (TypeError, ValueError):
            raise BlockDataError(f"{where}: degree key {k!r} is not an integer") from None
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise BlockDataError(f"{where}: eigenvalue for p={p} must be a number")
        out[p] = float(v)
    return out


def _records(section: Any, count: int, what: str) -> list[dict]:
    """Expand a per-index section: a list, or a table keyed by index with a ``"*"`` default."""
    if section is None:
        section = {}
    if isinstance(section, list):
        if len(section) != count:
            raise BlockDataError(f"{len(section)} {what} records for {count} {what}s")
        return [dict(r) for r in section]
    if not isinstance(section, Mapping):
        raise BlockDataError(f"{what} section must be a list or a table")
    default = dict(section.get("*", {}))
    out = []
    for i in range(count):
        rec = dict(default)
        rec.update(section.get(str(i), {}))
        out.append(rec)
    for key in section:
        if key != "*" and not (key.isdigit() and int(key) < count):
            raise BlockDataError(f"{what} record key {key!r} is not an index below {count}")
    return out


def blocks_from_dict(data: Mapping, graph: Graph) -> BuildingBlocks:
    """Block data for ``graph`` from a config mapping.

    ``vertices`` and ``edges`` are lists or tables keyed by index, where the
    key ``"*"`` supplies defaults.  Eigenvalue tables are keyed by degree p.
    """
    if "dimension" not in data:
        raise BlockDataError("block data needs 'dimension'")
    vrecs = _records(data.get("vertices"), graph.vertex_count, "vertex")
    erecs = _records(data.get("edges"), graph.edge_count, "edge")
    vertices = []
    for i, r in enumerate(vrecs):
        vertices.append(VertexBlock(
            exact_eigenvalues=_int_keyed(r.get("exact_eigenvalues"), f"vertex {i}"),
            betti=tuple(r["betti"]) if "betti" in r else None,
            volume=float(r["volume"]) if "volume" in r else None))
    edges = []
    for i, r in enumerate(erecs):
        edges.append(EdgeBlock(
            exact_eigenvalues=_int_keyed(r.get("exact_eigenvalues"), f"edge {i}"),
            betti=tuple(r["betti"]) if "betti" in r else None,
            volume=float(r.get("volume", 1.0)),
            overlap_eigenvalues=_int_keyed(r.get("overlap_eigenvalues"), f"edge {i}")))
    return BuildingBlocks(
        dimension=int(data["dimension"]),
        vertices=tuple(vertices),
        edges=tuple(edges),
        c_rho=float(data.get("c_rho", 1.0)),
        c_np=float(data.get("c_np", 1.0)),
        rho_model=str(data.get("rho_model", "scaled")),
    )


# ---------------------------------------------------------------- manifests

def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def make_manifest(command: str, params: Mapping, inputs: Sequence[str] = (),
                  seeds: Sequence[int] = ()) -> dict:
    return {
        "command": command,
        "parameters": canonical(dict(params)),
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "version": __version__,
        "seeds": list(seeds),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def manifest_path(output: str | os.PathLike) -> Path:
    return Path(str(output) + ".manifest.json")


def default_seed() -> int | None:
    raw = os.environ.get("GAPFORGE_SEED")
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"GAPFORGE_SEED must be an integer, got {raw!r}") from None
