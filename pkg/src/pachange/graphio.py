"""Graph file formats.

Binary ("PACG"): little-endian header
    magic "PACG" | version u16 | n u64 | m u16 | delta f64 | delta_prime f64
    | tau u64 | seed u64
followed by m(n-2) record targets as u64 in lexicographic (t, i) order.

Text: JSON lines; a header object, then one {"t": , "i": , "target": } per
record in the same order.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .model import DeltaSchedule, EvolvingGraph

MAGIC = b"PACG"
VERSION = 1
_HEADER = struct.Struct("<4sHQHddQQ")


def save_binary(graph: EvolvingGraph, path) -> None:
    s = graph.schedule
    header = _HEADER.pack(
        MAGIC, VERSION, graph.n, graph.m, float(s.delta), float(s.delta_prime),
        s.tau, graph.seed if graph.seed is not None else 0,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(graph.targets.astype("<u8").tobytes())


def load_binary(path) -> EvolvingGraph:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size or data[:4] != MAGIC:
        raise ValueError(f"{path} is not a PACG graph file")
    magic, version, n, m, delta, delta_prime, tau, seed = _HEADER.unpack_from(data)
    if version != VERSION:
        raise ValueError(f"unsupported PACG version {version}")
    body = np.frombuffer(data, dtype="<u8", offset=_HEADER.size)
    if body.shape[0] != m * (n - 2):
        raise ValueError(f"expected {m * (n - 2)} records, file has {body.shape[0]}")
    return EvolvingGraph(
        n, m, body.astype(np.int64), DeltaSchedule(delta, delta_prime, tau), seed
    )


def save_jsonl(graph: EvolvingGraph, path) -> None:
    s = graph.schedule
    header = {
        "format": "pacg",
        "version": VERSION,
        "n": graph.n,
        "m": graph.m,
        "delta": float(s.delta),
        "delta_prime": float(s.delta_prime),
        "tau": s.tau,
        "seed": graph.seed if graph.seed is not None else 0,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for rec in graph.records():
            fh.write(f'{{"t":{rec.t},"i":{rec.i},"target":{rec.target}}}\n')


def load_jsonl(path) -> EvolvingGraph:
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("format") != "pacg":
            raise ValueError(f"{path} is not a pacg JSONL file")
        n, m = header["n"], header["m"]
        targets = np.empty(m * (n - 2), dtype=np.int64)
        count = 0
        for line in fh:
            rec = json.loads(line)
            t, i = rec["t"], rec["i"]
            if not (3 <= t <= n and 1 <= i <= m):
                raise ValueError(f"record ({t},{i}) outside the graph's index set")
            targets[(t - 3) * m + i - 1] = rec["target"]
            count += 1
        if count != targets.shape[0]:
            raise ValueError(f"expected {targets.shape[0]} records, file has {count}")
    return EvolvingGraph(
        n, m, targets,
        DeltaSchedule(header["delta"], header["delta_prime"], header["tau"]),
        header["seed"],
    )
