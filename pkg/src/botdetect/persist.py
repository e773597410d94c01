"""Versioned plain-text model file format shared by every trainable model.

Layout:

    botdetect-model v1
    meta <key> = <value>
    tensor <name> <n_dims> <d0> <d1> ...
    <row-major values, one row per line, repr-formatted floats>
    end

Float values are written with repr, which round-trips float64 exactly, so a
saved model reloads bit-identically and identical models serialize to
identical bytes.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError

FORMAT_HEADER = "botdetect-model v1"


def save_model(path, meta: dict, arrays: dict[str, np.ndarray]) -> None:
    lines = [FORMAT_HEADER]
    for key, value in meta.items():
        text = str(value)
        if "\n" in text or "\n" in str(key):
            raise ValueError(f"meta entry {key!r} contains a newline")
        lines.append(f"meta {key} = {text}")
    for name, arr in arrays.items():
        arr = np.asarray(arr, dtype=np.float64)
        dims = " ".join(str(d) for d in arr.shape)
        lines.append(f"tensor {name} {arr.ndim} {dims}".rstrip())
        flat = arr.reshape(-1) if arr.ndim != 2 else arr
        if arr.ndim == 2:
            for row in flat:
                lines.append(" ".join(repr(float(v)) for v in row))
        else:
            lines.append(" ".join(repr(float(v)) for v in flat))
    lines.append("end")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path) -> tuple[dict[str, str], dict[str, np.ndarray]]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != FORMAT_HEADER:
        raise ParseError(f"{path}: not a {FORMAT_HEADER!r} file")
    meta: dict[str, str] = {}
    arrays: dict[str, np.ndarray] = {}
    i = 1
    while i < len(lines):
        line = lines[i]
        if line == "end":
            return meta, arrays
        if line.startswith("meta "):
            body = line[len("meta "):]
            key, sep, value = body.partition(" = ")
            if not sep:
                raise ParseError(f"{path}:{i + 1}: malformed meta line")
            meta[key] = value
            i += 1
            continue
        if line.startswith("tensor "):
            parts = line.split()
            name = parts[1]
            ndim = int(parts[2])
            shape = tuple(int(d) for d in parts[3 : 3 + ndim])
            i += 1
            try:
                if ndim == 2:
                    rows = []
                    for _ in range(shape[0]):
                        rows.append([float(v) for v in lines[i].split()])
                        i += 1
                    arr = np.array(rows, dtype=np.float64).reshape(shape)
                else:
                    values = [float(v) for v in lines[i].split()]
                    i += 1
                    arr = np.array(values, dtype=np.float64).reshape(shape)
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}: tensor {name}: {exc}") from exc
            arrays[name] = arr
            continue
        raise ParseError(f"{path}:{i + 1}: unexpected line {line!r}")
    raise ParseError(f"{path}: missing end marker")
