"""Pre-trained word-vector loading and sequence embedding.

Vector files use the GloVe text format: one token followed by its components
per line, no header. Embeddings are frozen; they are never trained here.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, ParseError

# Dimensions of the published Twitter GloVe releases. Other dimensions are
# accepted (small fixtures use d=2); the CLI restricts itself to these four.
CANONICAL_DIMENSIONS = (25, 50, 100, 200)

DEFAULT_MAX_LEN = 30


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vocabulary: dict[str, int]
    vectors: np.ndarray
    unknown_vector: np.ndarray
    pad_vector: np.ndarray

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.vectors.shape != (len(self.vocabulary), self.dimension):
            raise ValueError("vectors shape does not match vocabulary")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("vectors contain non-finite entries")
        if np.any(self.pad_vector != 0.0):
            raise ValueError("pad vector must be exactly zero")
        self.vectors.setflags(write=False)

    def lookup(self, token: str) -> np.ndarray:
        idx = self.vocabulary.get(token)
        if idx is None:
            return self.unknown_vector
        return self.vectors[idx]

    def content_hash(self) -> str:
        """Deterministic fingerprint of dimension, vocabulary, and values."""
        h = hashlib.sha256()
        h.update(str(self.dimension).encode())
        for token, idx in sorted(self.vocabulary.items()):
            h.update(token.encode("utf-8"))
            h.update(str(idx).encode())
        h.update(np.ascontiguousarray(self.vectors).tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class EmbeddedSequence:
    """A max_len x d matrix; rows at and beyond true_length are padding."""

    matrix: np.ndarray
    true_length: int

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ValueError("embedded matrix must be 2-d")
        if not 0 <= self.true_length <= self.matrix.shape[0]:
            raise ValueError("true_length out of range")
        self.matrix.setflags(write=False)


def _build_table(tokens: list[str], rows: list[np.ndarray], dimension: int) -> EmbeddingTable:
    vocabulary = {tok: i for i, tok in enumerate(tokens)}
    if rows:
        vectors = np.vstack(rows).astype(np.float64)
        unknown = vectors.mean(axis=0)
    else:
        vectors = np.zeros((0, dimension), dtype=np.float64)
        unknown = np.zeros(dimension, dtype=np.float64)
    unknown.setflags(write=False)
    pad = np.zeros(dimension, dtype=np.float64)
    pad.setflags(write=False)
    return EmbeddingTable(
        dimension=dimension,
        vocabulary=vocabulary,
        vectors=vectors,
        unknown_vector=unknown,
        pad_vector=pad,
    )


def load_glove(
    path,
    expected_dimension: int,
    restrict_to: Iterable[str] | None = None,
) -> EmbeddingTable:
    """Load a GloVe-format text file.

    Duplicate tokens keep their first occurrence. The unknown-token vector is
    the component-wise mean of all loaded vectors (distinct from the all-zero
    padding vector). ``restrict_to`` keeps memory bounded by loading only the
    given tokens.
    """
    keep = set(restrict_to) if restrict_to is not None else None
    tokens: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != expected_dimension + 1:
                raise DimensionMismatch(
                    f"line {lineno}: expected {expected_dimension + 1} fields, "
                    f"got {len(parts)}"
                )
            token = parts[0]
            if token in seen:
                continue
            try:
                vec = np.array([float(p) for p in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            if not np.all(np.isfinite(vec)):
                raise ParseError(f"line {lineno}: non-finite component")
            seen.add(token)
            if keep is not None and token not in keep:
                continue
            tokens.append(token)
            rows.append(vec)
    return _build_table(tokens, rows, expected_dimension)


def embed(
    tokens: list[str],
    table: EmbeddingTable,
    max_len: int = DEFAULT_MAX_LEN,
    truncation: str = "tail",
) -> EmbeddedSequence:
    """Map tokens to a fixed-length padded matrix of vectors.

    Out-of-vocabulary tokens map to the table's unknown vector. Sequences
    longer than max_len lose their tail by default ("head" keeps the tail
    instead); shorter sequences are zero-padded at the end.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if truncation not in ("tail", "head"):
        raise ValueError("truncation must be 'tail' or 'head'")
    if len(tokens) > max_len:
        kept = tokens[:max_len] if truncation == "tail" else tokens[-max_len:]
    else:
        kept = tokens
    matrix = np.zeros((max_len, table.dimension), dtype=np.float64)
    for i, tok in enumerate(kept):
        matrix[i] = table.lookup(tok)
    return EmbeddedSequence(matrix=matrix, true_length=len(kept))


def most_frequent_tokens(sequences: Iterable[list[str]], n: int) -> set[str]:
    """The n most frequent tokens of a corpus; ties resolve alphabetically."""
    counts = Counter()
    for seq in sequences:
        counts.update(seq)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return {tok for tok, _ in ranked[:n]}


def fixture_table(tokens: Iterable[str], dimension: int, seed: int) -> EmbeddingTable:
    """Seeded random embedding table over the given tokens, for desk tests."""
    ordered = sorted(set(tokens))
    rng = np.random.Generator(np.random.PCG64(seed))
    vectors = rng.standard_normal((len(ordered), dimension)) / np.sqrt(dimension)
    return _build_table(ordered, [v for v in vectors], dimension)


def write_glove_file(table: EmbeddingTable, path) -> None:
    """Write a table back out in GloVe text format (round-trips exactly)."""
    by_index = sorted(table.vocabulary.items(), key=lambda kv: kv[1])
    with open(path, "w", encoding="utf-8") as fh:
        for token, idx in by_index:
            comps = " ".join(repr(float(v)) for v in table.vectors[idx])
            fh.write(f"{token} {comps}\n")


def pipeline_fingerprint(
    table: EmbeddingTable,
    max_len: int,
    truncation: str,
    repeat_tag: bool,
) -> str:
    """Hash identifying the tokenizer+embedding configuration of a model."""
    h = hashlib.sha256()
    h.update(table.content_hash().encode())
    h.update(f"|max_len={max_len}|trunc={truncation}|repeat={repeat_tag}".encode())
    return h.hexdigest()
