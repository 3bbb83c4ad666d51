"""Inner-product retrieval store for interface embeddings.

Keys are binding-site embeddings, values the paired binder embeddings.
Scoring defaults to query-key vs stored-key similarity and returns the
paired value vectors as the generation prompt; `score_on="value"`
switches to key-vs-value scoring for ablation. Vectors are stored
un-normalized and scanned brute force (desk scale).

On-disk format: magic "RADB", u32 version, u32 dim, u64 count, then per
entry u16 id length + UTF-8 id, u8 domain tag, dim f32 key, dim f32
value (all little-endian), and a trailing CRC32 of everything before it.
"""

from __future__ import annotations

import math
import os
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .molgraph.types import DOMAIN_TAGS

MAGIC = b"RADB"
FORMAT_VERSION = 1

_TAG_TO_CODE = {tag: i for i, tag in enumerate(DOMAIN_TAGS)}


class DatabaseError(ValueError):
    pass


class DimensionMismatchError(DatabaseError):
    pass


class BadMagicError(DatabaseError):
    pass


class VersionMismatchError(DatabaseError):
    pass


class TruncatedFileError(DatabaseError):
    pass


class ChecksumError(DatabaseError):
    pass


@dataclass
class DatabaseEntry:
    id: str
    key: np.ndarray
    value: np.ndarray
    domain_tag: str = "synthetic"

    def __post_init__(self) -> None:
        self.key = np.ascontiguousarray(self.key, dtype=np.float32)
        self.value = np.ascontiguousarray(self.value, dtype=np.float32)
        if self.key.ndim != 1 or self.key.shape != self.value.shape:
            raise DatabaseError(f"entry {self.id!r}: key/value must be equal-length vectors")
        if not (np.all(np.isfinite(self.key)) and np.all(np.isfinite(self.value))):
            raise DatabaseError(f"entry {self.id!r}: non-finite embedding")
        if self.domain_tag not in _TAG_TO_CODE:
            raise DatabaseError(f"entry {self.id!r}: unknown domain_tag {self.domain_tag!r}")


@dataclass
class Database:
    entries: list[DatabaseEntry] = field(default_factory=list)
    dim: int = 0
    version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        if self.entries and self.dim == 0:
            self.dim = self.entries[0].key.shape[0]
        ids = set()
        for e in self.entries:
            if e.key.shape[0] != self.dim:
                raise DimensionMismatchError(
                    f"entry {e.id!r} has dim {e.key.shape[0]}, database dim {self.dim}"
                )
            if e.id in ids:
                raise DatabaseError(f"duplicate entry id {e.id!r}")
            ids.add(e.id)

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> list[str]:
        return [e.id for e in self.entries]


@dataclass
class RetrievalResult:
    entry_ids: list[str]
    scores: np.ndarray
    prompt: list[np.ndarray]

    def __post_init__(self) -> None:
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if not (len(self.entry_ids) == self.scores.shape[0] == len(self.prompt)):
            raise DatabaseError("result lengths disagree")
        if self.scores.size > 1 and np.any(np.diff(self.scores) > 0):
            raise DatabaseError("scores must be non-increasing")


def _check_key(db: Database, key: np.ndarray) -> np.ndarray:
    key = np.asarray(key, dtype=np.float64).ravel()
    if len(db) and key.shape[0] != db.dim:
        raise DimensionMismatchError(f"query dim {key.shape[0]} != database dim {db.dim}")
    return key


def _scored_order(
    db: Database, key: np.ndarray, exclude: set[str] | frozenset[str], score_on: str
) -> tuple[list[int], np.ndarray]:
    """Indices of non-excluded entries by descending score, ties by id."""
    if score_on not in ("key", "value"):
        raise DatabaseError(f"unknown score_on {score_on!r}")
    key = _check_key(db, key)
    idx = [i for i, e in enumerate(db.entries) if e.id not in exclude]
    if not idx:
        return [], np.zeros(0)
    mat = np.stack([
        db.entries[i].key if score_on == "key" else db.entries[i].value for i in idx
    ]).astype(np.float64)
    scores = mat @ key
    order = sorted(range(len(idx)), key=lambda r: (-scores[r], db.entries[idx[r]].id))
    return [idx[r] for r in order], scores[order]


def _result(db: Database, idx: list[int], scores: np.ndarray) -> RetrievalResult:
    return RetrievalResult(
        entry_ids=[db.entries[i].id for i in idx],
        scores=scores,
        prompt=[db.entries[i].value for i in idx],
    )


def query_topk(
    db: Database,
    key: np.ndarray,
    k: int,
    exclude: set[str] | frozenset[str] = frozenset(),
    score_on: str = "key",
) -> RetrievalResult:
    """Top-k entries by inner product; k=0 gives the unconditional prompt."""
    if k < 0:
        raise DatabaseError("k must be >= 0")
    idx, scores = _scored_order(db, key, exclude, score_on)
    return _result(db, idx[:k], scores[:k])


def query_adaptive(
    db: Database,
    key: np.ndarray,
    threshold: float,
    exclude: set[str] | frozenset[str] = frozenset(),
    score_on: str = "key",
) -> RetrievalResult:
    """All entries scoring strictly above the threshold; may be empty."""
    idx, scores = _scored_order(db, key, exclude, score_on)
    keep = int(np.searchsorted(-scores, -threshold))
    return _result(db, idx[:keep], scores[:keep])


def query_mode(
    db: Database,
    key: np.ndarray,
    mode: str,
    n: int,
    exclude: set[str] | frozenset[str] = frozenset(),
    rng: np.random.Generator | None = None,
    score_on: str = "key",
) -> RetrievalResult:
    """Retrieval-quantity strategies: topN, reverseN, or random."""
    idx, scores = _scored_order(db, key, exclude, score_on)
    if n > len(idx):
        raise DatabaseError(f"n={n} exceeds {len(idx)} available entries")
    if mode == "topN":
        take = range(n)
    elif mode == "reverseN":
        take = range(len(idx) - n, len(idx))
    elif mode == "random":
        if rng is None:
            raise DatabaseError("random mode requires an rng")
        chosen = set(rng.choice(len(idx), size=n, replace=False).tolist())
        take = [r for r in range(len(idx)) if r in chosen]
    else:
        raise DatabaseError(f"unknown retrieval mode {mode!r}")
    take = list(take)
    return _result(db, [idx[r] for r in take], scores[take])


def rc_at(
    db: Database,
    queries: list[tuple[np.ndarray, str]],
    fractions: list[float],
    score_on: str = "key",
) -> dict[float, float]:
    """Recall within the top N% of the database, as percentages.

    Ground truths stay in the database (no exclusion); a query counts for
    fraction f when its truth ranks within ceil(f/100 * |db|).
    """
    ids = db.ids()
    pos_of = {ident: i for i, ident in enumerate(ids)}
    mat = np.stack([
        e.key if score_on == "key" else e.value for e in db.entries
    ]).astype(np.float64)
    ranks = []
    for key, truth_id in queries:
        if truth_id not in pos_of:
            raise DatabaseError(f"truth id {truth_id!r} not in database")
        scores = mat @ _check_key(db, key)
        t = pos_of[truth_id]
        ahead = int(np.sum(scores > scores[t]))
        ahead += sum(
            1 for j in np.nonzero(scores == scores[t])[0] if ids[j] < truth_id
        )
        ranks.append(ahead + 1)
    out = {}
    for frac in fractions:
        cut = math.ceil(frac / 100.0 * len(db))
        hits = sum(1 for r in ranks if r <= cut)
        out[frac] = 100.0 * hits / len(ranks) if ranks else float("nan")
    return out


def save(db: Database, path: str | os.PathLike) -> None:
    parts = [MAGIC, struct.pack("<IIQ", db.version, db.dim, len(db))]
    for e in db.entries:
        ident = e.id.encode("utf-8")
        parts.append(struct.pack("<H", len(ident)))
        parts.append(ident)
        parts.append(struct.pack("<B", _TAG_TO_CODE[e.domain_tag]))
        parts.append(e.key.astype("<f4").tobytes())
        parts.append(e.value.astype("<f4").tobytes())
    payload = b"".join(parts)
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(struct.pack("<I", zlib.crc32(payload)))


def load(path: str | os.PathLike) -> Database:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + 16 + 4:
        raise TruncatedFileError("file too short for a database header")
    payload, crc_bytes = blob[:-4], blob[-4:]
    if payload[:4] != MAGIC:
        raise BadMagicError("bad magic bytes")
    (crc_stored,) = struct.unpack("<I", crc_bytes)
    if zlib.crc32(payload) != crc_stored:
        raise ChecksumError("payload checksum mismatch")
    version, dim, count = struct.unpack_from("<IIQ", payload, 4)
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"format version {version}, expected {FORMAT_VERSION}")
    offset = 4 + 16
    entries = []
    try:
        for _ in range(count):
            (id_len,) = struct.unpack_from("<H", payload, offset)
            offset += 2
            ident = payload[offset : offset + id_len].decode("utf-8")
            offset += id_len
            (tag_code,) = struct.unpack_from("<B", payload, offset)
            offset += 1
            key = np.frombuffer(payload, dtype="<f4", count=dim, offset=offset)
            offset += 4 * dim
            value = np.frombuffer(payload, dtype="<f4", count=dim, offset=offset)
            offset += 4 * dim
            entries.append(
                DatabaseEntry(ident, key.copy(), value.copy(), DOMAIN_TAGS[tag_code])
            )
    except (struct.error, ValueError, IndexError):
        raise TruncatedFileError("file ends inside an entry") from None
    if offset != len(payload):
        raise TruncatedFileError("trailing bytes after final entry")
    return Database(entries=entries, dim=dim, version=version)
