"""
Run bookkeeping helpers: ULID run ids, UTC timestamps and file checksums.
"""
import hashlib
from datetime import datetime, timezone
from os import PathLike

from ulid import ULID

from lexcluster.core.errors import DataError


def generate_ulid() -> str:
    """New ULID run id as a string."""
    return str(ULID())


def utc_now() -> datetime:
    """Timezone-aware current UTC time."""
    return datetime.now(timezone.utc)


def file_sha256(path: str | PathLike, chunk_size: int = 1 << 20) -> str:
    """Hex SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as f:
            while chunk := f.read(chunk_size):
                digest.update(chunk)
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}")
    return digest.hexdigest()
