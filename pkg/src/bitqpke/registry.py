"""Single-use public-key registry.

A directory-backed registry stores ``<key_id>.pub`` per key plus a sidecar
``<key_id>.consumed`` marker whose creation (``O_CREAT | O_EXCL``) is the
atomic check-and-set.  Without a directory the same contract is kept in
memory behind a lock.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import TYPE_CHECKING

from .errors import ParameterError, SingleUseError

if TYPE_CHECKING:
    from .scheme import PublicKey


class KeyRegistry:
    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)
        self._keys: dict[str, PublicKey] = {}
        self._consumed: set[str] = set()
        self._lock = threading.Lock()

    def _pub_path(self, key_id: str) -> Path:
        return self.root / f"{key_id}.pub"

    def _marker_path(self, key_id: str) -> Path:
        return self.root / f"{key_id}.consumed"

    def register(self, pk: PublicKey) -> None:
        if self.root is None:
            with self._lock:
                if pk.key_id in self._keys:
                    raise ParameterError(f"key id {pk.key_id} already registered")
                self._keys[pk.key_id] = pk
            return
        path = self._pub_path(pk.key_id)
        try:
            fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_EXCL, 0o644)
        except FileExistsError:
            raise ParameterError(f"key id {pk.key_id} already registered") from None
        with os.fdopen(fd, "w") as fh:
            fh.write(pk.dumps())

    def key_ids(self) -> list[str]:
        if self.root is None:
            return sorted(self._keys)
        return sorted(p.stem for p in self.root.glob("*.pub"))

    def get(self, key_id: str) -> PublicKey:
        from .scheme import PublicKey

        if self.root is None:
            try:
                return self._keys[key_id]
            except KeyError:
                raise ParameterError(f"unknown key id {key_id}") from None
        path = self._pub_path(key_id)
        if not path.exists():
            raise ParameterError(f"unknown key id {key_id}")
        return PublicKey.loads(path.read_text())

    def is_consumed(self, key_id: str) -> bool:
        if self.root is None:
            return key_id in self._consumed
        return self._marker_path(key_id).exists()

    def consume(self, key_id: str) -> None:
        """Mark ``key_id`` consumed; exactly one caller ever succeeds."""
        self.get(key_id)
        if self.root is None:
            with self._lock:
                if key_id in self._consumed:
                    raise SingleUseError(f"public key {key_id} was already used")
                self._consumed.add(key_id)
            return
        try:
            fd = os.open(self._marker_path(key_id), os.O_WRONLY | os.O_CREAT | os.O_EXCL, 0o644)
        except FileExistsError:
            raise SingleUseError(f"public key {key_id} was already used") from None
        os.close(fd)

    def fetch_for_encryption(self, key_id: str) -> PublicKey:
        pk = self.get(key_id)
        self.consume(key_id)
        return pk
