"""Hot kernels behind a single import point.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy versions in ``_pykernels`` are loaded. Both produce identical outputs.

Hashing is fixed across platforms: shingles are hashed with 64-bit FNV-1a over
their UTF-8 bytes, and MinHash permutation ``i`` is ``splitmix64(x ^ salt_i)``
where ``salt_i = splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2**64``.
"""
from __future__ import annotations

import importlib
from types import ModuleType

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

try:
    from rqa import _ckernels as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build
    from rqa import _pykernels as _impl

    BACKEND = "python"


def mix64(z: int) -> int:
    """splitmix64 finalizer on Python ints."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for byte in data:
        h = ((h ^ byte) * 0x100000001B3) & _MASK
    return h


def minhash_salts(num_hashes: int, seed: int) -> np.ndarray:
    seed &= _MASK
    return np.array(
        [mix64(seed + (i + 1) * _GOLDEN) for i in range(num_hashes)], dtype=np.uint64
    )


def available_backends() -> list[str]:
    names = ["python"]
    try:
        importlib.import_module("rqa._ckernels")
    except ImportError:
        return names
    return ["compiled", *names]


def get_backend(name: str) -> ModuleType:
    if name == "compiled":
        return importlib.import_module("rqa._ckernels")
    if name == "python":
        return importlib.import_module("rqa._pykernels")
    raise ValueError(f"unknown kernel backend {name!r}")


fnv1a64_many = _impl.fnv1a64_many
minhash_signatures = _impl.minhash_signatures
similar_pairs = _impl.similar_pairs
