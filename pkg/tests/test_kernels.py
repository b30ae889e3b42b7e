from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rqa import _pykernels, kernels

M64 = (1 << 64) - 1


def splitmix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def oracle_signature(hashes: list[int], num_hashes: int, seed: int) -> list[int]:
    salts = [splitmix64((seed + (i + 1) * 0x9E3779B97F4A7C15) & M64) for i in range(num_hashes)]
    return [min(splitmix64(h ^ s) for h in hashes) for s in salts]


BACKENDS = kernels.available_backends()


@pytest.mark.parametrize(
    "data, expected",
    [
        (b"", 0xCBF29CE484222325),
        (b"a", 0xAF63DC4C8601EC8C),
        (b"foobar", 0x85944171F73967E8),
    ],
)
def test_fnv1a64_reference_vectors(data, expected):
    assert kernels.fnv1a64(data) == expected
    for name in BACKENDS:
        got = kernels.get_backend(name).fnv1a64_many([data])
        assert int(got[0]) == expected


def test_selected_backend_is_listed():
    assert kernels.BACKEND in BACKENDS
    assert "python" in BACKENDS


@pytest.mark.parametrize("backend", BACKENDS)
def test_signatures_match_pure_python_oracle(backend):
    impl = kernels.get_backend(backend)
    rows = [[1, 2, 3], [M64, 0, 17], [42]]
    hashes = np.array([h for r in rows for h in r], dtype=np.uint64)
    offsets = np.array([0, 3, 6, 7], dtype=np.int64)
    sigs = impl.minhash_signatures(hashes, offsets, kernels.minhash_salts(16, 5))
    for i, r in enumerate(rows):
        assert [int(x) for x in sigs[i]] == oracle_signature(r, 16, 5)


@pytest.mark.parametrize("backend", BACKENDS)
def test_empty_row_is_all_ones(backend):
    impl = kernels.get_backend(backend)
    sigs = impl.minhash_signatures(
        np.array([], dtype=np.uint64), np.array([0, 0], dtype=np.int64), kernels.minhash_salts(4, 0)
    )
    assert all(int(x) == M64 for x in sigs[0])


@settings(max_examples=40, deadline=None)
@given(
    rows=st.lists(st.lists(st.integers(0, M64), min_size=1, max_size=12), min_size=2, max_size=8),
    seed=st.integers(0, 2**32),
    min_matches=st.integers(0, 8),
)
def test_backends_agree(rows, seed, min_matches):
    hashes = np.array([h for r in rows for h in r], dtype=np.uint64)
    offsets = np.cumsum([0] + [len(r) for r in rows]).astype(np.int64)
    salts = kernels.minhash_salts(8, seed)
    outs = []
    for name in BACKENDS:
        impl = kernels.get_backend(name)
        sigs = impl.minhash_signatures(hashes, offsets, salts)
        pairs, matches = impl.similar_pairs(sigs, min_matches)
        outs.append((sigs.tolist(), pairs.tolist(), matches.tolist()))
    assert all(o == outs[0] for o in outs)


def test_similar_pairs_brute_force():
    rng = np.random.default_rng(3)
    sigs = rng.integers(0, 4, size=(12, 10)).astype(np.uint64)
    pairs, matches = _pykernels.similar_pairs(sigs, 4)
    expected = [
        (i, j, int((sigs[i] == sigs[j]).sum()))
        for i in range(12)
        for j in range(i + 1, 12)
        if (sigs[i] == sigs[j]).sum() >= 4
    ]
    assert [(int(a), int(b), int(m)) for (a, b), m in zip(pairs, matches)] == expected


def test_fallback_selected_without_extension():
    code = (
        "import sys; sys.modules['rqa._ckernels'] = None\n"
        "from rqa import kernels, lingo\n"
        "s = lingo.shingles(lingo.tokenize('the pump shall start now'), 2)\n"
        "print(kernels.BACKEND, kernels.available_backends(), len(lingo.minhash_signature(s, 8)))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout
    assert out.split() == ["python", "['python']", "8"]
