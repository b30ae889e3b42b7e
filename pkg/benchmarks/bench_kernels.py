"""Compare the compiled and numpy kernel backends on shingle hashing, MinHash and pair search.

    python benchmarks/bench_kernels.py [--docs 5000] [--hashes 128] [--repeat 5]
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from rqa import kernels, lingo
from rqa.synth import requirement_texts


def corpus_inputs(n_docs: int, seed: int):
    texts = requirement_texts(n_docs, seed)
    rng = random.Random(seed)
    grams, per_doc = [], []
    for t in texts:
        words = lingo.shingle_words(lingo.tokenize(t))
        if rng.random() < 0.1:
            words = words + words[: rng.randint(1, 4)]
        doc = ["\x1f".join(words[i : i + 3]).encode() for i in range(len(words) - 2)]
        grams.extend(doc)
        per_doc.append(len(doc))
    return grams, per_doc


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=5000)
    ap.add_argument("--hashes", type=int, default=128)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grams, per_doc = corpus_inputs(args.docs, args.seed)
    offsets = np.concatenate([[0], np.cumsum(per_doc)]).astype(np.int64)
    salts = kernels.minhash_salts(args.hashes, args.seed)
    backends = {name: kernels.get_backend(name) for name in kernels.available_backends()}
    print(f"{args.docs} documents, {len(grams)} shingles, {args.hashes} hashes; backends: {', '.join(backends)}")

    hashes = {}
    sigs = {}
    results: dict[str, dict[str, float]] = {}
    for name, mod in backends.items():
        hashes[name] = mod.fnv1a64_many(grams)
        flat = np.concatenate([np.unique(hashes[name][a:b]) for a, b in zip(offsets[:-1], offsets[1:])])
        lens = [len(np.unique(hashes[name][a:b])) for a, b in zip(offsets[:-1], offsets[1:])]
        uoff = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
        sigs[name] = mod.minhash_signatures(flat, uoff, salts)
        min_matches = int(0.5 * args.hashes)
        results[name] = {
            "fnv1a64": best_of(lambda: mod.fnv1a64_many(grams), args.repeat),
            "minhash": best_of(lambda: mod.minhash_signatures(flat, uoff, salts), args.repeat),
            "pairs": best_of(lambda: mod.similar_pairs(sigs[name], min_matches), args.repeat),
        }

    if len(backends) == 2:
        same = (np.array_equal(hashes["compiled"], hashes["python"])
                and np.array_equal(sigs["compiled"], sigs["python"]))
        print(f"outputs identical across backends: {same}")

    header = f"{'kernel':<10}" + "".join(f"{n:>14}" for n in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for kernel in ("fnv1a64", "minhash", "pairs"):
        row = f"{kernel:<10}" + "".join(f"{results[n][kernel] * 1e3:>12.2f}ms" for n in backends)
        if len(backends) == 2:
            row += f"{results['python'][kernel] / results['compiled'][kernel]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
