#!/usr/bin/env python3
"""Compare the compiled and pure-Python matcher kernels.

Builds a synthetic treebank of long sentences, runs a set of
representative search patterns through both kernels, and prints per-query
timings.  Usage:

    python benchmarks/bench_backends.py [--sentences N] [--length L] [--repeat R]
"""

import argparse
import time
from random import Random

import semgrex
from semgrex import DepGraph, Node, NodeId, find_matches, parse_pattern

LABELS = ["nsubj", "obj", "det", "amod", "conj", "aux", "advmod", "nmod",
          "case", "mark", "obl", "cc"]
WORDS = ["the", "a", "dog", "cat", "sees", "runs", "fast", "green", "house",
         "bird", "over", "under", "sings", "Maria", "Tom", "happily"]
TAGS = ["NN", "NNP", "VBD", "DT", "JJ", "RB", "IN"]

PATTERNS = [
    "{tag:NN} <nsubj {}",
    "{} >nsubj {} >obj {}",
    "{tag:/NN.*/} >> {word:the}",
    "{} >conj=c ({}=x >det {}) $++ {}=y",
    "{word:sees} >obl ({} >case {word:/over|under/})",
    "{} !>det {} <amod {}",
]


def build_corpus(n_sentences: int, length: int, seed: int) -> list[DepGraph]:
    rng = Random(seed)
    corpus = []
    for _ in range(n_sentences):
        g = DepGraph()
        for i in range(1, length + 1):
            node = Node(NodeId(i), rng.choice(WORDS))
            node.tag = rng.choice(TAGS)
            g.add_node(node)
        order = rng.sample(range(1, length + 1), length)
        for i in range(1, length):
            g.add_edge(NodeId(order[rng.randrange(i)]), NodeId(order[i]),
                       rng.choice(LABELS))
        for _ in range(max(1, length // 8)):
            gov, dep = rng.randint(1, length), rng.randint(1, length)
            if gov != dep:
                g.add_edge(NodeId(gov), NodeId(dep), rng.choice(LABELS))
        corpus.append(g)
    return corpus


def run_backend(backend: str, corpus, patterns, repeat: int) -> tuple[float, int]:
    semgrex.set_backend(backend)
    total_matches = 0
    best = float("inf")
    for _ in range(repeat):
        for g in corpus:
            g._snap = None  # drop cached kernel state so each pass rebuilds it
        start = time.perf_counter()
        found = 0
        for g in corpus:
            for p in patterns:
                found += len(find_matches(g, p))
        best = min(best, time.perf_counter() - start)
        total_matches = found
    return best, total_matches


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sentences", type=int, default=120)
    parser.add_argument("--length", type=int, default=35)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=9)
    args = parser.parse_args()

    corpus = build_corpus(args.sentences, args.length, args.seed)
    patterns = [parse_pattern(p) for p in PATTERNS]
    backends = semgrex.available_backends()
    print(f"corpus: {args.sentences} sentences x {args.length} tokens;"
          f" {len(patterns)} patterns; best of {args.repeat}")
    results = {}
    for backend in backends:
        elapsed, matches = run_backend(backend, corpus, patterns, args.repeat)
        results[backend] = elapsed
        rate = args.sentences * len(patterns) / elapsed
        print(f"  {backend:>8}: {elapsed * 1000:8.1f} ms"
              f"  ({rate:8.0f} sentence-queries/s, {matches} matches)")
    if "compiled" in results and "pure" in results:
        print(f"  speedup: {results['pure'] / results['compiled']:.2f}x")


if __name__ == "__main__":
    main()
