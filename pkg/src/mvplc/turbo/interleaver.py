"""Couple-level turbo interleaver.

A permutation is stored as ``target``: input couple ``i`` lands at output
position ``target[i]``.  Couples landing on odd output positions additionally
have their two bits swapped.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

# symbol index 2*u1 + u2 after swapping u1 and u2
SWAP_SYMBOL = np.array([0, 2, 1, 3])


def s_random_permutation(n: int, spread: int | None = None, seed: int = 0,
                         restarts: int = 20) -> np.ndarray:
    """Seeded S-random permutation.

    Indices placed within ``spread`` positions of each other should differ by
    more than ``spread`` (default ``floor(sqrt(n / 2)) - 1``).  When no
    remaining index qualifies, the one farthest from its recent neighbours is
    taken instead; the attempt with the fewest such violations is returned.
    """
    rng = np.random.default_rng(seed)
    if spread is None:
        spread = max(int(np.floor(np.sqrt(n / 2))) - 1, 0)
    best, best_bad = None, None
    for _ in range(restarts):
        remaining = rng.permutation(n)
        placed = np.empty(n, dtype=np.int64)
        bad = 0
        for j in range(n):
            recent = placed[max(0, j - spread):j]
            pick = 0
            if len(recent):
                dist = np.abs(remaining[:, None] - recent[None, :]).min(axis=1)
                hits = np.flatnonzero(dist > spread)
                if len(hits):
                    pick = hits[0]
                else:
                    pick = int(np.argmax(dist))
                    bad += 1
            placed[j] = remaining[pick]
            remaining = np.delete(remaining, pick)
        if best_bad is None or bad < best_bad:
            best, best_bad = placed, bad
        if bad == 0:
            break
    # best[j] is the source of output position j
    return np.argsort(best).astype(np.int64)


class PairInterleaver:
    def __init__(self, target):
        target = np.asarray(target, dtype=np.int64)
        n = len(target)
        if not np.array_equal(np.sort(target), np.arange(n)):
            raise ValueError("interleaver target indices must be a permutation of 0..n-1")
        self.target = target
        self.source = np.argsort(target)
        self.odd = (np.arange(n) % 2) == 1

    def __len__(self) -> int:
        return len(self.target)

    def _check(self, x):
        if len(x) != len(self):
            raise ValueError(f"expected {len(self)} couples, got {len(x)}")

    def interleave(self, pairs: np.ndarray) -> np.ndarray:
        """Permute ``(n, 2)`` couples (bits or LLRs) into ENC2 order."""
        pairs = np.asarray(pairs)
        self._check(pairs)
        out = pairs[self.source].copy()
        out[self.odd] = out[self.odd][:, ::-1]
        return out

    def deinterleave(self, pairs: np.ndarray) -> np.ndarray:
        pairs = np.asarray(pairs)
        self._check(pairs)
        tmp = pairs.copy()
        tmp[self.odd] = tmp[self.odd][:, ::-1]
        return tmp[self.target]

    def interleave_symbols(self, metrics: np.ndarray) -> np.ndarray:
        """Permute ``(n, 4)`` per-couple symbol metrics into ENC2 order."""
        self._check(metrics)
        out = metrics[self.source].copy()
        out[self.odd] = out[self.odd][:, SWAP_SYMBOL]
        return out

    def deinterleave_symbols(self, metrics: np.ndarray) -> np.ndarray:
        self._check(metrics)
        tmp = metrics.copy()
        tmp[self.odd] = tmp[self.odd][:, SWAP_SYMBOL]
        return tmp[self.target]


def write_permutation(path, target, pb_size: int | None) -> None:
    label = pb_size if pb_size is not None else "custom"
    lines = [f"# PB_Size {label}", f"# couples {len(target)}"]
    lines += [str(int(t)) for t in target]
    Path(path).write_text("\n".join(lines) + "\n")


def read_permutation(path) -> tuple[int | None, np.ndarray]:
    """Parse a permutation file, returning ``(pb_size, target)``."""
    pb_size = None
    values = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "PB_Size" and parts[1].isdigit():
                pb_size = int(parts[1])
            continue
        values.append(int(line))
    return pb_size, np.asarray(values, dtype=np.int64)


def permutation_file(pb_size: int) -> Path:
    return Path(str(resources.files("mvplc") / "data" / f"interleaver_pb{pb_size}.txt"))


def default_seed(pb_size: int) -> int:
    return 1901 + pb_size
