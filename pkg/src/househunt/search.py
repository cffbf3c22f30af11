"""Exhaustive search over monic palindromic polynomials of bounded height.

A reciprocal polynomial of even degree d is fixed by its half list
``(1, a_{d-1}, ..., a_{d/2})``. The d/2 interior coefficients are enumerated
as an odometer whose most significant digit is ``a_{d-1}``, so the linear
position orders half lists lexicographically. A shard is a contiguous
range of positions, and a checkpoint is a single integer.

Since P(x) and P(-x) share their house, only the representative whose first
nonzero odd-position half coefficient is positive is visited.

Per batch, the filters run cheapest first: canonical form, optional
nonprimitive skip, lemma templates, exact sign probes for a large real root,
batched float house. Survivors get a square-free test, a certified house and
the irreducibility gate.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .algebra import Kind, minimal_gate
from .bounds import (
    LEMMA_ALPHABET,
    LEMMA_BOUND,
    LEMMA_M_VALUES,
    LEMMA_MIN_DEGREE,
    lemma_head,
    composite_prediction,
    upper_bound_witness,
)
from .poly import IntPolynomial, compose_power, is_squarefree
from .roots import batch_float_houses, count_outside_unit, house

TIE_TOL = 2e-13
FLOAT_MARGIN = 1e-6
SIGN_PROBES = (Fraction(3, 2), Fraction(2), Fraction(3))
BATCH = 4096
CHECKPOINT_VERSION = "househunt-search-checkpoint v1"
CHECKPOINT_ENV = "HOUSEHUNT_CHECKPOINT_DIR"


class SearchError(ValueError):
    pass


def default_height(d: int) -> int:
    if d <= 10:
        return 3
    if d <= 20:
        return 2
    return 1


@dataclass(frozen=True)
class SearchConfig:
    degree: int
    height: int
    threshold: float | None = None
    prune_lemmas: bool = True
    prune_real_root: bool = True
    partitions: tuple[int, int] = (0, 1)
    checkpoint_path: str | None = None
    skip_nonprimitive: bool = False

    def __post_init__(self) -> None:
        if self.degree < 2 or self.degree % 2:
            raise SearchError("degree must be even and >= 2")
        if self.height < 0:
            raise SearchError("height must be non-negative")
        if self.threshold is None:
            object.__setattr__(self, "threshold", upper_bound_witness(self.degree, reciprocal=True)[1])
        if not self.threshold > 1:
            raise SearchError("threshold must exceed 1")
        i, n = self.partitions
        if not (n >= 1 and 0 <= i < n):
            raise SearchError(f"bad partition {i}/{n}")

    @property
    def width(self) -> int:
        """Number of interior half coefficients."""
        return self.degree // 2

    @property
    def space_size(self) -> int:
        return (2 * self.height + 1) ** self.width

    def shard_range(self) -> tuple[int, int]:
        i, n = self.partitions
        size = self.space_size
        return size * i // n, size * (i + 1) // n

    def same_space(self, other: SearchConfig) -> bool:
        return (self.degree, self.height, self.threshold) == (other.degree, other.height, other.threshold)


@dataclass(frozen=True, order=True)
class Hit:
    house: float
    half: tuple[int, ...]
    nu: int

    @property
    def poly(self) -> IntPolynomial:
        return IntPolynomial.from_half(self.half)


@dataclass(frozen=True)
class ExtremalRecord:
    degree: int
    height: int
    threshold: float
    best_house: float
    best_poly: IntPolynomial | None
    nu: int | None
    ties: tuple[Hit, ...]
    candidates_below_threshold: tuple[Hit, ...]
    visited: int = 0

    @property
    def found(self) -> bool:
        return self.best_poly is not None

    def key(self) -> tuple:
        """Everything that must agree between equivalent runs."""
        best = self.best_poly.half() if self.best_poly else None
        return (self.degree, self.best_house, best, self.nu, self.ties, self.candidates_below_threshold)


# -- enumeration ---------------------------------------------------------------------


def _digits(start: int, stop: int, width: int, height: int) -> np.ndarray:
    """Interior coefficient rows for linear positions [start, stop)."""
    base = 2 * height + 1
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), width), dtype=np.int64)
    for col in range(width - 1, -1, -1):
        out[:, col] = idx % base
        idx //= base
    return out - height


def canonical_mask(interior: np.ndarray) -> np.ndarray:
    """Rows whose first nonzero odd-position half coefficient is positive.

    Interior column c holds half position c + 1, the coefficient of x^(d-c-1);
    odd half positions are the even columns.
    """
    odd = interior[:, 0::2]
    nz = odd != 0
    first = np.argmax(nz, axis=1)
    lead = odd[np.arange(len(odd)), first]
    return ~nz.any(axis=1) | (lead > 0)


def _exponent_gcd_mask(interior: np.ndarray, d: int) -> np.ndarray:
    """Rows whose polynomial is Q(x^k) for some k >= 2."""
    g = np.full(len(interior), d, dtype=np.int64)
    for c in range(interior.shape[1]):
        exp = d - c - 1
        g = np.where(interior[:, c] != 0, np.gcd(g, exp), g)
    return g > 1


def _iter_batches(config: SearchConfig, start: int, stop: int) -> Iterator[tuple[int, np.ndarray]]:
    for lo in range(start, stop, BATCH):
        hi = min(stop, lo + BATCH)
        yield hi, _digits(lo, hi, config.width, config.height)


def enumerate_half(config: SearchConfig, visitor: Callable[[tuple[int, ...]], object]) -> int:
    """Call ``visitor`` on every canonical half list of the configured shard, in order."""
    start, stop = config.shard_range()
    count = 0
    for _, interior in _iter_batches(config, start, stop):
        for row in interior[canonical_mask(interior)]:
            visitor((1,) + tuple(int(c) for c in row))
            count += 1
    return count


def _full_descending(interior: np.ndarray) -> np.ndarray:
    ones = np.ones((len(interior), 1), dtype=np.int64)
    return np.hstack([ones, interior, interior[:, -2::-1], ones])


# -- pruning -------------------------------------------------------------------------


def _lemma_mask(interior: np.ndarray, d: int, cutoff: float) -> np.ndarray:
    """Rows where P(x) or P(-x) matches a template forcing a real root above the cutoff."""
    hit = np.zeros(len(interior), dtype=bool)
    signs = np.where(np.arange(interior.shape[1]) % 2 == 0, -1, 1)
    for rows in (interior, interior * signs):
        for which in ("Lemma1", "Lemma2", "Lemma3"):
            if d < LEMMA_MIN_DEGREE[which] or not cutoff < LEMMA_BOUND[which]:
                continue
            alphabet = LEMMA_ALPHABET[which]
            for m in LEMMA_M_VALUES[which]:
                head = np.array(lemma_head(which, m)[1:])
                ok = np.all(rows[:, : len(head)] == head, axis=1)
                rest = rows[:, len(head):]
                ok &= np.all((rest >= alphabet.start) & (rest < alphabet.stop), axis=1)
                hit |= ok
    return hit


def _probe_weights(d: int, t: Fraction) -> list[int]:
    """den^d * t^k for k = d .. 0, matching descending coefficients."""
    return [t.numerator**k * t.denominator ** (d - k) for k in range(d, -1, -1)]


def _sign_probe_mask(desc: np.ndarray, d: int, height: int, cutoff: float) -> np.ndarray:
    """Rows with a certified real root of modulus above the cutoff.

    The leading coefficient is +1 and d is even, so P is positive at both
    infinities; P(t) <= 0 or P(-t) <= 0 at a probe t > cutoff places a real root
    beyond +-t.
    """
    reject = np.zeros(len(desc), dtype=bool)
    for t in SIGN_PROBES:
        if not t > cutoff:
            continue
        for s in (t, -t):
            w = _probe_weights(d, s)
            bound = max(1, height) * sum(abs(x) for x in w)
            if bound < 2**62:
                vals = desc @ np.array(w, dtype=np.int64)
            else:
                vals = desc.astype(object) @ np.array(w, dtype=object)
            reject |= vals <= 0
    return reject


# -- record keeping ------------------------------------------------------------------


@dataclass
class _State:
    position: int
    visited: int = 0
    hits: dict[tuple[int, ...], Hit] = field(default_factory=dict)
    best: float = math.inf

    def cutoff(self, threshold: float) -> float:
        return max(threshold, self.best + TIE_TOL)

    def add(self, hit: Hit, threshold: float) -> None:
        self.hits[hit.half] = hit
        if hit.house < self.best:
            self.best = hit.house
            keep = self.cutoff(threshold)
            self.hits = {k: h for k, h in self.hits.items() if h.house < keep}


def _record(config: SearchConfig, hits: Iterable[Hit], visited: int) -> ExtremalRecord:
    hits = sorted(set(hits))
    if not hits:
        return ExtremalRecord(
            config.degree, config.height, config.threshold, math.inf, None, None, (), (), visited
        )
    best = hits[0].house
    ties = tuple(sorted((h for h in hits if h.house - best <= TIE_TOL), key=lambda h: h.half))
    winner = ties[0]
    below = tuple(h for h in hits if h.house < config.threshold)
    return ExtremalRecord(
        degree=config.degree,
        height=config.height,
        threshold=config.threshold,
        best_house=best,
        best_poly=winner.poly,
        nu=winner.nu,
        ties=ties,
        candidates_below_threshold=below,
        visited=visited,
    )


# -- checkpoints ---------------------------------------------------------------------


def checkpoint_file(config: SearchConfig, directory: str | os.PathLike | None = None) -> Path | None:
    """Explicit path, or a name inside the checkpoint directory from the environment."""
    if config.checkpoint_path:
        return Path(config.checkpoint_path)
    directory = directory or os.environ.get(CHECKPOINT_ENV)
    if not directory:
        return None
    i, n = config.partitions
    return Path(directory) / f"search-d{config.degree}-h{config.height}-s{i}of{n}.ckpt"


def _header(config: SearchConfig) -> list[str]:
    i, n = config.partitions
    return [
        CHECKPOINT_VERSION,
        f"degree {config.degree}",
        f"height {config.height}",
        f"threshold {config.threshold!r}",
        f"shard {i} {n}",
        f"prune {int(config.prune_lemmas)} {int(config.prune_real_root)} {int(config.skip_nonprimitive)}",
    ]


def save_checkpoint(path: Path, config: SearchConfig, state: _State) -> None:
    lines = _header(config) + [f"position {state.position}", f"visited {state.visited}"]
    for h in sorted(state.hits.values()):
        lines.append(f"hit {h.house!r} {h.nu} " + " ".join(map(str, h.half)))
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.parent.mkdir(parents=True, exist_ok=True)
    tmp.write_text("\n".join(lines) + "\n")
    os.replace(tmp, path)


def load_checkpoint(path: Path, config: SearchConfig) -> _State:
    lines = path.read_text().splitlines()
    header = _header(config)
    if lines[: len(header)] != header:
        raise SearchError(f"checkpoint {path} was written for a different search")
    state = _State(position=0)
    for line in lines[len(header):]:
        key, _, rest = line.partition(" ")
        if key == "position":
            state.position = int(rest)
        elif key == "visited":
            state.visited = int(rest)
        elif key == "hit":
            parts = rest.split()
            hit = Hit(float(parts[0]), tuple(int(x) for x in parts[2:]), int(parts[1]))
            state.hits[hit.half] = hit
            state.best = min(state.best, hit.house)
        else:
            raise SearchError(f"unreadable checkpoint line {line!r}")
    return state


# -- search --------------------------------------------------------------------------


def _examine(half: tuple[int, ...]) -> Hit | None:
    p = IntPolynomial.from_half(half)
    if not is_squarefree(p):
        return None
    h, _ = house(p)
    return Hit(h, half, -1)


def search_extremal(
    config: SearchConfig,
    progress: Callable[[int, int], None] | None = None,
    checkpoint_every: float = 30.0,
) -> ExtremalRecord:
    """Minimum house over all Candidate polynomials of the shard, with candidates below threshold."""
    d, height = config.degree, config.height
    start, stop = config.shard_range()
    path = checkpoint_file(config)
    state = load_checkpoint(path, config) if path and path.exists() else _State(position=start)
    last_save = time.monotonic()

    for hi, interior in _iter_batches(config, state.position, stop):
        mask = canonical_mask(interior)
        if config.skip_nonprimitive:
            mask &= ~_exponent_gcd_mask(interior, d)
        rows = interior[mask]
        state.visited += len(rows)
        cutoff = state.cutoff(config.threshold)
        if config.prune_lemmas and len(rows):
            rows = rows[~_lemma_mask(rows, d, cutoff)]
        desc = _full_descending(rows)
        if config.prune_real_root and len(rows) and math.isfinite(cutoff):
            keep = ~_sign_probe_mask(desc, d, height, cutoff)
            rows, desc = rows[keep], desc[keep]
        if len(rows):
            approx = batch_float_houses(desc.astype(float))
            order = np.nonzero(approx <= cutoff + FLOAT_MARGIN)[0]
            for j in order:
                if approx[j] > state.cutoff(config.threshold) + FLOAT_MARGIN:
                    continue
                half = (1,) + tuple(int(c) for c in rows[j])
                hit = _examine(half)
                if hit is None or hit.house >= state.cutoff(config.threshold):
                    continue
                if minimal_gate(hit.poly).kind is Kind.CANDIDATE:
                    state.add(replace(hit, nu=count_outside_unit(hit.poly)), config.threshold)
        state.position = hi
        if progress:
            progress(hi - start, stop - start)
        if path and time.monotonic() - last_save > checkpoint_every:
            save_checkpoint(path, config, state)
            last_save = time.monotonic()

    if path:
        save_checkpoint(path, config, state)
    record = _record(config, state.hits.values(), state.visited)
    if config.skip_nonprimitive:
        record = _with_composites(config, record)
    return record


def canonical_half(half: Sequence[int]) -> tuple[int, ...]:
    """The representative of {P(x), P(-x)} visited by the enumeration."""
    half = tuple(half)
    for i in range(1, len(half), 2):
        if half[i]:
            if half[i] > 0:
                return half
            return tuple(-c if j % 2 else c for j, c in enumerate(half))
    return half


def _with_composites(config: SearchConfig, record: ExtremalRecord) -> ExtremalRecord:
    """Add the best nonprimitive polynomials, predicted from searches at divisor degrees.

    A record Q at degree b yields Q(x^k) and Q(-x^k) at degree d = b k; for even
    k these differ and share a house, so both are kept to match the ties of an
    unskipped run.
    """
    d = config.degree
    subs: dict[int, ExtremalRecord] = {}
    for b in range(2, d, 2):
        if d % b:
            continue
        sub = search_extremal(SearchConfig(b, config.height, threshold=config.threshold ** (d / b),
                                           prune_lemmas=config.prune_lemmas,
                                           prune_real_root=config.prune_real_root,
                                           skip_nonprimitive=True))
        if sub.found:
            subs[b] = sub
    known = {b: r.best_poly for b, r in subs.items()}
    houses = {b: r.best_house for b, r in subs.items()}
    hits = list(record.ties) + list(record.candidates_below_threshold)
    while known:
        pred = composite_prediction(d, known, reciprocal=True, houses=houses)
        added = False
        for b in (pred.divisor, *pred.ties):
            for t in subs[b].ties:
                for q in (t.poly, t.poly.mirror()):
                    p = IntPolynomial.from_half(canonical_half(compose_power(q, d // b).half()))
                    if minimal_gate(p).kind is Kind.CANDIDATE:
                        hits.append(Hit(house(p)[0], p.half(), count_outside_unit(p)))
                        added = True
        if added:
            break
        del known[pred.divisor]
    merged = _record(config, hits, record.visited)
    if merged.found and record.found and merged.best_house > record.best_house:
        raise AssertionError("composite merge lost the record")
    return merged


def partition_merge(records: Sequence[ExtremalRecord]) -> ExtremalRecord:
    """Combine records of disjoint shards of one search space."""
    if not records:
        raise SearchError("nothing to merge")
    first = records[0]
    for r in records[1:]:
        if (r.degree, r.height, r.threshold) != (first.degree, first.height, first.threshold):
            raise SearchError("records come from different search spaces")
    if len(records) == 1:
        return first
    config = SearchConfig(first.degree, first.height, first.threshold)
    hits = [h for r in records for h in (*r.ties, *r.candidates_below_threshold)]
    return _record(config, hits, sum(r.visited for r in records))


def search_sharded(config: SearchConfig, shards: int, jobs: int = 1) -> ExtremalRecord:
    """Run ``shards`` shards, in worker processes when ``jobs > 1``, and merge."""
    configs = [replace(config, partitions=(i, shards)) for i in range(shards)]
    if jobs <= 1:
        return partition_merge([search_extremal(c) for c in configs])
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return partition_merge(list(pool.map(search_extremal, configs)))

