"""Counting-measure partite splits, density increments and superregular tuples."""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

import numpy as np

from overlap_lab.conf import resolve
from overlap_lab.exceptions import (
    BudgetExhausted, InvariantViolation, PreconditionError, ValidationProblem,
)

from hypergraphs.structures import _check_blocks

logger = logging.getLogger(__name__)

VERIFIED_EXHAUSTIVE = 'verified-exhaustive'
UNFALSIFIED_SAMPLED = 'unfalsified-sampled'


def measure_density(hypergraph):
    """h! |E| / n^h: the share of ordered h-tuples of vertices forming a hyperedge."""
    if hypergraph.n == 0:
        return Fraction(0)
    return Fraction(factorial(hypergraph.arity) * len(hypergraph.edges), hypergraph.n ** hypergraph.arity)


def _edge_array(hypergraph):
    return np.array(hypergraph.edges, dtype=np.int64).reshape(-1, hypergraph.arity)


def _labels(n, blocks):
    labels = np.full(n, -1, dtype=np.int64)
    for i, block in enumerate(blocks):
        labels[list(block)] = i
    return labels


def _crossing_mask(edges, labels, h):
    """Hyperedges with exactly one vertex in each labelled block."""
    if not len(edges):
        return np.zeros(0, dtype=bool)
    marks = np.sort(labels[edges], axis=1)
    return (marks == np.arange(h)).all(axis=1)


def tuple_density(hypergraph, blocks, edges=None):
    """d(W_1..W_h) = crossing hyperedges / prod |W_i|, recomputed from scratch."""
    blocks = _check_blocks(blocks, hypergraph.arity)
    edges = _edge_array(hypergraph) if edges is None else edges
    crossing = int(_crossing_mask(edges, _labels(hypergraph.n, blocks), hypergraph.arity).sum())
    return Fraction(crossing, prod(len(b) for b in blocks))


def _group_count(n, h, density):
    target = h * math.ceil(h / density)
    for t in range(target, n + 1, h):
        if n % t == 0:
            return t
    return n


def partite_split(hypergraph, seed=None, budget=None):
    """Equal blocks V_1..V_h with d(V_1..V_h) >= d(H)/2.

    Vertices are cut into t = h * ceil(h / d(H)) equal groups (t rounded up to a divisor of n)
    and whole groups are dealt to the blocks. All deals are tried when there are at most
    ``budget`` of them; otherwise ``budget`` random deals are drawn. Returns (blocks, density).
    """
    h, n = hypergraph.arity, hypergraph.n
    if n % h:
        raise ValidationProblem(f"{n} vertices cannot be split into {h} equal blocks")
    density = measure_density(hypergraph)
    if density == 0:
        raise PreconditionError("the hypergraph has no hyperedges")
    budget = resolve(budget, 'WITNESS_BUDGET')
    t = _group_count(n, h, density)
    groups = [list(range(j * (n // t), (j + 1) * (n // t))) for j in range(t)]
    edges = _edge_array(hypergraph)
    per_block = t // h
    deals = factorial(t) // factorial(per_block) ** h

    def evaluate(deal):
        blocks = [sorted(v for g in part for v in groups[g]) for part in deal]
        labels = _labels(n, blocks)
        return Fraction(int(_crossing_mask(edges, labels, h).sum()), (n // h) ** h), blocks

    best = None
    if deals <= budget:
        candidates = _labelled_deals(t, h)
    else:
        rng = np.random.default_rng(resolve(seed, 'DEFAULT_SEED'))
        candidates = (np.array_split(rng.permutation(t), h) for _ in range(budget))
    for deal in candidates:
        value, blocks = evaluate([list(map(int, part)) for part in deal])
        if best is None or value > best[0]:
            best = (value, blocks)
    value, blocks = best
    if value < density / 2:
        raise BudgetExhausted(f"best split density {value} is below d(H)/2 = {density / 2}",
                              attempts=min(deals, budget), partial=(tuple(tuple(b) for b in blocks), value))
    logger.info(f"Partite split of {n} vertices into {h} blocks ({t} groups, {min(deals, budget)} deals): density {value}")
    return tuple(tuple(b) for b in blocks), value


def _labelled_deals(t, h):
    size = t // h

    def deal(remaining, blocks):
        if len(blocks) == h:
            yield blocks
            return
        for chosen in itertools.combinations(remaining, size):
            left = tuple(g for g in remaining if g not in chosen)
            yield from deal(left, blocks + [chosen])

    yield from deal(tuple(range(t)), [])


@dataclass
class DensityState:
    """Current tuple W_1..W_h, its density and the (sizes, density) history of the increments."""

    blocks: tuple
    density: Fraction
    iteration: int = 0
    history: list = field(default_factory=list)

    def __post_init__(self):
        if not 0 <= self.density <= 1:
            raise InvariantViolation(f"density {self.density} outside [0, 1]")
        if not self.history:
            self.history.append((self.sizes, self.density))

    @property
    def sizes(self):
        return tuple(len(b) for b in self.blocks)

    def advance(self, blocks, density):
        if density <= self.density:
            raise InvariantViolation(f"density did not increase: {self.density} -> {density}")
        sizes = tuple(len(b) for b in blocks)
        if any(a > b for a, b in zip(sizes, self.sizes)):
            raise InvariantViolation(f"block sizes grew: {self.sizes} -> {sizes}")
        self.blocks = tuple(tuple(sorted(b)) for b in blocks)
        self.density = density
        self.iteration += 1
        self.history.append((sizes, density))


@dataclass(frozen=True)
class Increment:
    blocks: tuple
    density: Fraction
    pattern: tuple
    bound: Fraction


def density_increment(hypergraph, blocks, gamma, delta, witness):
    """Denser sub-tuple from a witness Y_1..Y_h that (W_1..W_h) is not (gamma, delta)-superregular.

    Among the patterns T_i in {Y_i, W_i - Y_i} (not all Y_i) whose size product is at least
    delta*gamma/2^h of the original, the one of highest density is returned; it reaches
    c + (c - 2 delta) gamma / (1 - gamma).
    """
    h = hypergraph.arity
    gamma, delta = Fraction(gamma), Fraction(delta)
    if not 0 < gamma < 1 or not 0 < delta <= 1:
        raise ValidationProblem("gamma must lie in (0, 1) and delta in (0, 1]")
    blocks = [frozenset(b) for b in _check_blocks(blocks, h)]
    witness = [frozenset(y) for y in witness]
    if len(witness) != h or any(not y or not y <= w for y, w in zip(witness, blocks)):
        raise ValidationProblem("the witness must hold non-empty subsets Y_i of each W_i")
    edges = _edge_array(hypergraph)
    whole = prod(len(w) for w in blocks)
    c = tuple_density(hypergraph, blocks, edges)
    if prod(len(y) for y in witness) < gamma * whole:
        raise ValidationProblem("the witness is too small to violate superregularity")
    if tuple_density(hypergraph, witness, edges) >= delta:
        raise ValidationProblem("the witness is not sparse: d(Y_1..Y_h) >= delta")
    if c <= 2 * delta:
        raise PreconditionError(f"c = {c} <= 2 delta = {2 * delta}: the increment would not be positive")

    floor = delta * gamma / 2 ** h * whole
    best = None
    for pattern in itertools.product((0, 1), repeat=h):
        if not any(pattern):
            continue
        parts = [y if bit == 0 else w - y for bit, y, w in zip(pattern, witness, blocks)]
        size = prod(len(p) for p in parts)
        if size == 0 or size < floor:
            continue
        value = tuple_density(hypergraph, parts, edges)
        if best is None or value > best[0]:
            best = (value, pattern, parts)
    bound = c + (c - 2 * delta) * gamma / (1 - gamma)
    if best is None or best[0] < bound:
        raise InvariantViolation(f"no admissible pattern reaches the increment bound {bound}")
    value, pattern, parts = best
    return Increment(tuple(tuple(sorted(p)) for p in parts), value, pattern, bound)


def _optimal_last_block(counts, last, fixed_size, need):
    """The ``need`` vertices of the last block meeting the fewest crossing edges."""
    order = sorted(last, key=lambda v: (counts.get(v, 0), v))
    chosen = order[:need]
    hits = sum(counts.get(v, 0) for v in chosen)
    return chosen, Fraction(hits, fixed_size * need)


def _edge_counts_for(edges, labels, h, prefix):
    """For each vertex of block h-1: edges whose other vertices lie one in each chosen Y_i, i < h-1."""
    mask = np.zeros(len(labels), dtype=bool)
    for block in prefix:
        mask[list(block)] = True
    sub = labels.copy()
    sub[~mask & (labels != h - 1)] = -1
    crossing = _crossing_mask(edges, sub, h)
    counts = {}
    if crossing.any():
        last_vertices = edges[crossing][labels[edges[crossing]] == h - 1]
        for v in last_vertices.tolist():
            counts[v] = counts.get(v, 0) + 1
    return counts


def _witness_for(hypergraph, blocks, edges, gamma, delta, prefixes):
    h = hypergraph.arity
    labels = _labels(hypergraph.n, blocks)
    whole = prod(len(b) for b in blocks)
    for prefix in prefixes:
        fixed = prod(len(y) for y in prefix)
        need = math.ceil(gamma * whole / fixed)
        if need > len(blocks[-1]):
            continue
        counts = _edge_counts_for(edges, labels, h, prefix)
        chosen, value = _optimal_last_block(counts, blocks[-1], fixed, need)
        if value < delta:
            return [tuple(y) for y in prefix] + [tuple(chosen)]
    return None


def _exhaustive_prefixes(blocks):
    def subsets(block):
        for r in range(1, len(block) + 1):
            yield from itertools.combinations(block, r)
    return itertools.product(*(list(subsets(b)) for b in blocks[:-1]))


def _sampled_prefixes(blocks, gamma, rng, budget):
    for _ in range(budget):
        prefix = []
        for block in blocks[:-1]:
            low = max(1, math.ceil(float(gamma) * len(block)))
            size = int(rng.integers(low, len(block) + 1))
            prefix.append(tuple(sorted(int(v) for v in rng.choice(block, size=size, replace=False))))
        yield prefix


@dataclass
class SuperregularResult:
    blocks: tuple
    density: Fraction
    status: str
    state: DensityState
    iteration_cap: float
    witnesses_tried: int = 0

    @property
    def verified(self):
        return self.status == VERIFIED_EXHAUSTIVE


def find_superregular(hypergraph, gamma, delta, witness_budget=None, seed=None, exhaustive_limit=None):
    """Iterate partite_split and density increments until no superregularity witness is found.

    The witness search enumerates every choice of Y_1..Y_{h-1} when the first h-1 blocks hold at
    most ``exhaustive_limit`` vertices (the best Y_h is then forced), and samples
    ``witness_budget`` choices otherwise; the result carries the matching certificate status.
    """
    gamma, delta = Fraction(gamma), Fraction(delta)
    h = hypergraph.arity
    if measure_density(hypergraph) < 8 * delta:
        raise PreconditionError(f"d(H) = {measure_density(hypergraph)} is below 8 delta = {8 * delta}")
    if not 0 < gamma < 1:
        raise ValidationProblem("gamma must lie in (0, 1)")
    budget = resolve(witness_budget, 'WITNESS_BUDGET')
    limit = resolve(exhaustive_limit, 'EXHAUSTIVE_WITNESS_LIMIT')
    seed = resolve(seed, 'DEFAULT_SEED')
    rng = np.random.default_rng(seed)
    edges = _edge_array(hypergraph)

    blocks, start = partite_split(hypergraph, seed=seed)
    state = DensityState(blocks, start)
    initial = prod(state.sizes)
    cap = (2 / float(gamma)) * math.log2(1 / float(start)) if start < 1 else 0.0
    shrink = delta * gamma / 2 ** h
    tried = 0
    while True:
        exhaustive = sum(state.sizes[:-1]) <= limit
        prefixes = (_exhaustive_prefixes(state.blocks) if exhaustive
                    else _sampled_prefixes(state.blocks, gamma, rng, budget))
        prefixes = list(prefixes)
        tried += len(prefixes)
        witness = _witness_for(hypergraph, state.blocks, edges, gamma, delta, prefixes)
        if witness is None:
            status = VERIFIED_EXHAUSTIVE if exhaustive else UNFALSIFIED_SAMPLED
            break
        step = density_increment(hypergraph, state.blocks, gamma, delta, witness)
        state.advance(step.blocks, step.density)
        if tuple_density(hypergraph, state.blocks, edges) != state.density:
            raise InvariantViolation("tracked density drifted from the recount")
        if prod(state.sizes) < shrink ** state.iteration * initial:
            raise InvariantViolation(f"block product {prod(state.sizes)} fell below the increment bound")
        if state.iteration > cap:
            raise InvariantViolation(f"{state.iteration} increments exceed the cap {cap:.3f}")
        logger.info(f"Increment {state.iteration}: sizes {state.sizes}, density {state.density}")
    return SuperregularResult(state.blocks, state.density, status, state, cap, tried)
