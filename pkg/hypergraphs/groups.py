"""Finite permutation groups given by generator images.

A permutation is a tuple ``p`` with ``p[i]`` the image of ``i``; ``compose(p, q)`` applies
``q`` first.
"""
from collections import deque

from overlap_lab.exceptions import ValidationProblem


def identity(degree):
    return tuple(range(degree))


def compose(p, q):
    return tuple(p[i] for i in q)


def inverse(p):
    result = [0] * len(p)
    for i, image in enumerate(p):
        result[image] = i
    return tuple(result)


def _checked(perm, degree=None):
    perm = tuple(int(v) for v in perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValidationProblem(f"{perm} is not a permutation")
    if degree is not None and len(perm) != degree:
        raise ValidationProblem(f"permutation {perm} acts on {len(perm)} points, expected {degree}")
    return perm


def closure(generators, limit=100_000):
    """All elements of the group generated by ``generators``, sorted lexicographically."""
    generators = [_checked(g) for g in generators]
    if not generators:
        raise ValidationProblem("at least one generator is required")
    degree = len(generators[0])
    generators = [_checked(g, degree) for g in generators]
    start = identity(degree)
    seen = {start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = compose(s, g)
            if h not in seen:
                if len(seen) >= limit:
                    raise ValidationProblem(f"group order exceeds {limit}")
                seen.add(h)
                queue.append(h)
    return sorted(seen)


def cyclic_generator(order):
    return tuple((i + 1) % order for i in range(order))


def power(p, exponent):
    result = identity(len(p))
    base = p if exponent >= 0 else inverse(p)
    for _ in range(abs(exponent)):
        result = compose(base, result)
    return result


def cyclic_elements(order, residues):
    """The elements ``g^r`` of Z_order (as permutations) for the given residues."""
    g = cyclic_generator(order)
    return [power(g, r % order) for r in residues]


def symmetric_generators(degree):
    """A transposition and a long cycle, generating S_degree."""
    swap = (1, 0) + tuple(range(2, degree))
    return [swap, cyclic_generator(degree)]


def is_symmetric(subset):
    members = {tuple(s) for s in subset}
    return all(inverse(s) in members for s in members)
