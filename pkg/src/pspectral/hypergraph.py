"""Uniform hypergraphs, complete k-chromatic constructions, edge counts, and a
brute-force weak chromatic number.

Vertices are 0-based. Color classes of complete k-chromatic graphs are the
consecutive vertex blocks of the given sizes, in descending-size order, so
isomorphic class tuples compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import gen_binomial

# Explicit enumeration limits: edge lists stay small and debuggable.
MAX_BUILD_VERTICES = 25
MAX_BUILD_EDGES = 1_000_000
MAX_CHROMATIC_VERTICES = 12


class CapacityError(ValueError):
    """Raised when an explicit enumeration would exceed its stated bound."""


@dataclass(frozen=True)
class UniformHypergraph:
    """An r-graph as a lexicographically sorted list of sorted r-subsets."""

    r: int
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"uniformity must be >= 2, got {self.r}")
        if self.n < 0:
            raise ValueError("vertex count must be >= 0")
        prev = None
        for e in self.edges:
            if len(e) != self.r or len(set(e)) != self.r:
                raise ValueError(f"edge {e} is not an {self.r}-subset")
            if any(v < 0 or v >= self.n for v in e):
                raise ValueError(f"edge {e} has a vertex outside [0, {self.n})")
            if tuple(sorted(e)) != e:
                raise ValueError(f"edge {e} is not sorted ascending")
            if prev is not None and not prev < e:
                raise ValueError("edge list is not strictly increasing")
            prev = e

    @staticmethod
    def from_edge_iterable(r: int, n: int, edges: Iterable[Sequence[int]]) -> "UniformHypergraph":
        """Canonicalize edges (sort within and across); duplicates are an error."""
        canon = sorted(tuple(sorted(e)) for e in edges)
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        return UniformHypergraph(r, n, tuple(canon))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_json_dict(self) -> dict:
        return {"r": self.r, "n": self.n, "edges": [list(e) for e in self.edges]}

    @staticmethod
    def from_json_dict(data: dict) -> "UniformHypergraph":
        try:
            r, n, edges = int(data["r"]), int(data["n"]), data["edges"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed hypergraph JSON: {exc}") from exc
        return UniformHypergraph(r, n, tuple(tuple(int(v) for v in e) for e in edges))


@dataclass(frozen=True)
class ClassTuple:
    """A multiset of color-class sizes (descending), defining Q(n_1,...,n_k)."""

    r: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"uniformity must be >= 2, got {self.r}")
        if not self.sizes:
            raise ValueError("at least one class required")
        if any(s < 1 for s in self.sizes):
            raise ValueError(f"class sizes must be >= 1, got {self.sizes}")
        if any(a < b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError(f"class sizes must be nonincreasing, got {self.sizes}")

    @staticmethod
    def of(r: int, sizes: Iterable[int]) -> "ClassTuple":
        return ClassTuple(r, tuple(sorted(sizes, reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def blocks(self) -> list[range]:
        """Consecutive vertex ranges of the classes."""
        out, start = [], 0
        for s in self.sizes:
            out.append(range(start, start + s))
            start += s
        return out


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative vertex weights together with the norm exponent p."""

    entries: tuple[float, ...]
    p: float

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"norm exponent must be >= 1, got {self.p}")
        if any(x < 0 for x in self.entries):
            raise ValueError("weights must be nonnegative")

    def norm_p(self) -> float:
        return sum(abs(x) ** self.p for x in self.entries) ** (1.0 / self.p)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(sum(abs(x) ** self.p for x in self.entries) - 1.0) <= tol


def _class_of_vertex(sizes: Sequence[int]) -> list[int]:
    owner = []
    for ci, s in enumerate(sizes):
        owner.extend([ci] * s)
    return owner


def complete_chromatic_from_sizes(r: int, sizes: Sequence[int]) -> UniformHypergraph:
    """Complete k-chromatic r-graph on consecutive blocks of the given sizes.

    Sizes need not be sorted; vertex blocks follow the given order.
    """
    import itertools

    n = sum(sizes)
    if n > MAX_BUILD_VERTICES:
        raise CapacityError(f"n={n} exceeds the explicit enumeration bound {MAX_BUILD_VERTICES}")
    if any(s < 1 for s in sizes):
        raise ValueError(f"class sizes must be >= 1, got {tuple(sizes)}")
    if math.comb(n, r) > MAX_BUILD_EDGES:
        raise CapacityError(f"C({n},{r}) exceeds the enumeration bound {MAX_BUILD_EDGES}")
    owner = _class_of_vertex(sizes)
    edges = [
        e
        for e in itertools.combinations(range(n), r)
        if any(owner[v] != owner[e[0]] for v in e)
    ]
    return UniformHypergraph(r, n, tuple(edges))


def build_complete_chromatic(t: ClassTuple) -> UniformHypergraph:
    """Q(n_1,...,n_k): all r-sets meeting at least two of the class blocks."""
    return complete_chromatic_from_sizes(t.r, t.sizes)


def complete_graph(n: int, r: int) -> UniformHypergraph:
    """K_n^r: all r-subsets of [0, n)."""
    import itertools

    if math.comb(n, r) > MAX_BUILD_EDGES:
        raise CapacityError(f"C({n},{r}) exceeds the enumeration bound {MAX_BUILD_EDGES}")
    return UniformHypergraph(r, n, tuple(itertools.combinations(range(n), r)))


def polyform(G: UniformHypergraph, x: Sequence) -> float | Fraction:
    """r! * sum over edges of the product of vertex weights.

    Exact when all entries are Fraction/int; float otherwise.
    """
    entries = x.entries if isinstance(x, WeightVector) else x
    if len(entries) != G.n:
        raise ValueError(f"weight vector has length {len(entries)}, graph has {G.n} vertices")
    total = 0
    for e in G.edges:
        prod = 1
        for v in e:
            prod = prod * entries[v]
        total += prod
    return math.factorial(G.r) * total


def edge_count(t: ClassTuple) -> int:
    """|Q(n_1,...,n_k)| = C(n,r) - sum_i C(n_i,r)."""
    return math.comb(t.n, t.r) - sum(math.comb(s, t.r) for s in t.sizes)


def blocks_esym(blocks: Sequence[tuple], degree: int):
    """[z^degree] of prod (1 + a z)^{size} over (size, a) blocks.

    Generic over the coefficient type: exact for Fraction values, float
    otherwise.
    """
    poly = [0] * (degree + 1)
    poly[0] = 1
    for size, a in blocks:
        top = min(size, degree)
        factor = [math.comb(size, j) * a**j for j in range(top + 1)]
        nxt = [0] * (degree + 1)
        for i, ci in enumerate(poly):
            if ci == 0:
                continue
            for j in range(min(top, degree - i) + 1):
                nxt[i + j] += ci * factor[j]
        poly = nxt
    return poly[degree]


def class_polyform(r: int, blocks_by_class: Sequence[Sequence[tuple]]):
    """Polyform of a complete chromatic graph under blockwise-constant weights.

    Each class is a list of (size, value) blocks; the value is
    r! ( e_r(all blocks) - sum over classes of e_r(class blocks) ).
    """
    all_blocks = [b for cls in blocks_by_class for b in cls]
    total = blocks_esym(all_blocks, r)
    mono = sum(blocks_esym(cls, r) for cls in blocks_by_class)
    return math.factorial(r) * (total - mono)


def tuple_polyform(t: ClassTuple, values: Sequence):
    """Polyform of Q(n_1,...,n_k) with the constant value values[i] on class i."""
    if len(values) != t.k:
        raise ValueError(f"need {t.k} class values, got {len(values)}")
    return class_polyform(t.r, [[(s, v)] for s, v in zip(t.sizes, values)])


def balanced_edge_bound(r: int, k: int, n: int) -> Fraction:
    """C(n,r) - k*C(n/k,r) as an exact rational (generalized binomial).

    Equals |Q_k^r(n)| iff k | n, and strictly exceeds it otherwise.
    """
    if n <= (r - 1) * k:
        raise ValueError(f"bound needs n > (r-1)k, got n={n}, r={r}, k={k}")
    return math.comb(n, r) - k * gen_binomial(Fraction(n, k), r)


def balanced_tuple(r: int, k: int, n: int) -> ClassTuple:
    """Class sizes of Q_k^r(n): sizes differ by at most one."""
    q, t = divmod(n, k)
    return ClassTuple(r, tuple([q + 1] * t + [q] * (k - t)))


def weak_chromatic_number(G: UniformHypergraph, k_max: int) -> int | None:
    """Least k <= k_max with a partition into k classes and no monochromatic
    edge, or None when every such k fails.

    Brute force with symmetry pruning: vertex 0 is fixed to class 0 and classes
    are introduced in first-occurrence order.
    """
    if G.n > MAX_CHROMATIC_VERTICES:
        raise CapacityError(f"n={G.n} exceeds the brute-force bound {MAX_CHROMATIC_VERTICES}")
    if G.n == 0 or not G.edges:
        return 1 if k_max >= 1 else None

    # Edges indexed by their largest vertex: checkable as soon as it is colored.
    by_last: list[list[tuple[int, ...]]] = [[] for _ in range(G.n)]
    for e in G.edges:
        by_last[e[-1]].append(e)

    def colorable(k: int) -> bool:
        color = [-1] * G.n

        def place(v: int, used: int) -> bool:
            if v == G.n:
                return True
            for c in range(min(used + 1, k)):
                color[v] = c
                if all(any(color[w] != c for w in e[:-1]) for e in by_last[v]):
                    if place(v + 1, max(used, c + 1)):
                        return True
            color[v] = -1
            return False

        return place(0, 0)

    for k in range(1, k_max + 1):
        if colorable(k):
            return k
    return None
