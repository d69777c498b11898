"""Brute-force ground truth for every series pipeline.

Two independent routes to the same numbers:

* ``exhaustive_partition`` sums the spin product over all 2^N
  configurations of a small finite lattice, exactly.
* ``even_subgraph_counts`` enumerates the GF(2) cycle space of the same
  lattice and histograms even edge subsets by size.

On a periodic lattice both include winding subgraphs, so they must agree
coefficient by coefficient.  For infinite-lattice (per-site) data the
module enumerates connected even subgraphs by closed-trail search and
assembles disconnected contributions and log-series cumulants from pair
placement counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

# unit steps, listed so that entry k and entry k + q/2 are opposite
STEPS = {
    "ring": ((1,), (-1,)),
    "sq": ((1, 0), (0, 1), (-1, 0), (0, -1)),
    "pt": ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)),
    "sc": ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)),
}

GIRTH = {"ring": None, "sq": 4, "pt": 3, "sc": 4}

MAX_EXHAUSTIVE_SITES = 27
MAX_CYCLE_DIM = 22


@dataclass(frozen=True)
class LatticeSpec:
    """Finite lattice description with canonical site and bond indices."""

    kind: str
    sides: tuple[int, ...]
    periodic: bool = True

    def __post_init__(self):
        if self.kind not in STEPS:
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        dim = len(STEPS[self.kind][0])
        if len(self.sides) != dim:
            raise ValueError(f"{self.kind} lattice needs {dim} side lengths")
        if any(s < 2 for s in self.sides):
            raise ValueError("side lengths must be at least 2")

    @property
    def nsites(self) -> int:
        n = 1
        for s in self.sides:
            n *= s
        return n

    @property
    def coordination(self) -> int:
        return len(STEPS[self.kind])

    def sites(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(s) for s in self.sides)))

    def site_index(self, coords) -> int:
        idx = 0
        for c, s in zip(coords, self.sides):
            idx = idx * s + (c % s)
        return idx

    def bonds(self) -> list[tuple[int, int]]:
        """One bond per (site, positive step); multi-edges arise naturally
        on period-2 tori and are kept as distinct bonds."""
        out = []
        half = self.coordination // 2
        for coords in self.sites():
            i = self.site_index(coords)
            for step in STEPS[self.kind][:half]:
                nbr = tuple(c + d for c, d in zip(coords, step))
                if self.periodic:
                    out.append((i, self.site_index(nbr)))
                else:
                    if all(0 <= c < s for c, s in zip(nbr, self.sides)):
                        out.append((i, self.site_index(nbr)))
        return out


def exhaustive_partition(lattice: LatticeSpec) -> list[int]:
    """g_r table from the full spin sum: 2^-N sum_sigma prod (1 + x s s').

    Per configuration the product is (1+x)^agree (1-x)^disagree; the
    histogram over agreement counts is accumulated with numpy and the
    polynomial assembled exactly over the integers.
    """
    n = lattice.nsites
    if n > MAX_EXHAUSTIVE_SITES:
        raise ValueError(f"{n} sites exceeds the exhaustive limit {MAX_EXHAUSTIVE_SITES}")
    bonds = lattice.bonds()
    nb = len(bonds)
    hist = np.zeros(nb + 1, dtype=np.int64)
    chunk = 1 << min(n, 20)
    for start in range(0, 1 << n, chunk):
        configs = np.arange(start, start + chunk, dtype=np.int64)
        disagree = np.zeros(chunk, dtype=np.int64)
        for i, j in bonds:
            disagree += (configs >> i ^ configs >> j) & 1
        hist += np.bincount(nb - disagree, minlength=nb + 1)
    # sum_a hist[a] (1+x)^a (1-x)^(B-a), then divide by 2^N
    total = [0] * (nb + 1)
    for a in range(nb + 1):
        if not hist[a]:
            continue
        poly = _binomial_product(a, nb - a)
        for r, c in enumerate(poly):
            total[r] += int(hist[a]) * c
    scale = 1 << n
    out = []
    for c in total:
        q, rem = divmod(c, scale)
        if rem:
            raise AssertionError("partition coefficients must be integers")
        out.append(q)
    return out


def _binomial_product(a: int, d: int) -> list[int]:
    """Coefficients of (1+x)^a (1-x)^d."""
    poly = [1]
    for _ in range(a):
        poly = [x + y for x, y in zip(poly + [0], [0] + poly)]
    for _ in range(d):
        poly = [x - y for x, y in zip(poly + [0], [0] + poly)]
    return poly


@dataclass
class EvenSubgraph:
    """Bond subset of a finite lattice, stored as a bitmask."""

    lattice: LatticeSpec
    mask: int

    def bond_indices(self) -> list[int]:
        return [i for i in range(self.mask.bit_length()) if self.mask >> i & 1]

    def size(self) -> int:
        return self.mask.bit_count()


def cycle_space_basis(lattice: LatticeSpec) -> list[int]:
    """Fundamental-cycle bitmasks from a spanning forest."""
    bonds = lattice.bonds()
    n = lattice.nsites
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    non_tree = []
    for b, (i, j) in enumerate(bonds):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            adj[i].append((j, b))
            adj[j].append((i, b))
        else:
            non_tree.append(b)

    def tree_path_mask(src, dst):
        # BFS in the spanning forest
        prev = {src: (None, None)}
        queue = [src]
        while queue:
            cur = queue.pop()
            if cur == dst:
                break
            for nxt, b in adj[cur]:
                if nxt not in prev:
                    prev[nxt] = (cur, b)
                    queue.append(nxt)
        mask = 0
        cur = dst
        while prev[cur][0] is not None:
            cur, b = prev[cur]
            mask |= 1 << b
        return mask

    basis = []
    for b in non_tree:
        i, j = bonds[b]
        mask = 1 << b
        if i != j:
            mask |= tree_path_mask(i, j)
        basis.append(mask)
    return basis


def even_subgraph_counts(lattice: LatticeSpec, r_max: int | None = None,
                         through: int | None = None) -> list[int]:
    """Exact g_r table by enumerating the whole cycle space.

    Counts even-degree bond subsets of the finite lattice (winding included)
    by size; with ``through`` only subsets touching that site index count.
    """
    bonds = lattice.bonds()
    basis = cycle_space_basis(lattice)
    dim = len(basis)
    if dim > MAX_CYCLE_DIM:
        raise ValueError(f"cycle space dimension {dim} exceeds limit {MAX_CYCLE_DIM}")
    nb = len(bonds)
    if r_max is None:
        r_max = nb
    incident = 0
    if through is not None:
        for b, (i, j) in enumerate(bonds):
            if i == through or j == through:
                incident |= 1 << b
    counts = [0] * (r_max + 1)
    mask = 0
    counts[0] += 1 if through is None else 0
    # Gray-code walk over the 2^dim subsets
    for g in range(1, 1 << dim):
        mask ^= basis[(g & -g).bit_length() - 1]
        r = mask.bit_count()
        if r <= r_max and (through is None or mask & incident):
            counts[r] += 1
    return counts


# ---------------------------------------------------------------------------
# connected even subgraphs by closed-trail enumeration


def _dist(kind: str, v) -> int:
    if kind == "sq" or kind == "sc":
        return sum(abs(c) for c in v)
    if kind == "pt":
        a, b = v
        return (abs(a) + abs(b) + abs(a + b)) // 2
    raise ValueError(kind)


def connected_even_sets(kind: str, r_max: int,
                        node_budget: int = 50_000_000) -> list[frozenset]:
    """All connected even subgraphs with <= r_max edges containing the origin
    of an infinite lattice, each as a frozenset of canonical edges.

    Every connected even graph carries an Eulerian circuit through each of
    its vertices, so a depth-first search over closed non-edge-repeating
    trails from the origin visits each exactly once (after dedup).
    """
    steps = STEPS[kind]
    origin = (0,) * len(steps[0])
    found: set[frozenset] = set()
    budget = [node_budget]

    def edge_key(a, b):
        return (a, b) if a <= b else (b, a)

    def walk(pos, used: set, length: int):
        if budget[0] <= 0:
            raise ResourceWarning("trail enumeration budget exhausted")
        budget[0] -= 1
        for step in steps:
            nxt = tuple(p + d for p, d in zip(pos, step))
            key = edge_key(pos, nxt)
            if key in used:
                continue
            remaining = r_max - length - 1
            if _dist(kind, nxt) > remaining:
                continue
            used.add(key)
            if nxt == origin:
                found.add(frozenset(used))
            if remaining > 0:
                walk(nxt, used, length + 1)
            used.remove(key)

    walk(origin, set(), 0)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def connected_counts(kind: str, r_max: int) -> tuple[dict[int, int], dict[int, int]]:
    """(per-site, through-site) connected even-subgraph counts by edge count.

    Per-site counts anchor each subgraph at its lexicographically smallest
    vertex; through-site counts include every subgraph containing the origin.
    """
    sets = connected_even_sets(kind, r_max)
    origin = (0,) * len(STEPS[kind][0])
    persite: dict[int, int] = {}
    through: dict[int, int] = {}
    for s in sets:
        r = len(s)
        through[r] = through.get(r, 0) + 1
        if min(_vertices(s)) == origin:
            persite[r] = persite.get(r, 0) + 1
    return persite, through


def _translate(edge_set: frozenset, shift) -> frozenset:
    def mv(v):
        return tuple(c + d for c, d in zip(v, shift))

    out = set()
    for a, b in edge_set:
        a2, b2 = mv(a), mv(b)
        out.add((a2, b2) if a2 <= b2 else (b2, a2))
    return frozenset(out)


def _vertices(edge_set) -> set:
    return {v for e in edge_set for v in e}


@dataclass
class PersiteSeries:
    """Per-site log-series cumulants with the ingredients that built them."""

    kind: str
    r_max: int
    connected: dict[int, int] = field(default_factory=dict)
    through: dict[int, int] = field(default_factory=dict)
    cumulants: dict[int, Fraction] = field(default_factory=dict)


def persite_log_series(kind: str, r_max: int) -> PersiteSeries:
    """Per-site coefficients of (1/N) log S for the infinite lattice.

    S(N) = sum over even subgraphs of x^r has coefficients polynomial in N:
    N times the connected count plus pair terms for disjoint two-component
    subgraphs (three components need at least 3*girth > 8 edges).  Taking
    the log cancels the N^2 parts and leaves, per site,

        cum_r = conn_r - sum_(a<b, a+b=r) I_ab - [r=2a] (conn_a + I_aa)/2

    where I_ab counts ordered vertex-intersecting placements of an a-edge
    and a b-edge connected even subgraph, per site.
    """
    girth = GIRTH[kind]
    if girth is None:
        raise ValueError("per-site series needs a 2D/3D lattice kind")
    all_sets = connected_even_sets(kind, r_max)
    dim = len(STEPS[kind][0])
    origin = (0,) * dim
    by_size_anchored: dict[int, list[frozenset]] = {}
    by_size_through: dict[int, list[frozenset]] = {}
    persite: dict[int, int] = {}
    through: dict[int, int] = {}
    for s in all_sets:
        r = len(s)
        through[r] = through.get(r, 0) + 1
        by_size_through.setdefault(r, []).append(s)
        if min(_vertices(s)) == origin:
            persite[r] = persite.get(r, 0) + 1
            by_size_anchored.setdefault(r, []).append(s)

    def intersecting_ordered(a: int, b: int, exclude_equal: bool) -> int:
        """Per-site count of ordered pairs (A, B), A anchored at its minimal
        vertex, B vertex-intersecting A, |A| = a, |B| = b."""
        total = 0
        for A in by_size_anchored.get(a, ()):
            hits: set[frozenset] = set()
            for v in _vertices(A):
                for B0 in by_size_through.get(b, ()):
                    B = _translate(B0, v)
                    if exclude_equal and B == A:
                        continue
                    hits.add(B)
            total += len(hits)
        return total

    cum: dict[int, Fraction] = {}
    for r in range(girth, r_max + 1):
        val = Fraction(persite.get(r, 0))
        for a in range(girth, r // 2 + 1):
            b = r - a
            if b < girth:
                continue
            if a < b:
                val -= intersecting_ordered(a, b, exclude_equal=False)
            elif a == b:
                na = persite.get(a, 0)
                val -= Fraction(na + intersecting_ordered(a, a, exclude_equal=True), 2)
        cum[r] = val
    return PersiteSeries(kind=kind, r_max=r_max, connected=persite,
                         through=through, cumulants=cum)


# ---------------------------------------------------------------------------
# SC-closedness of PT-projected, axis-labelled graphs


def sc_closedness(edges) -> bool:
    """Whether an axis-labelled PT-projected even graph is closed on the SC
    lattice: some assignment of a direction to every edge instance gives
    in-degree = out-degree at each vertex and equal +/- step counts per axis.

    ``edges``: iterable of (vertex_a, vertex_b, axis) with axis in 'xyz';
    repeated entries model multi-edges.  Raises on odd-degree vertices.
    """
    edges = list(edges)
    degree: dict = {}
    for a, b, _axis in edges:
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    if any(d % 2 for d in degree.values()):
        raise ValueError("graph has an odd-degree vertex")
    if not edges:
        return True

    nverts = {v: i for i, v in enumerate(sorted(degree))}
    axis_idx = {"x": 0, "y": 1, "z": 2}
    # drawn step of the positive axis direction in the projection plane
    positive_step = {"x": (1, 0), "y": (-1, 1), "z": (0, -1)}

    def axis_sign(a, b, axis):
        step = (b[0] - a[0], b[1] - a[1])
        if step == positive_step[axis]:
            return 1
        if step == tuple(-c for c in positive_step[axis]):
            return -1
        raise ValueError(f"edge {a}-{b} does not lie on axis {axis}")

    signs = [axis_sign(a, b, axis) for a, b, axis in edges]

    def search(i, flow, balance):
        if i == len(edges):
            return all(f == 0 for f in flow) and all(b == 0 for b in balance)
        a, b, axis = edges[i]
        ia, ib, ax = nverts[a], nverts[b], axis_idx[axis]
        remaining = len(edges) - i
        if any(abs(f) > remaining for f in flow) or any(abs(c) > remaining for c in balance):
            return False
        for d in (1, -1):
            flow[ia] += d
            flow[ib] -= d
            balance[ax] += d * signs[i]
            if search(i + 1, flow, balance):
                flow[ia] -= d
                flow[ib] += d
                balance[ax] -= d * signs[i]
                return True
            flow[ia] -= d
            flow[ib] += d
            balance[ax] -= d * signs[i]
        return False

    return search(0, [0] * len(nverts), [0, 0, 0])
