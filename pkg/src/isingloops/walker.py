"""Non-backtracking walk machinery with exact turn phases.

Each of the six directions from a lattice point carries a drawn angle in
the plane (a multiple of 60 degrees) and a step in lattice coordinates.
A step turning by phi relative to the previous one contributes the phase
A^(phi/60deg) with A = exp(i*pi/6), so straight-ahead costs 1, gentle
turns A^(+-1), sharp turns A^(+-2) and reversals are forbidden.

Two propagator conventions exist for the plane-triangular lattice:

* ``paper``     - the matrix entry (new, old) is the circulant phase
                  A^(new-old mod 6, signed) and the position bookkeeping
                  attaches step (1,-1) to direction 3 and (-1,1) to 6.
* ``geometric`` - phases are derived from the drawn angles of those same
                  steps, which makes the matrix the (3 6)-permutation
                  conjugate of the circulant.

The two differ only in how directions 3 and 6 couple to the rest; the
geometric one is the one whose traces reproduce enumerated loop sums
(the walker invariants), while the circulant one reproduces the classic
printed form of the determinant.  Both are exposed and cross-checked.

For the simple-cubic lattice the six axis directions are viewed along the
main diagonal, which projects them onto the six plane-triangular
directions (+x at 0, -z at 60, +y at 120, -x at 180, +z at 240, -y at
300 degrees); matrix entries additionally carry the axis tags.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .ring import (
    CYCLO_ONE,
    CycloNum,
    MONO_ONE,
    TagMonomial,
    TaggedPoly,
    XSeries,
    cyclo_pow,
)

# lattice-coordinate steps per direction index
PT_STEP = {1: (1, 0), 2: (0, 1), 3: (1, -1), 4: (-1, 0), 5: (0, -1), 6: (-1, 1)}
SC_STEP = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1),
           4: (-1, 0, 0), 5: (0, -1, 0), 6: (0, 0, -1)}

# drawn angles in units of 60 degrees
_AXIAL_ANGLE = {(1, 0): 0, (0, 1): 1, (-1, 1): 2, (-1, 0): 3, (0, -1): 4, (1, -1): 5}
PT_ANGLE = {nu: _AXIAL_ANGLE[step] for nu, step in PT_STEP.items()}
SC_ANGLE = {1: 0, 2: 2, 3: 4, 4: 3, 5: 5, 6: 1}

# half-tag carried by each simple-cubic step (u,v,w unsigned; l,m,n signed)
SC_HALF_TAG = {
    1: TagMonomial(du=1, el=1),
    2: TagMonomial(dv=1, em=1),
    3: TagMonomial(dw=1, en=1),
    4: TagMonomial(du=1, el=-1),
    5: TagMonomial(dv=1, em=-1),
    6: TagMonomial(dw=1, en=-1),
}

SC_AXIS = {1: "x", 2: "y", 3: "z", 4: "x", 5: "y", 6: "z"}


def reverse_direction(nu: int) -> int:
    return (nu + 2) % 6 + 1


def project_sc(point3) -> tuple[int, int]:
    """Simple-cubic point seen along the main diagonal, in axial coordinates.

    The kernel is the diagonal (1,1,1); +x projects to the unit step at 0
    degrees, +y to 120, +z to 240.
    """
    x, y, z = point3
    return (x - y, y - z)


def turn_exponent(angle_old: int, angle_new: int) -> int | None:
    """Phase exponent of the turn between two drawn angles (60-degree units);
    None marks a reversal."""
    d = (angle_new - angle_old) % 6
    if d == 3:
        return None
    return d if d <= 2 else d - 6


def pt_direction_of_step(step) -> int:
    for nu, s in PT_STEP.items():
        if s == step:
            return nu
    raise ValueError(f"not a unit plane-triangular step: {step}")


@dataclass
class PropagatorMatrix:
    """6x6 one-step matrix with per-column position bookkeeping."""

    entries: list  # 6x6 nested list of TaggedPoly
    shifts: dict  # column direction -> lattice step tuple
    mode: str  # 'pt' | 'sc'
    convention: str = "paper"
    fourier: bool = False

    def entry(self, new: int, old: int) -> TaggedPoly:
        return self.entries[new - 1][old - 1]


def build_pt_propagator(convention: str = "paper") -> PropagatorMatrix:
    """The 6x6 plane-triangular recurrence matrix.

    ``paper``: circulant in the direction index (entry (new,old) is
    A^(new-old) with reversals zeroed).  ``geometric``: phases computed
    from the drawn angles of the attached steps.
    """
    if convention not in ("paper", "geometric"):
        raise ValueError(f"unknown convention {convention!r}")
    entries = []
    for new in range(1, 7):
        row = []
        for old in range(1, 7):
            if convention == "paper":
                k = turn_exponent(old - 1, new - 1)
            else:
                k = turn_exponent(PT_ANGLE[old], PT_ANGLE[new])
            row.append(TaggedPoly.zero() if k is None
                       else TaggedPoly.scalar(1) * cyclo_pow(k))
        entries.append(row)
    return PropagatorMatrix(entries=entries, shifts=dict(PT_STEP), mode="pt",
                            convention=convention)


def build_sc_propagator() -> PropagatorMatrix:
    """The tagged 6x6 simple-cubic matrix (diagonal-projection phases)."""
    entries = []
    for new in range(1, 7):
        row = []
        for old in range(1, 7):
            k = turn_exponent(SC_ANGLE[old], SC_ANGLE[new])
            if k is None:
                row.append(TaggedPoly.zero())
            else:
                mono = SC_HALF_TAG[old] * SC_HALF_TAG[new]
                row.append(TaggedPoly.term(mono, cyclo_pow(k)))
        entries.append(row)
    return PropagatorMatrix(entries=entries, shifts=dict(SC_STEP), mode="sc",
                            convention="geometric")


def fourier_matrix(prop: PropagatorMatrix) -> PropagatorMatrix:
    """Attach Fourier symbols per column: a column whose step shifts the
    position by delta picks up e^(-p.delta)."""
    if prop.fourier:
        raise ValueError("propagator already carries Fourier symbols")
    entries = []
    for new in range(6):
        row = []
        for old in range(6):
            shift = prop.shifts[old + 1]
            if prop.mode == "pt":
                mono = TagMonomial(ep=-shift[0], eq=-shift[1])
            else:
                mono = TagMonomial(ep=-shift[0], eq=-shift[1], er=-shift[2])
            row.append(prop.entries[new][old] * TaggedPoly.term(mono, 1))
        entries.append(row)
    return PropagatorMatrix(entries=entries, shifts=dict(prop.shifts),
                            mode=prop.mode, convention=prop.convention,
                            fourier=True)


@dataclass
class TracePower:
    """tr Omega^r together with the loop sum f_r = tr / (2r)."""

    r: int
    trace: TaggedPoly
    loop_sum: TaggedPoly


def trace_power(prop: PropagatorMatrix, r: int) -> TracePower:
    if r < 1:
        raise ValueError("power must be at least 1")
    power = prop.entries
    for _ in range(r - 1):
        power = _mat_mul(power, prop.entries)
    tr = TaggedPoly.zero()
    for i in range(6):
        tr = tr + power[i][i]
    return TracePower(r=r, trace=tr, loop_sum=tr * Fraction(1, 2 * r))


def _mat_mul(a, b):
    out = []
    for i in range(6):
        row = []
        for j in range(6):
            acc = TaggedPoly.zero()
            for k in range(6):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def char_series(prop: PropagatorMatrix) -> XSeries:
    """det(I - x * Omega) as a degree-6 series with TaggedPoly coefficients.

    Uses the principal-minor expansion: the x^k coefficient is (-1)^k times
    the sum of all k x k principal minors.
    """
    out = XSeries(6)
    out.coeffs[0] = TaggedPoly.one()
    for subset in itertools.chain.from_iterable(
            itertools.combinations(range(6), k) for k in range(1, 7)):
        minor = _det([[prop.entries[i][j] for j in subset] for i in subset])
        k = len(subset)
        out.coeffs[k] = out.coeffs[k] + (minor if k % 2 == 0 else -minor)
    return out


def _det(matrix) -> TaggedPoly:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = TaggedPoly.zero()
    for j in range(n):
        if not matrix[0][j]:
            continue
        sub = [[row[c] for c in range(n) if c != j] for row in matrix[1:]]
        term = matrix[0][j] * _det(sub)
        total = total + (term if j % 2 == 0 else -term)
    return total


# ---------------------------------------------------------------------------
# loop walks


@dataclass(frozen=True)
class LoopWalk:
    """Closed non-backtracking walk rooted at a base cell.

    ``mode`` 'pt' walks the plane-triangular lattice; 'sc' walks the
    simple-cubic axes drawn in projection (closure means the projected
    polygon closes).
    """

    directions: tuple
    base: tuple = (0, 0)
    mode: str = "pt"

    def __post_init__(self):
        for a, b in zip(self.directions, self.directions[1:] + self.directions[:1]):
            if b == reverse_direction(a):
                raise ValueError("walk backtracks")

    @property
    def length(self) -> int:
        return len(self.directions)

    def _angles(self):
        table = PT_ANGLE if self.mode == "pt" else SC_ANGLE
        return [table[nu] for nu in self.directions]

    @cached_property
    def projected_positions(self) -> list[tuple[int, int]]:
        """Vertices visited in the drawing plane (axial coordinates),
        including the return to the base point."""
        if self.mode == "pt":
            steps = [PT_STEP[nu] for nu in self.directions]
            pos = [self.base]
        else:
            steps = [SC_STEP[nu] for nu in self.directions]
            base3 = self.base if len(self.base) == 3 else (0, 0, 0)
            pts3 = [base3]
            for s in steps:
                pts3.append(tuple(a + b for a, b in zip(pts3[-1], s)))
            return [project_sc(p) for p in pts3]
        for s in steps:
            pos.append((pos[-1][0] + s[0], pos[-1][1] + s[1]))
        return pos

    @property
    def is_closed(self) -> bool:
        pts = self.projected_positions
        return pts[0] == pts[-1]

    @cached_property
    def rotation_units(self) -> int:
        """Total tangent rotation in units of 60 degrees (cyclic)."""
        angles = self._angles()
        total = 0
        for a, b in zip(angles, angles[1:] + angles[:1]):
            k = turn_exponent(a, b)
            total += k
        return total

    @property
    def phase_exponent(self) -> int:
        return self.rotation_units

    @cached_property
    def phase(self) -> CycloNum:
        return cyclo_pow(self.rotation_units)

    @cached_property
    def tag(self) -> TagMonomial:
        """Accumulated axis-tag monomial (trivial in 'pt' mode).  Each step
        contributes its half-tag twice, once per adjacent transition."""
        if self.mode == "pt":
            return MONO_ONE
        mono = MONO_ONE
        for nu in self.directions:
            half = SC_HALF_TAG[nu]
            mono = mono * half * half
        return mono

    @cached_property
    def self_intersections(self) -> int:
        if not self.is_closed:
            raise ValueError("self-intersection count needs a closed walk")
        return count_crossings([self._drawn_loop()])

    def _drawn_loop(self):
        pts = self.projected_positions[:-1]
        angles = self._angles()
        return list(zip(pts, angles))

    def reversed_walk(self) -> "LoopWalk":
        revdirs = tuple(reverse_direction(nu) for nu in reversed(self.directions))
        return LoopWalk(directions=revdirs, base=self.base, mode=self.mode)


def count_crossings(loops) -> int:
    """Transversal self-intersections of a set of closed drawn loops.

    Each loop is a list of (axial position, drawn angle units) per step.
    Unit edges of the triangular drawing only meet at lattice vertices, so
    every crossing is localised there.  Repeated traversals of one edge are
    resolved into parallel strands offset to the left of the edge's
    canonical orientation; a crossing is a pair of vertex passages whose
    endpoints interleave in the circular order around the vertex.
    """
    unit = {0: (1, 0), 1: (0, 1), 2: (-1, 1), 3: (-1, 0), 4: (0, -1), 5: (1, -1)}
    # gather edge instances: (loop_idx, step_idx) -> geometric corridor
    corridor_users: dict = {}
    steps = []  # per loop: list of (src, dst, angle)
    for li, loop in enumerate(loops):
        seq = []
        npts = len(loop)
        for si, (pos, ang) in enumerate(loop):
            d = unit[ang % 6]
            dst = (pos[0] + d[0], pos[1] + d[1])
            key = (pos, dst) if pos <= dst else (dst, pos)
            corridor_users.setdefault(key, []).append((li, si))
            seq.append((pos, dst, ang % 6, key))
        steps.append(seq)
    offsets = {}
    for key, users in corridor_users.items():
        for t, user in enumerate(sorted(users), start=1):
            offsets[user] = t

    def boundary_point(vertex, key, instance, outgoing_angle):
        # circular position of a strand end around `vertex`
        lo, hi = key
        t = offsets[instance]
        sign = 1 if vertex == lo else -1
        return (outgoing_angle, sign * t)

    passages: dict = {}
    for li, seq in enumerate(steps):
        n = len(seq)
        for si in range(n):
            src, dst, ang, key = seq[si]
            nsrc, ndst, nang, nkey = seq[(si + 1) % n]
            # passage through `dst`: in along edge si, out along edge si+1
            p_in = boundary_point(dst, key, (li, si), (ang + 3) % 6)
            p_out = boundary_point(dst, nkey, (li, (si + 1) % n), nang)
            passages.setdefault(dst, []).append((p_in, p_out))
    crossings = 0
    for vertex, chords in passages.items():
        points = sorted({p for chord in chords for p in chord})
        index = {p: i for i, p in enumerate(points)}
        size = len(points)
        for (a1, b1), (a2, b2) in itertools.combinations(chords, 2):
            i1, j1 = sorted((index[a1], index[b1]))
            i2, j2 = index[a2], index[b2]
            inside = sum(1 for t in (i2, j2) if i1 < t < j1)
            if inside == 1:
                crossings += 1
    return crossings


def whitney_check(walk: LoopWalk) -> bool:
    """Whitney parity: the total tangent rotation is 2*pi*(index) and
    parity(index - 1) must equal the parity of the self-intersection count;
    equivalently the accumulated phase equals (-1)^(crossings + 1)."""
    units = walk.rotation_units
    if units % 6:
        raise ValueError("closed walk must rotate by a multiple of 2 pi")
    index = units // 6
    nu = walk.self_intersections
    parity_ok = (index - 1) % 2 == nu % 2
    phase_ok = walk.phase == CycloNum(-1 if nu % 2 == 0 else 1)
    return parity_ok and phase_ok


def enumerate_loops(max_len: int, base=(0, 0), mode: str = "pt",
                    dedup: str = "none", node_budget: int = 100_000_000):
    """All closed non-backtracking walks of length <= max_len from ``base``.

    dedup: 'none' keeps every rooted, directed walk; 'reversal' quotients
    by traversal sense; 'cyclic' additionally quotients by rotation of the
    direction sequence (the walk re-rooted at another base passage).
    """
    if max_len > 12:
        raise ValueError("max_len above the configured bound of 12")
    if mode == "pt":
        axial = PT_STEP
        base2 = base
    elif mode == "sc":
        # walk the projected drawing; closure is projected closure
        axial = {nu: _AXIAL_ANGLE_INV[SC_ANGLE[nu]] for nu in range(1, 7)}
        base2 = (0, 0)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    budget = [node_budget]
    found = []

    def walk(pos, dirs):
        if budget[0] <= 0:
            raise ResourceWarning("loop enumeration budget exhausted")
        budget[0] -= 1
        depth = len(dirs)
        for nu in range(1, 7):
            if dirs and nu == reverse_direction(dirs[-1]):
                continue
            s = axial[nu]
            nxt = (pos[0] + s[0], pos[1] + s[1])
            rel = (nxt[0] - base2[0], nxt[1] - base2[1])
            if _pt_dist(rel) > max_len - depth - 1:
                continue
            dirs.append(nu)
            if nxt == base2 and nu != reverse_direction(dirs[0]):
                found.append(tuple(dirs))
            if depth + 1 < max_len:
                walk(nxt, dirs)
            dirs.pop()

    walk(base2, [])
    if dedup != "none":
        seen = set()
        unique = []
        for dirs in found:
            key = _canonical_dirs(dirs, rotations=(dedup == "cyclic"))
            if key not in seen:
                seen.add(key)
                unique.append(dirs)
        found = unique
    return [LoopWalk(directions=d, base=base if mode == "pt" else base, mode=mode)
            for d in found]


_AXIAL_ANGLE_INV = {a: s for s, a in _AXIAL_ANGLE.items()}


def _pt_dist(v) -> int:
    a, b = v
    return (abs(a) + abs(b) + abs(a + b)) // 2


def _canonical_dirs(dirs, rotations: bool) -> tuple:
    rev = tuple(reverse_direction(nu) for nu in reversed(dirs))
    candidates = [tuple(dirs), rev]
    if rotations:
        pool = []
        for seq in candidates:
            for k in range(len(seq)):
                pool.append(seq[k:] + seq[:k])
        candidates = pool
    return min(candidates)


# ---------------------------------------------------------------------------
# even graphs in the drawing plane and their loop decompositions


@dataclass(frozen=True)
class PTGraphEdge:
    """One edge instance of a drawn even graph; ``axis`` is the simple-cubic
    axis label ('x','y','z') or None for a plain plane-triangular edge."""

    a: tuple
    b: tuple
    axis: str | None = None

    def __post_init__(self):
        d = (self.b[0] - self.a[0], self.b[1] - self.a[1])
        if d not in _AXIAL_ANGLE and (-d[0], -d[1]) not in _AXIAL_ANGLE:
            raise ValueError("edge endpoints are not lattice neighbours")


@dataclass
class DecompositionLoop:
    """One closed trail of a decomposition, with both orientation tags."""

    directions: tuple  # canonical orientation, direction indices
    start: tuple
    drawn: tuple  # ((position, angle units) per step, as traversed)
    phase_exponent: int
    tag_forward: TagMonomial
    tag_backward: TagMonomial

    @property
    def phase(self) -> CycloNum:
        return cyclo_pow(self.phase_exponent)

    def oriented_tags(self):
        return {self.tag_forward, self.tag_backward}


@dataclass
class Decomposition:
    loops: list
    signature: tuple = field(default=(), compare=False)

    @property
    def n_loops(self) -> int:
        return len(self.loops)

    @property
    def comb_sign(self) -> int:
        return -1 if self.n_loops % 2 else 1

    @property
    def phase(self) -> CycloNum:
        out = CYCLO_ONE
        for lp in self.loops:
            out = out * lp.phase
        return out

    def averaged_factor(self) -> TaggedPoly:
        """(-1)^s prod(phase) prod((tag+ + tag-)/2), the orientation class
        function that reproduces the propagator-series weighting."""
        poly = TaggedPoly.scalar(self.comb_sign)
        for lp in self.loops:
            half = (TaggedPoly.term(lp.tag_forward, Fraction(1, 2))
                    + TaggedPoly.term(lp.tag_backward, Fraction(1, 2)))
            poly = poly * half * lp.phase
        return poly

    def oriented_total_tags(self) -> set:
        """Every total tag achievable by orienting each loop independently."""
        totals = {MONO_ONE}
        for lp in self.loops:
            totals = {t * o for t in totals for o in lp.oriented_tags()}
        return totals


@dataclass
class GraphLoopSum:
    graph: list
    decompositions: list
    tagged_sum: TaggedPoly
    generic_monomial: TagMonomial

    def action_value(self) -> Fraction:
        """The per-graph filtering verdict: if some term has zero direction
        tags, substitute them away and read the scalar; otherwise zero."""
        if not any(m.lmn == (0, 0, 0) for m in self.tagged_sum.terms):
            return Fraction(0)
        collapsed = self.tagged_sum.substitute_lmn_one().substitute_uvw_one()
        return collapsed.rational_value()


def _edge_direction(frm, to, axis):
    step = (to[0] - frm[0], to[1] - frm[1])
    angle = _AXIAL_ANGLE[step]
    if axis is None:
        return pt_direction_of_step(step), angle
    for nu, ax in SC_AXIS.items():
        if ax == axis and SC_ANGLE[nu] == angle:
            return nu, angle
    raise ValueError(f"axis {axis} inconsistent with drawn angle {angle}")


def graph_loop_sum(edges, max_edges: int = 14) -> GraphLoopSum:
    """Sum over loop decompositions of an even drawn graph.

    ``edges``: iterable of PTGraphEdge (or (a, b) / (a, b, axis) tuples).
    Decompositions are the ways of pairing edge ends at every vertex
    without reversals; each is counted once up to re-rooting and loop
    reversal.  Tags are orientation-averaged per loop, which is exactly
    the weighting the propagator series applies.
    """
    inst = []
    for e in edges:
        if not isinstance(e, PTGraphEdge):
            e = PTGraphEdge(*e)
        inst.append(e)
    if len(inst) > max_edges:
        raise ValueError(f"graph has more than {max_edges} edges")
    ends: dict = {}
    for idx, e in enumerate(inst):
        ends.setdefault(e.a, []).append((idx, 0))
        ends.setdefault(e.b, []).append((idx, 1))
    for v, lst in ends.items():
        if len(lst) % 2:
            raise ValueError(f"odd degree at vertex {v}")

    def ray_angle(end):
        idx, side = end
        e = inst[idx]
        frm, to = (e.a, e.b) if side == 0 else (e.b, e.a)
        return _AXIAL_ANGLE[(to[0] - frm[0], to[1] - frm[1])]

    vertex_matchings = []
    for v, lst in sorted(ends.items()):
        vertex_matchings.append((v, _perfect_matchings(lst, ray_angle)))

    generic = MONO_ONE
    for e in inst:
        if e.axis == "x":
            generic = generic * TagMonomial(du=2)
        elif e.axis == "y":
            generic = generic * TagMonomial(dv=2)
        elif e.axis == "z":
            generic = generic * TagMonomial(dw=2)

    decomps = []
    seen_signatures = set()
    for combo in itertools.product(*(m for _, m in vertex_matchings)):
        partner = {}
        for matching in combo:
            for e1, e2 in matching:
                partner[e1] = e2
                partner[e2] = e1
        loops = _trace_loops(inst, partner)
        signature = tuple(sorted(lp_sig for lp_sig, _ in loops))
        if signature in seen_signatures:
            continue
        seen_signatures.add(signature)
        decomps.append(Decomposition(
            loops=[lp for _, lp in loops], signature=signature))

    total = TaggedPoly.zero()
    for d in decomps:
        total = total + d.averaged_factor()
    return GraphLoopSum(graph=inst, decompositions=decomps,
                        tagged_sum=total, generic_monomial=generic)


def _perfect_matchings(end_list, ray_angle):
    """All pairings of the ends at one vertex; pairs of equal ray angle
    would force a reversal and are excluded."""
    if not end_list:
        return [()]
    out = []
    first, rest = end_list[0], end_list[1:]
    for i, other in enumerate(rest):
        if ray_angle(first) == ray_angle(other):
            continue
        remainder = rest[:i] + rest[i + 1:]
        for sub in _perfect_matchings(remainder, ray_angle):
            out.append(((first, other),) + sub)
    return out


def _trace_loops(inst, partner):
    """Split a global end-pairing into closed trails.

    Returns a list of (signature, DecompositionLoop); the signature is the
    loop's geometric trace, canonical under rotation and reversal, so that
    decompositions differing only by a swap of parallel edge instances or
    by traversal sense coincide.
    """
    visited = set()
    loops = []
    for start_idx in range(len(inst)):
        if start_idx in visited:
            continue
        seq = []  # (edge_idx, from_side)
        idx, side = start_idx, 0
        while True:
            visited.add(idx)
            seq.append((idx, side))
            arrive_end = (idx, 1 - side)
            idx, side = partner[arrive_end]
            if (idx, side) == seq[0]:
                break
        dirs = []
        verts = []
        exponent = 0
        tag = MONO_ONE
        angles = []
        for idx, side in seq:
            e = inst[idx]
            frm, to = (e.a, e.b) if side == 0 else (e.b, e.a)
            nu, angle = _edge_direction(frm, to, e.axis)
            dirs.append(nu)
            verts.append(frm)
            angles.append(angle)
            if e.axis is not None:
                half = SC_HALF_TAG[nu]
                tag = tag * half * half
        for a, b in zip(angles, angles[1:] + angles[:1]):
            k = turn_exponent(a, b)
            if k is None:
                raise AssertionError("reversal slipped through matching filter")
            exponent += k
        geo = tuple(zip(verts, angles))
        sig = _loop_signature(geo)
        loops.append((sig, DecompositionLoop(
            directions=tuple(dirs), start=verts[0], drawn=geo,
            phase_exponent=exponent,
            tag_forward=tag, tag_backward=tag.reversed_walk())))
    return loops


def _loop_signature(geo) -> tuple:
    n = len(geo)
    forward = [geo[k:] + geo[:k] for k in range(n)]
    rev = []
    for k in range(n):
        rot = geo[k:] + geo[:k]
        # reversed traversal visits the far endpoints with flipped angles
        rr = []
        for (pos, ang) in reversed(rot):
            unit = _AXIAL_ANGLE_INV[ang]
            far = (pos[0] + unit[0], pos[1] + unit[1])
            rr.append((far, (ang + 3) % 6))
        rev.append(tuple(rr))
    return min(tuple(c) for c in forward + [tuple(r) for r in rev])


def decomposition_crossings(decomp: Decomposition) -> int:
    """Transversal crossings of all loops of one decomposition together."""
    return count_crossings([list(lp.drawn) for lp in decomp.loops])


# helpers for building drawn graphs from simple-cubic data


def sc_walk_edges(steps, base3=(0, 0, 0)) -> list[PTGraphEdge]:
    """Drawn edge instances of a simple-cubic walk given by direction
    indices (the walk need not be closed in 3D, only in projection)."""
    pos = base3
    out = []
    for nu in steps:
        step = SC_STEP[nu]
        nxt = tuple(a + b for a, b in zip(pos, step))
        out.append(PTGraphEdge(project_sc(pos), project_sc(nxt), SC_AXIS[nu]))
        pos = nxt
    return out


def sc_edge_set_to_graph(edges3) -> list[PTGraphEdge]:
    """Project a set of simple-cubic edges, given as (site, axis) pairs
    with site the endpoint the positive step leaves from."""
    out = []
    axis_step = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}
    for site, axis in edges3:
        far = tuple(a + b for a, b in zip(site, axis_step[axis]))
        out.append(PTGraphEdge(project_sc(site), project_sc(far), axis))
    return out
