"""
Barnes-Hut quadtree for approximate repulsion.

The tree is linear: every node gets a Morton code inside the bounding square
of the current positions, and the cells of level l are the runs of equal
codes shifted right by 2 * (MAX_DEPTH - l). Nodes are ordered by code, then
index, so cell membership and every reduction run in a fixed order for
given positions. Sibling cells come NW, NE, SW, SE.

A cell of width w whose center of mass lies at distance d from a node is
used as one body when w / d < theta and no member lies farther than
d * theta / 2 from the center of mass. A body's field is the complex
multipole sum_k a_k / (z - c) ** (k + 1) with a_k = sum_j m_j (z_j - c) ** k,
which is the 1/d repulsion of its members to within (theta / 2) ** (order + 1).

Usage:
    tree = QuadTree(positions, mass, radii)
    pairs, bodies = tree.interactions(theta=1.2)
    field, dist = tree.body_field(*bodies)
"""

from typing import List, Optional, Tuple

import numpy as np

MAX_DEPTH = 20
MULTIPOLE_ORDER = 20
MAX_SPREAD_RATIO = 0.6

_SPREAD_STEPS = (
    (16, 0x0000FFFF0000FFFF),
    (8, 0x00FF00FF00FF00FF),
    (4, 0x0F0F0F0F0F0F0F0F),
    (2, 0x3333333333333333),
    (1, 0x5555555555555555),
)

Interaction = Tuple[np.ndarray, np.ndarray]


def _spread_bits(v: np.ndarray) -> np.ndarray:
    v = v.astype(np.uint64)
    for shift, mask in _SPREAD_STEPS:
        v = (v | (v << np.uint64(shift))) & np.uint64(mask)
    return v


def morton_codes(positions: np.ndarray, origin: np.ndarray, size: float,
                 depth: int = MAX_DEPTH) -> np.ndarray:
    """Interleaved grid coordinates; x takes the even bits, y counts down from the top"""
    cells = 1 << depth
    grid = np.floor((positions - origin) / size * cells).astype(np.int64)
    grid = np.clip(grid, 0, cells - 1)
    down = cells - 1 - grid[:, 1]
    return _spread_bits(grid[:, 0]) | (_spread_bits(down) << np.uint64(1))


def ragged_ranges(starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Concatenation of range(s, s + l) for each (s, l)"""
    lengths = lengths.astype(np.int64)
    if not len(lengths):
        return np.zeros(0, dtype=np.int64)
    offsets = np.repeat(starts - np.cumsum(lengths) + lengths, lengths)
    return offsets + np.arange(int(lengths.sum()))


class QuadTree:
    """Mass-weighted quadtree over node positions, stored as flat per-cell arrays"""

    def __init__(self, positions: np.ndarray, mass: np.ndarray,
                 radii: Optional[np.ndarray] = None, order: int = MULTIPOLE_ORDER):
        pos = np.asarray(positions, dtype=float)
        n = len(pos)
        self.n = n
        self.z = pos[:, 0] + 1j * pos[:, 1]
        self.radii = np.zeros(n) if radii is None else np.asarray(radii, dtype=float)
        node_mass = np.asarray(mass, dtype=float)

        self.origin = pos.min(axis=0)
        size = float((pos.max(axis=0) - self.origin).max())
        # Pad so points on the upper boundary fall inside
        self.size = size * (1 + 1e-9) + 1e-9

        codes = morton_codes(pos, self.origin, self.size)
        self.order = np.argsort(codes, kind="stable")
        codes = codes[self.order]

        keys: List[np.ndarray] = []
        starts: List[np.ndarray] = []
        for level in range(MAX_DEPTH + 1):
            level_keys = codes >> np.uint64(2 * (MAX_DEPTH - level))
            first = np.flatnonzero(np.r_[True, level_keys[1:] != level_keys[:-1]])
            keys.append(level_keys[first])
            starts.append(first)
            if len(first) == n:
                break
        self.depth = len(keys) - 1

        counts = [np.diff(np.r_[s, n]) for s in starts]
        offsets = np.cumsum([0] + [len(s) for s in starts])
        self.start = np.concatenate(starts)
        self.count = np.concatenate(counts)
        self.width = np.concatenate([np.full(len(s), self.size / 2 ** lv) for lv, s in enumerate(starts)])

        # Own cell of each node per level, indexed by node
        self.own = []
        for lv, c in enumerate(counts):
            own = np.empty(n, dtype=np.int64)
            own[self.order] = offsets[lv] + np.repeat(np.arange(len(c)), c)
            self.own.append(own)

        self.child_lo = np.zeros(len(self.count), dtype=np.int64)
        self.child_hi = np.zeros(len(self.count), dtype=np.int64)
        for lv in range(self.depth):
            parents = keys[lv + 1] >> np.uint64(2)
            span = slice(offsets[lv], offsets[lv + 1])
            self.child_lo[span] = offsets[lv + 1] + np.searchsorted(parents, keys[lv], side="left")
            self.child_hi[span] = offsets[lv + 1] + np.searchsorted(parents, keys[lv], side="right")

        # Every level reduces over the same sorted nodes; stack them for one reduceat per sum
        levels = len(starts)
        segments = np.concatenate([s + lv * n for lv, s in enumerate(starts)])
        cell_of = np.repeat(np.arange(len(self.count)), self.count)
        m = np.tile(node_mass[self.order], levels)
        z = np.tile(self.z[self.order], levels)
        r = np.tile(self.radii[self.order], levels)

        self.mass = np.add.reduceat(m, segments)
        self.center = np.add.reduceat(m * z, segments) / self.mass
        delta = z - self.center[cell_of]
        self.spread = np.maximum.reduceat(np.abs(delta), segments)
        self.max_radius = np.maximum.reduceat(r, segments)
        self.mean_radius = np.add.reduceat(m * r, segments) / self.mass

        self.moments = np.empty((len(self.count), order + 1), dtype=complex)
        term = m.astype(complex)
        for k in range(order + 1):
            self.moments[:, k] = np.add.reduceat(term, segments)
            term = term * delta

    def members(self, cell: int) -> np.ndarray:
        return self.order[self.start[cell]:self.start[cell] + self.count[cell]]

    def interactions(self, theta: float, clearance: bool = False) -> Tuple[Interaction, Interaction]:
        """
        Split all ordered node pairs into exact pairs and node-body pairs.

        Cells containing the node are always opened. With clearance, a cell is
        only used as a body when every member's border stays clear of the node's.
        Returns ((i, j) exact pairs, (i, cell) bodies).
        """
        spread_ratio = min(theta / 2, MAX_SPREAD_RATIO)
        leaf_i, leaf_c, body_i, body_c = [], [], [], []
        node = np.arange(self.n)
        cell = np.zeros(self.n, dtype=np.int64)
        for level in range(self.depth + 1):
            if not len(node):
                break
            own = self.own[level][node] == cell
            leaf = (self.count[cell] == 1) | (self.child_lo[cell] == self.child_hi[cell])
            take = leaf & ~(own & (self.count[cell] == 1))
            leaf_i.append(node[take])
            leaf_c.append(cell[take])

            opened = ~leaf
            far = np.flatnonzero(opened & ~own)
            if theta > 0 and len(far):
                fi, fc = node[far], cell[far]
                d = np.abs(self.z[fi] - self.center[fc])
                ok = (self.width[fc] < theta * d) & (self.spread[fc] < spread_ratio * d)
                if clearance:
                    ok &= d - self.spread[fc] > self.radii[fi] + self.max_radius[fc]
                body_i.append(fi[ok])
                body_c.append(fc[ok])
                opened[far[ok]] = False

            parents = cell[opened]
            kids = self.child_hi[parents] - self.child_lo[parents]
            node = np.repeat(node[opened], kids)
            cell = ragged_ranges(self.child_lo[parents], kids)

        li = np.concatenate(leaf_i)
        lc = np.concatenate(leaf_c)
        sizes = self.count[lc]
        pi = np.repeat(li, sizes)
        pj = self.order[ragged_ranges(self.start[lc], sizes)]
        keep = pi != pj
        bodies = (np.concatenate(body_i), np.concatenate(body_c)) if body_i else (
            np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
        return (pi[keep], pj[keep]), bodies

    def body_field(self, nodes: np.ndarray, cells: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """sum_j m_j / (z_i - z_j) over each body's members, and the distance to its center"""
        w = self.z[nodes] - self.center[cells]
        inv = 1.0 / w
        moments = self.moments[cells]
        acc = moments[:, -1]
        for k in range(moments.shape[1] - 2, -1, -1):
            acc = acc * inv + moments[:, k]
        return acc * inv, np.abs(w)
