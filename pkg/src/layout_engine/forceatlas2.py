"""
ForceAtlas2 Layout Engine
=========================
Force-directed placement for the interaction graph and the term maps.

Forces on a node n with mass m(n) = degree(n) + 1:
- repulsion from every other node: scaling * m1 * m2 / d, pushing apart
  (Barnes-Hut approximated when bh_theta > 0)
- attraction along each edge: weight * d, or weight * log(1 + d) in LinLog
  mode, divided by the source mass when hubs are dissuaded
- gravity: gravity * m(n) toward the origin

With prevent_overlap, distances are measured border to border; overlapping
nodes repel with a fixed strong force and do not attract.

Usage:
    lg = LayoutGraph.from_interaction_graph(g)
    result = run_layout(lg, LayoutParams(iterations=500, seed=7))
    result.positions["n017"]
"""

import csv
import io
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import DEFAULT_SEED, LAYOUT_DEFAULTS
from src.errors import ConfigError, DegenerateGeometry, LayoutError, NoNodes
from src.layout_engine.quadtree import QuadTree

logger = logging.getLogger(__name__)

MIN_SPEED = 1e-6
MAX_SPEED_GROWTH = 1.5
JITTER_SCALE = 0.01


# ==================== PARAMETERS ====================

@dataclass(frozen=True)
class LayoutParams:
    gravity: float = LAYOUT_DEFAULTS["gravity"]
    bh_theta: float = LAYOUT_DEFAULTS["bh_theta"]
    scaling: float = LAYOUT_DEFAULTS["scaling"]
    dissuade_hubs: bool = LAYOUT_DEFAULTS["dissuade_hubs"]
    prevent_overlap: bool = LAYOUT_DEFAULTS["prevent_overlap"]
    linlog: bool = LAYOUT_DEFAULTS["linlog"]
    iterations: int = LAYOUT_DEFAULTS["iterations"]
    seed: int = DEFAULT_SEED
    node_sizes: Optional[Mapping[str, float]] = None
    speed_constant: float = LAYOUT_DEFAULTS["speed_constant"]
    max_displacement: float = LAYOUT_DEFAULTS["max_displacement"]
    jitter_tolerance: float = LAYOUT_DEFAULTS["jitter_tolerance"]
    overlap_repulsion: float = LAYOUT_DEFAULTS["overlap_repulsion"]
    default_radius: float = LAYOUT_DEFAULTS["default_radius"]
    init_extent: float = LAYOUT_DEFAULTS["init_extent"]
    min_displacement: Optional[float] = None

    def __post_init__(self):
        checks = [
            (self.gravity >= 0, "gravity must be >= 0"),
            (self.bh_theta >= 0, "bh_theta must be >= 0"),
            (self.scaling > 0, "scaling must be > 0"),
            (self.iterations >= 1, "iterations must be >= 1"),
            (self.speed_constant > 0, "speed_constant must be > 0"),
            (self.max_displacement > 0, "max_displacement must be > 0"),
            (self.jitter_tolerance > 0, "jitter_tolerance must be > 0"),
            (self.default_radius >= 0, "default_radius must be >= 0"),
            (self.init_extent > 0, "init_extent must be > 0"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)
        if self.node_sizes and any(r < 0 for r in self.node_sizes.values()):
            raise ConfigError("node sizes must be >= 0")

    def with_overrides(self, **overrides) -> "LayoutParams":
        return replace(self, **overrides)

    def to_dict(self) -> Dict:
        data = {k: v for k, v in self.__dict__.items() if k != "node_sizes"}
        data["node_sizes"] = dict(sorted(self.node_sizes.items())) if self.node_sizes else None
        return data


# ==================== GRAPH VIEW ====================

@dataclass(frozen=True, eq=False)
class LayoutGraph:
    """Undirected weighted view the engine works on; nodes are kept in sorted order"""
    nodes: Tuple[str, ...]
    sources: np.ndarray
    targets: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_edges(cls, nodes: Iterable[str], edges: Iterable[Tuple[str, str, float]]) -> "LayoutGraph":
        ordered = tuple(sorted(set(nodes)))
        index = {n: i for i, n in enumerate(ordered)}
        seen = set()
        src, dst, wts = [], [], []
        for u, v, w in edges:
            if u == v or frozenset((u, v)) in seen:
                continue
            seen.add(frozenset((u, v)))
            src.append(index[u])
            dst.append(index[v])
            wts.append(float(w))
        return cls(
            nodes=ordered,
            sources=np.array(src, dtype=np.int64),
            targets=np.array(dst, dtype=np.int64),
            weights=np.array(wts, dtype=float),
        )

    @classmethod
    def from_interaction_graph(cls, g) -> "LayoutGraph":
        """One unit-weight edge per connected pair; the first direction seen is the source"""
        return cls.from_edges(g.nodes, ((u, v, 1.0) for (u, v) in g.edges))

    @classmethod
    def from_similarity(cls, terms: Sequence[str], sim: Mapping[Tuple[str, str], float]) -> "LayoutGraph":
        order = {t: i for i, t in enumerate(terms)}
        edges = sorted(((a, b, s) for (a, b), s in sim.items() if s > 0 and order[a] < order[b]),
                       key=lambda e: (order[e[0]], order[e[1]]))
        return cls.from_edges(terms, edges)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def degree(self) -> np.ndarray:
        ends = np.concatenate([self.sources, self.targets])
        return np.bincount(ends, minlength=len(self.nodes)).astype(float)

    @cached_property
    def mass(self) -> np.ndarray:
        return self.degree + 1.0

    def radii(self, p: LayoutParams) -> np.ndarray:
        sizes = p.node_sizes or {}
        return np.array([float(sizes.get(n, p.default_radius)) for n in self.nodes])

    def __len__(self) -> int:
        return len(self.nodes)


# ==================== STATE ====================

@dataclass
class LayoutState:
    positions: np.ndarray
    prev_forces: np.ndarray
    global_speed: float = 1.0
    step: int = 0
    cap_hits: int = 0
    jitter_events: int = 0
    mean_displacement: float = 0.0

    def positions_map(self, nodes: Sequence[str]) -> Dict[str, Tuple[float, float]]:
        return {n: (float(x), float(y)) for n, (x, y) in zip(nodes, self.positions)}


def init_layout(nodes: Sequence[str], seed: int = DEFAULT_SEED,
                extent: float = LAYOUT_DEFAULTS["init_extent"]) -> LayoutState:
    """Seeded uniform positions in a square of side `extent` centred on the origin"""
    n = len(nodes)
    if n == 0:
        raise NoNodes()
    rng = np.random.default_rng(seed)
    positions = rng.uniform(-extent / 2, extent / 2, size=(n, 2))
    while len(np.unique(positions, axis=0)) < n:
        dup = _duplicate_rows(positions)
        positions[dup] = rng.uniform(-extent / 2, extent / 2, size=(len(dup), 2))
    return LayoutState(positions=positions, prev_forces=np.zeros((n, 2)))


def state_from_positions(lg: LayoutGraph, positions) -> LayoutState:
    """Start from given positions (mapping node -> (x, y) or an (n, 2) array in node order)"""
    if isinstance(positions, Mapping):
        arr = np.array([positions[n] for n in lg.nodes], dtype=float)
    else:
        arr = np.array(positions, dtype=float).reshape(len(lg), 2)
    return LayoutState(positions=arr, prev_forces=np.zeros_like(arr))


def _duplicate_rows(positions: np.ndarray) -> List[int]:
    """Indices of every node that repeats an earlier node's position"""
    seen = {}
    dup = []
    for i, row in enumerate(map(tuple, positions.tolist())):
        if row in seen:
            dup.append(i)
        else:
            seen[row] = i
    return dup


def _first_coincident(positions: np.ndarray) -> Optional[Tuple[int, int]]:
    seen = {}
    for i, row in enumerate(map(tuple, positions.tolist())):
        if row in seen:
            return seen[row], i
        seen[row] = i
    return None


def separate_coincident(lg: LayoutGraph, st: LayoutState, p: LayoutParams) -> LayoutState:
    """Nudge nodes sharing a position apart with seeded jitter"""
    dup = _duplicate_rows(st.positions)
    if not dup:
        return st
    rng = np.random.default_rng([p.seed, st.step])
    positions = st.positions.copy()
    while dup:
        positions[dup] += rng.uniform(-JITTER_SCALE, JITTER_SCALE, size=(len(dup), 2))
        dup = _duplicate_rows(positions)
    moved = len(_duplicate_rows(st.positions))
    logger.warning("Step %d: %d node(s) coincided with another and were jittered", st.step, moved)
    return replace(st, positions=positions, jitter_events=st.jitter_events + moved)


# ==================== FORCES ====================

def _repulsion_factor(mm: np.ndarray, dist: np.ndarray, border: Optional[np.ndarray],
                      p: LayoutParams) -> np.ndarray:
    """Force per unit of separation; `border` is None unless overlap is prevented"""
    if border is None:
        return mm / (dist * dist)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(border > 0, mm / (dist * border), p.overlap_repulsion * mm / dist)


def _exact_repulsion(pos: np.ndarray, mass: np.ndarray, radii: np.ndarray, p: LayoutParams) -> np.ndarray:
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    mm = p.scaling * np.outer(mass, mass)
    border = dist - radii[:, None] - radii[None, :] if p.prevent_overlap else None
    factor = _repulsion_factor(mm, dist, border, p)
    np.fill_diagonal(factor, 0.0)
    return (factor[:, :, None] * diff).sum(axis=1)


def _barnes_hut_repulsion(pos: np.ndarray, mass: np.ndarray, radii: np.ndarray,
                          p: LayoutParams, theta: float) -> np.ndarray:
    n = len(pos)
    tree = QuadTree(pos, mass, radii)
    (pi, pj), (bi, bc) = tree.interactions(theta, clearance=p.prevent_overlap)

    delta = pos[pi] - pos[pj]
    dist = np.sqrt((delta ** 2).sum(axis=1))
    border = dist - radii[pi] - radii[pj] if p.prevent_overlap else None
    pair = delta * _repulsion_factor(p.scaling * mass[pi] * mass[pj], dist, border, p)[:, None]

    # A body repels like its members under the same law, border measured to its mean radius
    field, body_dist = tree.body_field(bi, bc)
    strength = p.scaling * mass[bi]
    if p.prevent_overlap:
        strength = strength * body_dist / (body_dist - radii[bi] - tree.mean_radius[bc])
    body = np.column_stack([field.real * strength, -field.imag * strength])

    forces = np.empty((n, 2))
    for axis in range(2):
        forces[:, axis] = (np.bincount(pi, weights=pair[:, axis], minlength=n)
                           + np.bincount(bi, weights=body[:, axis], minlength=n))
    return forces


def repulsion_forces(lg: LayoutGraph, positions: np.ndarray, p: LayoutParams,
                     theta: Optional[float] = None) -> np.ndarray:
    """Repulsion only; theta 0 takes the exact all-pairs path"""
    theta = p.bh_theta if theta is None else theta
    if len(lg) < 2:
        return np.zeros((len(lg), 2))
    radii = lg.radii(p)
    if theta == 0:
        return _exact_repulsion(positions, lg.mass, radii, p)
    return _barnes_hut_repulsion(positions, lg.mass, radii, p, theta)


def attraction_forces(lg: LayoutGraph, positions: np.ndarray, p: LayoutParams) -> np.ndarray:
    forces = np.zeros_like(positions)
    if len(lg.sources) == 0:
        return forces
    s, t = lg.sources, lg.targets
    delta = positions[s] - positions[t]
    dist = np.sqrt((delta ** 2).sum(axis=1))
    if p.prevent_overlap:
        radii = lg.radii(p)
        span = dist - radii[s] - radii[t]
    else:
        span = dist
    active = (span > 0) & (dist > 0)
    span = np.where(active, span, 0.0)

    magnitude = lg.weights * (np.log1p(span) if p.linlog else span)
    if p.dissuade_hubs:
        magnitude = magnitude / lg.mass[s]
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(active, -magnitude / dist, 0.0)

    pull = delta * factor[:, None]
    np.add.at(forces, s, pull)
    np.add.at(forces, t, -pull)
    return forces


def gravity_forces(lg: LayoutGraph, positions: np.ndarray, p: LayoutParams) -> np.ndarray:
    dist = np.sqrt((positions ** 2).sum(axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(dist > 0, -p.gravity * lg.mass / dist, 0.0)
    return positions * factor[:, None]


def compute_forces(lg: LayoutGraph, st: LayoutState, p: LayoutParams) -> np.ndarray:
    """Total force per node, rows in node order"""
    clash = _first_coincident(st.positions)
    if clash is not None:
        raise DegenerateGeometry(lg.nodes[clash[0]], lg.nodes[clash[1]])
    pos = st.positions
    return repulsion_forces(lg, pos, p) + attraction_forces(lg, pos, p) + gravity_forces(lg, pos, p)


# ==================== ITERATION ====================

def _norms(v: np.ndarray) -> np.ndarray:
    return np.sqrt((v ** 2).sum(axis=1))


def step_layout(lg: LayoutGraph, st: LayoutState, p: LayoutParams) -> LayoutState:
    """One adaptive-speed move; returns a new state"""
    st = separate_coincident(lg, st, p)
    forces = compute_forces(lg, st, p)

    swinging = _norms(forces - st.prev_forces)
    traction = _norms(forces + st.prev_forces) / 2
    total_swinging = float((lg.mass * swinging).sum())
    total_traction = float((lg.mass * traction).sum())

    speed = st.global_speed
    if total_swinging > 0:
        target = p.jitter_tolerance * total_traction / total_swinging
        speed = max(min(target, MAX_SPEED_GROWTH * speed), MIN_SPEED)

    factor = p.speed_constant * speed / (1 + speed * np.sqrt(swinging))
    displacement = forces * factor[:, None]
    length = _norms(displacement)
    capped = length > p.max_displacement
    if capped.any():
        displacement[capped] *= (p.max_displacement / length[capped])[:, None]
        length = _norms(displacement)

    positions = st.positions + displacement
    if not np.isfinite(positions).all():
        raise LayoutError(f"non-finite position at step {st.step + 1}")

    return LayoutState(
        positions=positions,
        prev_forces=forces,
        global_speed=speed,
        step=st.step + 1,
        cap_hits=st.cap_hits + int(capped.sum()),
        jitter_events=st.jitter_events,
        mean_displacement=float(length.mean()) if len(length) else 0.0,
    )


@dataclass(frozen=True)
class TraceRow:
    step: int
    mean_displacement: float
    global_speed: float


@dataclass
class LayoutResult:
    positions: Dict[str, Tuple[float, float]]
    steps: int
    cap_hits: int = 0
    jitter_events: int = 0
    trace: List[TraceRow] = field(default_factory=list)


def run_layout(lg: LayoutGraph, p: LayoutParams, initial_positions=None,
               trace: bool = False, progress: bool = False) -> LayoutResult:
    """init_layout, then `iterations` steps (fewer if min_displacement is reached)"""
    if len(lg) == 0:
        raise NoNodes()
    if initial_positions is None:
        st = init_layout(lg.nodes, p.seed, p.init_extent)
    else:
        st = state_from_positions(lg, initial_positions)

    rows: List[TraceRow] = []
    for _ in tqdm(range(p.iterations), desc="layout", unit="step", disable=not progress):
        st = step_layout(lg, st, p)
        if trace:
            rows.append(TraceRow(st.step, st.mean_displacement, st.global_speed))
        if p.min_displacement is not None and st.mean_displacement < p.min_displacement:
            logger.info("Layout settled after %d steps", st.step)
            break

    if st.cap_hits:
        logger.warning("Displacement cap hit %d times over %d steps", st.cap_hits, st.step)
    return LayoutResult(
        positions=st.positions_map(lg.nodes),
        steps=st.step,
        cap_hits=st.cap_hits,
        jitter_events=st.jitter_events,
        trace=rows,
    )


# ==================== OUTPUT ====================

def positions_csv(positions: Mapping[str, Tuple[float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node", "x", "y"])
    for node in sorted(positions):
        x, y = positions[node]
        writer.writerow([node, repr(float(x)), repr(float(y))])
    return buf.getvalue()


def trace_csv(rows: Sequence[TraceRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "mean_displacement", "global_speed"])
    for r in rows:
        writer.writerow([r.step, repr(r.mean_displacement), repr(r.global_speed)])
    return buf.getvalue()
