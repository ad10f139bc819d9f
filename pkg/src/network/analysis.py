"""
Graph analysis: node roles, summary statistics, diameter, degree scatter data.
"""

import csv
import io
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Set

import networkx as nx

from config.settings import DEFAULT_LOG_BASE, DEFAULT_TOP_K, DEGREE_THRESHOLDS
from src.errors import EmptyGraph, NoEdges
from src.network.builder import InteractionGraph

logger = logging.getLogger(__name__)


class NodeRole(str, Enum):
    INFORMATIVE_ONLY = "InformativeOnly"
    SOURCE_ONLY = "SourceOnly"
    SINK_ONLY = "SinkOnly"
    MIXED = "Mixed"


def node_role(indegree: int, outdegree: int) -> NodeRole:
    if indegree and outdegree:
        return NodeRole.MIXED
    if outdegree:
        return NodeRole.SOURCE_ONLY
    if indegree:
        return NodeRole.SINK_ONLY
    return NodeRole.INFORMATIVE_ONLY


def assign_roles(g: InteractionGraph) -> Dict[str, NodeRole]:
    """Roles from distinct-edge degrees; weights play no part"""
    return {n: node_role(g.in_degree(n), g.out_degree(n)) for n in g.nodes}


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    mean_degree: float
    density: float
    directed_density: float
    diameter: int
    component_count: int
    isolated_count: int
    role_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)


def _largest_component(g: InteractionGraph) -> Set[str]:
    # Ties go to the component holding the smallest user id
    return min(nx.weakly_connected_components(g.graph), key=lambda c: (-len(c), min(c)))


def diameter_of(g: InteractionGraph, treat_as: str = "undirected") -> int:
    """Longest shortest path (in edges) inside the largest weakly connected component"""
    if treat_as != "undirected":
        raise ValueError(f"only undirected diameters are supported, got {treat_as!r}")
    if g.edge_count == 0:
        raise NoEdges()

    component = _largest_component(g)
    view = g.graph.subgraph(component).to_undirected(as_view=True)
    diameter = 0
    for source in sorted(component):
        lengths = nx.single_source_shortest_path_length(view, source)
        diameter = max(diameter, max(lengths.values()))
    return diameter


def graph_stats(g: InteractionGraph) -> GraphStats:
    n = g.node_count
    if n == 0:
        raise EmptyGraph()
    e = g.edge_count
    e_undirected = g.undirected().number_of_edges()
    pairs = n * (n - 1)

    roles = assign_roles(g)
    counts = Counter(roles.values())
    role_counts = {role.value: counts.get(role, 0) for role in NodeRole}

    return GraphStats(
        node_count=n,
        edge_count=e,
        mean_degree=e / n,
        density=2 * e_undirected / pairs if pairs else 0.0,
        directed_density=e / pairs if pairs else 0.0,
        diameter=diameter_of(g) if e else 0,
        component_count=nx.number_weakly_connected_components(g.graph),
        isolated_count=role_counts[NodeRole.INFORMATIVE_ONLY.value],
        role_counts=role_counts,
    )


# ==================== DEGREES ====================

@dataclass(frozen=True)
class ScatterRow:
    user_id: str
    indegree: int
    outdegree: int
    log1p_in: float
    log1p_out: float


def scatter_data(g: InteractionGraph, log_base: float = DEFAULT_LOG_BASE) -> List[ScatterRow]:
    """One row per node, sorted by user id; log1p values are log(1 + degree) in log_base"""
    if log_base <= 1:
        raise ValueError("log_base must be > 1")
    scale = math.log(log_base)
    rows = []
    for n in g.nodes:
        din, dout = g.in_degree(n), g.out_degree(n)
        rows.append(ScatterRow(n, din, dout, math.log1p(din) / scale, math.log1p(dout) / scale))
    return rows


def one_sided_share(rows: Sequence[ScatterRow]) -> float:
    """Fraction of nodes with exactly one of in/out degree equal to zero"""
    if not rows:
        return 0.0
    return sum(1 for r in rows if (r.indegree == 0) != (r.outdegree == 0)) / len(rows)


def degree_threshold_summary(g: InteractionGraph, thresholds: Sequence[int] = DEGREE_THRESHOLDS) -> List[Dict]:
    """For each t: nodes with indegree >= t (and how many also send), and the mirror for outdegree"""
    summary = []
    for t in thresholds:
        receivers = [n for n in g.nodes if g.in_degree(n) >= t]
        senders = [n for n in g.nodes if g.out_degree(n) >= t]
        summary.append({
            "threshold": t,
            "indegree_at_least": len(receivers),
            "of_which_outdegree_positive": sum(1 for n in receivers if g.out_degree(n) > 0),
            "outdegree_at_least": len(senders),
            "of_which_indegree_positive": sum(1 for n in senders if g.in_degree(n) > 0),
        })
    return summary


def top_nodes(g: InteractionGraph, k: int = DEFAULT_TOP_K, by: str = "indegree") -> List[Dict]:
    if by not in ("indegree", "outdegree"):
        raise ValueError(f"by must be 'indegree' or 'outdegree', got {by!r}")
    degree = g.in_degree if by == "indegree" else g.out_degree
    ranked = sorted(g.nodes, key=lambda n: (-degree(n), n))[:k]
    return [{"user_id": n, "indegree": g.in_degree(n), "outdegree": g.out_degree(n)} for n in ranked]


SCATTER_FIELDS = ["user_id", "indegree", "outdegree", "log1p_in", "log1p_out"]


def scatter_csv(rows: Sequence[ScatterRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCATTER_FIELDS)
    for r in rows:
        writer.writerow([r.user_id, r.indegree, r.outdegree, repr(r.log1p_in), repr(r.log1p_out)])
    return buf.getvalue()
