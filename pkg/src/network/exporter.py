"""
Graph export and re-import: GraphML, Graphviz dot, and an edge-list CSV.

Output bytes are deterministic for a given graph: nodes and edges are
written in sorted order.
"""

import csv
import io
import logging
from typing import Dict, Mapping, Optional, Tuple

import networkx as nx

from config.settings import EXPORT_FORMATS
from src.errors import UnknownFormat
from src.network.analysis import NodeRole
from src.network.builder import EdgeWeight, InteractionGraph

logger = logging.getLogger(__name__)

EDGE_CSV_FIELDS = ["source", "target", "mentions", "retweets"]
READ_FORMATS = ("graphml", "edges_csv")


def _attributed_graph(g: InteractionGraph, roles: Mapping[str, NodeRole],
                      positions: Optional[Mapping[str, Tuple[float, float]]]) -> nx.DiGraph:
    if positions is not None:
        missing = [n for n in g.nodes if n not in positions]
        if missing:
            raise ValueError(f"positions missing for {len(missing)} nodes, e.g. {missing[0]!r}")

    out = nx.DiGraph()
    for n in g.nodes:
        attrs = {"role": NodeRole(roles[n]).value}
        if positions is not None:
            x, y = positions[n]
            attrs["x"], attrs["y"] = float(x), float(y)
        out.add_node(n, **attrs)
    for (u, v), w in g.edges.items():
        out.add_edge(u, v, mentions=w.mention_count, retweets=w.retweet_count, weight=w.total)
    return out


def _edges_csv(g: InteractionGraph) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EDGE_CSV_FIELDS)
    for (u, v), w in g.edges.items():
        writer.writerow([u, v, w.mention_count, w.retweet_count])
    # Nodes without any edge keep a row so the node set survives a round trip
    for n in g.nodes:
        if g.in_degree(n) == 0 and g.out_degree(n) == 0:
            writer.writerow([n, "", 0, 0])
    return buf.getvalue().encode("utf-8")


def export_graph(g: InteractionGraph, roles: Mapping[str, NodeRole],
                 positions: Optional[Mapping[str, Tuple[float, float]]] = None,
                 fmt: str = "graphml") -> bytes:
    if fmt not in EXPORT_FORMATS:
        raise UnknownFormat(fmt, EXPORT_FORMATS)
    if fmt == "edges_csv":
        return _edges_csv(g)

    attributed = _attributed_graph(g, roles, positions)
    if fmt == "graphml":
        return ("\n".join(nx.generate_graphml(attributed)) + "\n").encode("utf-8")
    return (nx.nx_pydot.to_pydot(attributed).to_string()).encode("utf-8")


def _from_graphml(data: bytes) -> InteractionGraph:
    parsed = nx.read_graphml(io.BytesIO(data))
    g = InteractionGraph()
    for n, attrs in parsed.nodes(data=True):
        g.add_node(str(n))
        g.graph.nodes[str(n)].update(attrs)
    for u, v, attrs in parsed.edges(data=True):
        g.add_interactions(str(u), str(v), int(attrs.get("mentions", 0)), int(attrs.get("retweets", 0)))
    return g


def _from_edges_csv(data: bytes) -> InteractionGraph:
    nodes, edges = [], {}
    reader = csv.DictReader(io.StringIO(data.decode("utf-8"), newline=""))
    for row in reader:
        source, target = row["source"], row["target"]
        nodes.append(source)
        if target:
            nodes.append(target)
            edges[(source, target)] = EdgeWeight(int(row["mentions"]), int(row["retweets"]))
    return InteractionGraph.from_edges(dict.fromkeys(nodes), edges)


def read_graph(data: bytes, fmt: str = "graphml") -> InteractionGraph:
    """Re-read a graphml or edges_csv export"""
    if fmt not in READ_FORMATS:
        raise UnknownFormat(fmt, READ_FORMATS)
    g = _from_graphml(data) if fmt == "graphml" else _from_edges_csv(data)
    logger.debug("Read %s graph: %d nodes, %d edges", fmt, g.node_count, g.edge_count)
    return g


def node_attributes(g: InteractionGraph) -> Dict[str, Dict]:
    """Attributes carried over from a graphml import (role, x, y)"""
    return {n: dict(g.graph.nodes[n]) for n in g.nodes}
