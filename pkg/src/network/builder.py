"""
Interaction Graph Builder
=========================
Turns mention and retweet events into the weighted directed user graph:
an edge u -> v means u mentioned or retweeted v, and repeated interactions
accumulate on the edge instead of adding parallel edges.

Usage:
    g = build_graph(ds)
    g.node_count, g.edge_count, g.edge_weight("a", "b")
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

from src.attention_data.models import AttentionDataset, TweetEvent, UserProfile
from src.engagement.metrics import AT_TOKEN, RT_PREFIX, TweetKind, classify_tweet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeWeight:
    mention_count: int = 0
    retweet_count: int = 0

    @property
    def total(self) -> int:
        return self.mention_count + self.retweet_count


class InteractionGraph:
    """Directed, loop-free user graph; edge attributes: mentions, retweets, weight"""

    def __init__(self, graph: Optional[nx.DiGraph] = None, profiles: Optional[Dict[str, UserProfile]] = None):
        self.graph = graph if graph is not None else nx.DiGraph()
        self.profiles = profiles or {}

    @classmethod
    def from_edges(cls, nodes: Iterable[str], edges: Dict[Tuple[str, str], EdgeWeight]) -> "InteractionGraph":
        g = cls()
        for n in nodes:
            g.add_node(n)
        for (u, v), w in edges.items():
            g.add_interactions(u, v, w.mention_count, w.retweet_count)
        return g

    # ==================== MUTATION ====================

    def add_node(self, user_id: str):
        if user_id not in self.graph:
            self.graph.add_node(user_id)

    def add_interactions(self, source: str, target: str, mentions: int = 0, retweets: int = 0):
        if source == target:
            return
        self.add_node(source)
        self.add_node(target)
        if self.graph.has_edge(source, target):
            data = self.graph.edges[source, target]
            data["mentions"] += mentions
            data["retweets"] += retweets
        else:
            self.graph.add_edge(source, target, mentions=mentions, retweets=retweets)
            data = self.graph.edges[source, target]
        data["weight"] = data["mentions"] + data["retweets"]

    def add_mention(self, source: str, target: str):
        self.add_interactions(source, target, mentions=1)

    def add_retweet(self, source: str, target: str):
        self.add_interactions(source, target, retweets=1)

    # ==================== QUERIES ====================

    @property
    def nodes(self) -> List[str]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> Dict[Tuple[str, str], EdgeWeight]:
        return {
            (u, v): EdgeWeight(d["mentions"], d["retweets"])
            for u, v, d in sorted(self.graph.edges(data=True))
        }

    @property
    def node_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def edge_weight(self, source: str, target: str) -> Optional[EdgeWeight]:
        if not self.graph.has_edge(source, target):
            return None
        d = self.graph.edges[source, target]
        return EdgeWeight(d["mentions"], d["retweets"])

    def in_degree(self, user_id: str) -> int:
        return self.graph.in_degree(user_id)

    def out_degree(self, user_id: str) -> int:
        return self.graph.out_degree(user_id)

    def undirected(self) -> nx.Graph:
        """Undirected projection: one edge per connected pair"""
        return self.graph.to_undirected(as_view=True)

    def signature(self) -> Tuple[Tuple[str, ...], Tuple[Tuple[str, str, int, int], ...]]:
        """Comparable content: nodes and weighted edges, sorted"""
        return (
            tuple(self.nodes),
            tuple((u, v, w.mention_count, w.retweet_count) for (u, v), w in self.edges.items()),
        )

    def __contains__(self, user_id: str) -> bool:
        return user_id in self.graph

    def __len__(self) -> int:
        return self.node_count

    def __repr__(self) -> str:
        return f"InteractionGraph(nodes={self.node_count}, edges={self.edge_count})"


# ==================== CONSTRUCTION ====================

def _resolve(handles: Iterable[str], index: Dict[str, str], ev: TweetEvent) -> List[str]:
    resolved = []
    for handle in handles:
        uid = index.get(handle.lower())
        if uid is None:
            logger.warning("Event %s: cannot resolve @%s to a user id", ev.event_id, handle)
            continue
        resolved.append(uid)
    return resolved


def retweet_origin(ev: TweetEvent, handle_index: Dict[str, str]) -> Optional[str]:
    if ev.retweet_of_user_id is not None:
        return ev.retweet_of_user_id
    match = RT_PREFIX.match(ev.text or "")
    if match:
        found = _resolve([match.group(1)], handle_index, ev)
        return found[0] if found else None
    logger.warning("Event %s is flagged as a retweet but names no origin", ev.event_id)
    return None


def mention_targets(ev: TweetEvent, handle_index: Dict[str, str]) -> List[str]:
    if ev.mentioned_user_ids:
        targets = list(ev.mentioned_user_ids)
    else:
        targets = _resolve(AT_TOKEN.findall(ev.text or ""), handle_index, ev)
    return [uid for uid in dict.fromkeys(targets) if uid != ev.user_id]


def build_graph(ds: AttentionDataset) -> InteractionGraph:
    """Every tweeter is a node; mention targets and retweet origins join as nodes too"""
    g = InteractionGraph()
    index = ds.handle_index()

    for ev in sorted(ds.events, key=lambda e: e.sort_key):
        g.add_node(ev.user_id)
        kind = classify_tweet(ev)
        if kind is TweetKind.RETWEET:
            origin = retweet_origin(ev, index)
            if origin is not None:
                g.add_retweet(ev.user_id, origin)
        elif kind is TweetKind.MENTION:
            for target in mention_targets(ev, index):
                g.add_mention(ev.user_id, target)

    g.profiles = {uid: ds.profiles[uid] for uid in g.graph.nodes if uid in ds.profiles}
    logger.info("Built interaction graph: %d nodes, %d edges", g.node_count, g.edge_count)
    return g
