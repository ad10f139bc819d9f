"""
Report Generator
================
Runs every analysis on one dataset and collects the results as plain JSON
data plus the CSV/graph files they refer to.

Percentages are rounded to two decimals as they are usually quoted; the
unrounded shares sit next to them.

Usage:
    report = generate_report(ds, cfg)
    report.to_json(), report.to_text(), report.files
"""

import io
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List

from rich.console import Console
from rich.table import Table

from config.settings import PERCENT_DECIMALS, TOOL_NAME, TOOL_VERSION
from src.attention_data.loader import paper_dict
from src.attention_data.models import AttentionDataset
from src.engagement import (
    bio_coverage,
    exposure_coverage,
    hashtag_counts,
    lifespan_report,
    load_rules,
    mentioned_user_ids,
    peak_bin,
    summarize_engagement,
    timeline_bins,
    user_type_distribution,
    window_leader,
)
from src.errors import EmptyDataset
from src.layout_engine.forceatlas2 import LayoutGraph, positions_csv, run_layout, trace_csv
from src.network import (
    NodeRole,
    assign_roles,
    build_graph,
    degree_threshold_summary,
    export_graph,
    graph_stats,
    one_sided_share,
    scatter_csv,
    scatter_data,
    top_nodes,
)
from src.report.run_config import RunConfig
from src.term_map import build_term_map, similarity_csv, term_layout, term_map_csv
from src.text_engine import PipelineConfig, tokenize_bios

logger = logging.getLogger(__name__)

NO_INTERACTIONS = "no conversational interactions"
EXPORT_EXTENSIONS = {"graphml": "graph.graphml", "dot": "graph.dot", "edges_csv": "graph_edges.csv"}
TOP_HASHTAGS = 10
TEXT_WIDTH = 100


def _percent(count: int, total: int) -> Dict[str, Any]:
    share = count / total if total else 0.0
    return {"count": count, "percent": round(100 * share, PERCENT_DECIMALS), "share": share}


class ReportBuilder:
    """One section per analysis; files referenced by a section are collected in `files`"""

    def __init__(self, ds: AttentionDataset, cfg: RunConfig):
        if not ds.events:
            raise EmptyDataset()
        self.ds = ds
        self.cfg = cfg
        self.files: Dict[str, str] = {}
        self.text_cfg = PipelineConfig.default()

    @cached_property
    def graph(self):
        return build_graph(self.ds)

    # ==================== ENGAGEMENT ====================

    def summary_section(self) -> Dict[str, Any]:
        ds, cfg = self.ds, self.cfg
        summary = summarize_engagement(ds)
        coverage = exposure_coverage(ds)
        lifespan = lifespan_report(ds, cfg.dormancy_threshold_days)
        bins = timeline_bins(ds, cfg.timeline_width)
        peak = peak_bin(ds, "week")
        leader, leader_share = window_leader(ds, peak.bin_start, peak.bin_end)

        rules = load_rules()
        sharers = ds.tweeter_ids
        mentioned = mentioned_user_ids(ds)

        self.files["timeline.csv"] = "bin_start,bin_width,count\n" + "".join(
            f"{b.bin_start.isoformat()},{b.bin_width},{b.count}\n" for b in bins)

        return {
            "engagement": {
                **summary.to_dict(),
                "percentages": summary.percentages(),
                "exposure_covered_tweeters": len(coverage.covered),
                "exposure_uncovered_tweeters": len(coverage.uncovered),
            },
            "lifespan": lifespan.to_dict(),
            "timeline": {
                "width": cfg.timeline_width,
                "file": "timeline.csv",
                "bins": [b.to_dict() for b in bins],
            },
            "peak_week": {
                "start": peak.bin_start.isoformat(),
                "end": peak.bin_end.isoformat(),
                "count": peak.count,
                "leader": leader,
                "leader_share": leader_share,
                "leader_percent": round(100 * leader_share, PERCENT_DECIMALS),
            },
            "profiles": {
                "sharer_bio_coverage": bio_coverage(ds, sharers),
                "mentioned_bio_coverage": bio_coverage(ds, mentioned),
                "sharer_user_types": user_type_distribution((ds.profile(u) for u in sharers), rules, self.text_cfg),
                "mentioned_user_types": user_type_distribution((ds.profile(u) for u in mentioned), rules,
                                                               self.text_cfg),
            },
            "hashtags": [{"tag": t, "count": c} for t, c in hashtag_counts(ds)[:TOP_HASHTAGS]],
        }

    # ==================== NETWORK ====================

    def graph_section(self) -> Dict[str, Any]:
        g, cfg = self.graph, self.cfg
        stats = graph_stats(g)
        roles = assign_roles(g)
        rows = scatter_data(g, cfg.log_base)
        self.files["scatter.csv"] = scatter_csv(rows)

        section = {
            "node_count": stats.node_count,
            "edge_count": stats.edge_count,
            "mean_degree": stats.mean_degree,
            "density_undirected": stats.density,
            "density_directed": stats.directed_density,
            "diameter": stats.diameter,
            "component_count": stats.component_count,
            "isolated_count": stats.isolated_count,
            "roles": {role.value: _percent(stats.role_counts[role.value], stats.node_count) for role in NodeRole},
            "one_sided_share": one_sided_share(rows),
            "degree_thresholds": degree_threshold_summary(g),
            "top_indegree": top_nodes(g, cfg.top_k, "indegree"),
            "top_outdegree": top_nodes(g, cfg.top_k, "outdegree"),
            "scatter_file": "scatter.csv",
        }
        if stats.edge_count == 0:
            section["status"] = NO_INTERACTIONS
            return section

        exports = []
        for fmt in cfg.export_formats:
            name = EXPORT_EXTENSIONS[fmt]
            self.files[name] = export_graph(g, roles, fmt=fmt).decode("utf-8")
            exports.append(name)
        section["status"] = "ok"
        section["export_files"] = exports
        return section

    # ==================== LAYOUT ====================

    def layout_section(self, progress: bool = False) -> Dict[str, Any]:
        g = self.graph
        if g.edge_count == 0:
            return {"status": NO_INTERACTIONS}
        result = run_layout(LayoutGraph.from_interaction_graph(g), self.cfg.layout_params,
                            trace=True, progress=progress)
        self.files["layout_positions.csv"] = positions_csv(result.positions)
        self.files["layout_trace.csv"] = trace_csv(result.trace)
        return {
            "status": "ok",
            "steps": result.steps,
            "cap_hits": result.cap_hits,
            "jitter_events": result.jitter_events,
            "positions_file": "layout_positions.csv",
            "trace_file": "layout_trace.csv",
        }

    # ==================== TERM MAPS ====================

    def _term_map(self, name: str, user_ids) -> Dict[str, Any]:
        cfg = self.cfg
        items = [(u, p.bio) for u in user_ids if (p := self.ds.profile(u)) is not None and p.bio]
        bios = tokenize_bios(items, self.text_cfg)
        result = build_term_map(bios, cfg.min_frequency, cfg.ngram_max, cfg.resolution, cfg.seed)
        positions = term_layout(result, cfg.layout_params)
        self.files[f"terms_{name}.csv"] = term_map_csv(result, positions)
        self.files[f"similarity_{name}.csv"] = similarity_csv(result.similarity)
        return {
            "bios": len(bios),
            **result.to_dict(),
            "terms_file": f"terms_{name}.csv",
            "similarity_file": f"similarity_{name}.csv",
        }

    def terms_section(self) -> Dict[str, Any]:
        return {
            "sharers": self._term_map("sharers", self.ds.tweeter_ids),
            "mentioned": self._term_map("mentioned", mentioned_user_ids(self.ds)),
        }


@dataclass
class Report:
    data: Dict[str, Any]
    files: Dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        return render_text(self.data)


def generate_report(ds: AttentionDataset, cfg: RunConfig, progress: bool = False) -> Report:
    builder = ReportBuilder(ds, cfg)
    data: Dict[str, Any] = {
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "paper": paper_dict(ds.paper),
    }
    data.update(builder.summary_section())
    data["graph"] = builder.graph_section()
    data["layout"] = builder.layout_section(progress)
    data["term_maps"] = builder.terms_section()
    logger.info("Report ready: %d events, %d files", len(ds.events), len(builder.files))
    return Report(data=data, files=builder.files)


# ==================== TEXT RENDERING ====================

def _table(title: str, columns: List[str], rows: List[List[Any]]) -> Table:
    table = Table(title=title, title_justify="left")
    for i, name in enumerate(columns):
        table.add_column(name, justify="left" if i == 0 else "right")
    for row in rows:
        table.add_row(*(str(v) for v in row))
    return table


def render_text(data: Dict[str, Any], width: int = TEXT_WIDTH) -> str:
    """Plain-text report; parts of `data` that are missing are skipped"""
    console = Console(file=io.StringIO(), record=True, width=width, color_system=None,
                      force_terminal=False, highlight=False)
    paper = data.get("paper", {})
    console.print(f"Attention report: {paper.get('title', '')} ({paper.get('publication_date', '')})")
    console.print(f"{data.get('tool', {}).get('name', TOOL_NAME)} {data.get('tool', {}).get('version', TOOL_VERSION)}, "
                  f"seed {data.get('seed')}")

    eng = data.get("engagement")
    if eng:
        pct = eng["percentages"]
        console.print(_table("Engagement", ["measure", "value"], [
            ["tweets", eng["total_tweets"]],
            ["regular / mentions / retweets", f"{eng['regular_count']} / {eng['mention_count']} / {eng['retweet_count']}"],
            ["sharing degree", f"{pct['sharing_degree']:.2f}%"],
            ["recommendation level", f"{pct['recommendation_level']:.2f}%"],
            ["spreading degree", f"{pct['spreading_degree']:.2f}%"],
            ["CT index", f"{eng['ct_index']:.3f}"],
            ["IT index", f"{eng['it_index']:.3f}"],
            ["distinct tweeters", eng["distinct_tweeters"]],
            ["exposure (followers)", f"{eng['exposure']:,}"],
        ]))

    life = data.get("lifespan")
    if life:
        rows = [
            ["first event", life["first_event"]],
            ["last event", life["last_event"]],
            ["response delay (days)", f"{life['response_delay_days']} ({life['response_delay_precision']} precision)"],
            ["life span (days)", life["lifespan_days"]],
        ]
        rows += [["dormancy", f"{d['start'][:10]} -> {d['end'][:10]} ({d['days']} days)"]
                 for d in life["dormancy_intervals"]]
        console.print(_table("Life span", ["measure", "value"], rows))

    peak = data.get("peak_week")
    if peak:
        console.print(f"Busiest week from {peak['start'][:10]}: {peak['count']} tweets, "
                      f"{peak['leader']} wrote {peak['leader_percent']:.2f}%")

    graph = data.get("graph")
    if graph:
        if graph.get("status") == NO_INTERACTIONS:
            console.print(f"Network: {NO_INTERACTIONS} ({graph['node_count']} node(s))")
        else:
            console.print(_table("Network", ["measure", "value"], [
                ["nodes", graph["node_count"]],
                ["edges", graph["edge_count"]],
                ["mean degree", f"{graph['mean_degree']:.2f}"],
                ["density (undirected projection)", f"{graph['density_undirected']:.4f}"],
                ["density (directed)", f"{graph['density_directed']:.4f}"],
                ["diameter", graph["diameter"]],
                ["one-sided nodes", f"{100 * graph['one_sided_share']:.1f}%"],
            ]))
            console.print(_table("Roles", ["role", "users", "share"], [
                [role, r["count"], f"{100 * r['share']:.1f}%"] for role, r in graph["roles"].items()
            ]))
            for key, title in (("top_indegree", "Most addressed"), ("top_outdegree", "Most active")):
                console.print(_table(title, ["user", "indegree", "outdegree"], [
                    [n["user_id"], n["indegree"], n["outdegree"]] for n in graph[key]
                ]))

    terms = data.get("term_maps")
    if terms:
        for name, tm in terms.items():
            rows = [[cid, ", ".join(members[:8])] for cid, members in tm["clusters"].items()]
            console.print(_table(f"Term map ({name}): {tm['term_count']} terms, Q={tm['modularity']:.3f}",
                                 ["cluster", "terms"], rows))

    return console.export_text()
