# Network - the interaction graph, its roles and statistics, exports
from src.network.builder import EdgeWeight, InteractionGraph, build_graph
from src.network.analysis import (
    GraphStats,
    NodeRole,
    ScatterRow,
    assign_roles,
    degree_threshold_summary,
    diameter_of,
    graph_stats,
    one_sided_share,
    scatter_csv,
    scatter_data,
    top_nodes,
)
from src.network.exporter import export_graph, node_attributes, read_graph
