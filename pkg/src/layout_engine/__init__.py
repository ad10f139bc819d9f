# Layout Engine - ForceAtlas2 with Barnes-Hut repulsion
from src.layout_engine.forceatlas2 import (
    LayoutGraph,
    LayoutParams,
    LayoutResult,
    LayoutState,
    TraceRow,
    attraction_forces,
    compute_forces,
    gravity_forces,
    init_layout,
    positions_csv,
    repulsion_forces,
    run_layout,
    state_from_positions,
    step_layout,
    trace_csv,
)
from src.layout_engine.quadtree import QuadTree
