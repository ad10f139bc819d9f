# Fixtures - deterministic reference datasets
from src.fixtures.reference_case import (
    ACTIVIST_ID,
    FILE_PREFIX,
    MIXED_HUB_ID,
    SINK_HUB_ID,
    ReferenceCaseBuilder,
    reference_case,
    reference_case_files,
    write_reference_case,
)
