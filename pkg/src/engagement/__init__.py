# Engagement - tweet kinds, CT/IT indices, exposure, life span and user types
from src.engagement.metrics import (
    EngagementSummary,
    ExposureCoverage,
    TweetKind,
    bio_coverage,
    classify_tweet,
    compute_exposure,
    exposure_coverage,
    hashtag_counts,
    mentioned_user_ids,
    select_conversational,
    summaries_to_csv,
    summarize_engagement,
)
from src.engagement.timeline import (
    LifespanReport,
    TimelineBin,
    iso_week_window,
    lifespan_report,
    peak_bin,
    timeline_bins,
    window_leader,
    window_share,
)
from src.engagement.user_types import (
    UserTypeRule,
    build_rules,
    classify_user_type,
    load_rules,
    user_type_distribution,
)
