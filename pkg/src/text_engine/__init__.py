# Text Engine - bio and tweet text preprocessing
from src.text_engine.bio_pipeline import (
    PipelineConfig,
    TokenizedBio,
    load_stopwords,
    preprocess_bio,
    singularize,
    tokenize_bio,
    tokenize_bios,
)
