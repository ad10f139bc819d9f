# Attention Data - canonical model and ingest
from src.attention_data.models import AttentionDataset, Diagnostic, PaperRecord, TweetEvent, UserProfile
from src.attention_data.loader import DatasetLoader, dataset_files, parse_dataset, serialize_dataset
from src.attention_data.validation import canonicalize_dataset, has_fatal, validate_dataset
