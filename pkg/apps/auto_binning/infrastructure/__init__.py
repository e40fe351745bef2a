from .artifacts import ArtifactSet
from .tabular import load_csv, load_features, write_dataset, write_frame, write_scores

__all__ = ["ArtifactSet", "load_csv", "load_features", "write_dataset", "write_frame", "write_scores"]
