"""Product recommendation pipeline: label-encoded transaction tables, optional
PCA, and four from-scratch classifiers evaluated over repeated holdout trials."""

__version__ = "0.1.0"
