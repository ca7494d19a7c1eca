"""
Temporal link prediction: logistic LASSO, consensus NMF, Jaccard evolution
and density-preserving binarization
"""
from .thresholding import binarize, edge_budget
from .lasso import fit_lasso_logit, lasso_path, lasso_rollout, lasso_scores
from .nmf import fit_temporal_nmf, extend_nmf, nmf_scores, nmf_rollout, default_rank
from .jaccard import jaccard_scores, jaccard_evolve, jaccard_rollout

__all__ = [
    "binarize",
    "edge_budget",
    "fit_lasso_logit",
    "lasso_path",
    "lasso_rollout",
    "lasso_scores",
    "fit_temporal_nmf",
    "extend_nmf",
    "nmf_scores",
    "nmf_rollout",
    "default_rank",
    "jaccard_scores",
    "jaccard_evolve",
    "jaccard_rollout",
]
