"""Sparse subspace clustering that extends to unseen points.

Cluster in-sample points with spectral clustering on an l1-graph, learn a
linear embedding from the sparse codes, and assign new points to the
cluster of their nearest in-sample neighbor in that embedding.
"""
__version__ = "0.1.0"

from .dataset import (LabeledDataset, SplitSpec, gen_trefoil_knots, gen_union_of_subspaces,
                      load_matrix, normalize_columns, pca_reduce, split)
from .errors import (DegenerateEmbeddingError, DimensionError, FormatError, InfeasibleError,
                     ISSCError, NumericalError, ParameterError)
from .extend import ExtensionResult, extend
from .graph import AffinityGraph, SparseCodeMatrix, build_affinity, build_codes
from .l1solver import L1Config, SparseCode, lp_oracle, solve_l1
from .metrics import accuracy, nmi
from .npe import ProjectionModel, build_m, learn_projection
from .pipeline import ISSCModel, fit, load_model, save_model
from .spectral import ClusterAssignment, KMeansConfig, cluster_in_sample, kmeans, spectral_embed
