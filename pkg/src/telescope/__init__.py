"""Telescope distance between time-series samples, estimated through binary classification."""
from .classifiers import (ExactOracle, KernelSVM, SvmConfig, TrainedClassifier, estimate_summand,
                          exact_tv, train_weighted_erm)
from .clustering import (Clustering, average_linkage, clustering_error, farthest_point,
                         threshold_clustering)
from .core import DepthPolicy, Sample, WeightScheme, WindowSet, depth, extract_windows, weight
from .distance import DistanceMatrix, TelescopeConfig, distance_matrix, telescope_distance
from .inference import (HomogeneityVerdict, ThreeSampleVerdict, homogeneity_test,
                        homogeneity_threshold, three_sample_test)

__version__ = "0.1.0"
