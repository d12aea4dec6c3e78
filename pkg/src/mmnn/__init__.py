"""Multilayer multiset neuronal networks for supervised image segmentation.

Neurons score inputs against stored weight vectors with the coincidence
similarity index (a strictness-sharpened Jaccard times the overlap index),
stacked into feed-forward layers, trained by multi-start gradient ascent on
segmentation objectives.
"""

from .errors import (AllZeroOperandsError, DegenerateGoldError,
                     DimensionMismatchError, LengthMismatchError,
                     NegativeEntryError, OutOfBoundsError, ParseError)
from .image import (COUNTER_PROTOTYPE, PROTOTYPE, AnnotatedPoint, BinaryMask,
                    FeatureConfig, Image, circular_offsets, extract_features,
                    extract_features_grid, load_image, load_mask,
                    read_points_csv, subsample, subsample_point)
from .landscape import (LandscapeGrid, basin_count, grid_to_csv, grid_to_pgm,
                        level_sets, sweep)
from .multiset import (NONNEGATIVE, SIGNED, IntegerMultiset, SimilarityConfig,
                       as_multiset, coincidence, interiority, jaccard,
                       ms_cardinality, ms_intersection, ms_union, pow_signed)
from .network import (Activation, NetworkSpec, Neuron, activate, load_network,
                      network_forward, network_from_dict, network_to_dict,
                      neuron_forward, or_combine, save_network)
from .pipeline import (ArchSpec, LayerSpec, PipelineConfig, SegmentationResult,
                       build_network, default_arch, run_experiment,
                       segment_image, train_from_points)
from .training import (ConfusionCounts, TrainConfig, Trajectory,
                       balanced_accuracy, confusion, fd_gradient,
                       gradient_ascent, multi_start_train, objective_a,
                       objective_ba, prototype_init)

__version__ = "0.1.0"
