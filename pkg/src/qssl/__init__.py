"""Classical simulation of quantum semi-supervised learners with cost accounting."""

from .core import (
    Dataset,
    as_feature_vector,
    generate_blobs,
    inner_product,
    make_rng,
    min_center_gap_sq,
    pairwise_inner_product,
    pairwise_squared_euclidean,
    squared_euclidean,
)
from .cost import CostLedger, ScalingReport, fit_scaling
from .errors import ConfigError, ContractError, ParseError, QsslError, SamplingError
from .estimators import (
    EstimateBatch,
    EstimationParams,
    NoisyEstimate,
    centroid_distance_map,
    estimate_distance_block,
    estimate_distance_sq,
    estimate_inner_product,
    estimate_matrix_product,
)
from .io import load_dataset, save_dataset, save_report
from .learners import (
    kmeans_classical,
    kmeans_quantum,
    measure_label_register,
    pnn_classical,
    pnn_quantum,
    self_train,
)
from .qram import QramStore

__version__ = "0.1.0"
