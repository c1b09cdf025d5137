from .kmeans import (
    KMeansIteration,
    KMeansResult,
    KMeansState,
    initial_centroids,
    kmeans_classical,
    kmeans_quantum,
    measure_label_register,
    predict_nearest_centroid,
)
from .pnn import PnnResult, PnnState, PnnStep, pnn_classical, pnn_quantum, predict_nearest_labeled
from .self_training import (
    NearestNeighborLearner,
    SelfTrainResult,
    promote_above,
    promote_none,
    promote_top,
    self_train,
)
