"""netshape: nonparametric network mechanism estimation.

Fits a regular block histogram to an undirected graph, smooths
stochastically equivalent tiles into a shape model with BIC selection,
and benchmarks the result against spectral and sorted-histogram
baselines on synthetic and real networks.
"""

from .baselines import DenseEstimate, sas, usvt
from .bench import BenchConfig, run_benchmark
from .estimators import EstimateOutcome, ShapeFit, estimate, fit_shape_model
from .graph import (
    EdgeListParseError,
    EmptyGraphError,
    Graph,
    PairMask,
    degree_sequence,
    graph_from_json,
    graph_to_json,
    holdout_split,
    load_edge_list,
    save_edge_list,
)
from .graphons import (
    Graphon,
    GroundTruth,
    LatentSample,
    SsmSpec,
    get_graphon,
    make_assortative_sbm,
    make_banded_ssm,
    make_hierarchical_sbm,
    make_table_graphon,
    sample_graph,
    sample_latents,
    ssm_from_table,
    ssm_graphon,
    theta_matrix,
)
from .histogram import (
    BlockAverages,
    block_averages,
    default_bandwidth,
    fit_histogram,
    profile_log_likelihood,
)
from .metrics import (
    EvalReport,
    auc,
    link_prediction_auc,
    mise_aligned,
    mse,
    param_and_auc_ratios,
)
from .partitions import NodePartition, TilePartition, tile_count, tile_index, tile_pairs
from .rng import derive_seed, rng_from_seed
from .smoothing import (
    FittedModel,
    brute_force_lsq,
    kmeans_tiles,
    lsq_objective,
    lsq_objective_tiles,
    model_bic,
    predict_theta,
    shape_average,
    shape_averages,
    smooth_and_select,
)

__version__ = "0.1.0"
