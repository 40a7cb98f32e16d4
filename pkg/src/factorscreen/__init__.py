"""Variable screening for ultrahigh-dimensional linear models with correlated
predictors: marginal screening, factor profiling and preconditioned profiling,
with BIC model selection, simulation designs and a Monte Carlo harness."""

from ._errors import *  # noqa: F401,F403
from .bench import ExperimentPlan, ReplicateAggregate, emit_table, run_experiment
from .io import CsvDataset, load_csv, write_dataset_csv
from .linalg import (DesignMatrix, ResponseVector, ThinSvd, center_response, eigen_ratio_d,
                     standardize_columns, thin_svd)
from .metrics import ConfusionCounts, confusion, f2_score, f_theta
from .selection import (GridSearchResult, SubsetModel, bic_score, fit_subset_ols, grid_search,
                        select_k)
from .simulate import (GeneratedDataset, SimulationSpec, SpikeModelSpec, gen_example1,
                       gen_example2, gen_example3, gen_example4_spike, generate)
from .transforms import (ImportanceScores, Method, PpisVariant, ProfiledData, ProjectionSpec,
                         importance_scores, profile_fpsis, profile_ppis, profile_sis,
                         profile_tppis, select_top_k)

__version__ = "0.1.0"
