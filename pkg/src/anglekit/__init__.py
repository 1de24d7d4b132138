"""Angle-based multicategory margin classification with probability refit."""

__version__ = "0.1.0"

from .datagen import (
    ExampleSpec,
    bayes_error,
    example1_spec,
    example2_spec,
    example_spec,
    gen_example1,
    gen_example2,
    generate,
    true_probabilities,
    true_probability_matrix,
)
from .dataio import load_csv, load_model, save_csv, save_model
from .datasets import LabeledDataset
from .errors import (
    AngleKitError,
    DataValidationError,
    DegenerateDerivativeError,
    InsufficientDataError,
    ModelFormatError,
)
from .linear_model import (
    FitConfig,
    FitDiagnostics,
    LinearAngleModel,
    fit,
    objective,
    penalty_value,
    smooth_gradient,
)
from .losses import (
    LossFunction,
    get_loss,
    known_losses,
    logistic_deriv,
    logistic_eval,
    register_loss,
    soft_lum_deriv,
    soft_lum_eval,
)
from .metrics import cre, error_rate, mad, nll
from .probability import binary_probability, class_probabilities, probability_matrix
from .refit import (
    RefitDiagnostics,
    RefitModel,
    refit_fit,
    refit_from_stage1,
    refit_predict,
    refit_probabilities,
    refit_probability_matrix,
)
from .simplex import SimplexCode, predict_label, reconstruct, simplex_vertices, vertex_scores
from .tuning import TuningResult, cv_select, lambda_grid, select_holdout, split_six

__all__ = [name for name in dir() if not name.startswith("_")]
