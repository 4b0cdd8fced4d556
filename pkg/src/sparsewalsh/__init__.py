"""Learning Boolean classifiers with sparse Walsh-Hadamard spectra."""

from .core import (
    ParityMask,
    SampleSet,
    SparseClassifier,
    empirical_risk,
    evaluate,
    sign,
)
from .features import SelectedFeatures, SelectionExhaustedError, select_features
from .svm import TrainConfig, TrainResult, hinge_objective, project_l1, train
from .wht import correlate, enumerate_low_degree, fwht, parity_eval

__all__ = [
    "ParityMask", "SampleSet", "SparseClassifier", "empirical_risk", "evaluate", "sign",
    "SelectedFeatures", "SelectionExhaustedError", "select_features",
    "TrainConfig", "TrainResult", "hinge_objective", "project_l1", "train",
    "correlate", "enumerate_low_degree", "fwht", "parity_eval",
]
