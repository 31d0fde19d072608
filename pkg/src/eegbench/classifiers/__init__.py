"""Seven from-scratch binary classifiers behind one fit/predict contract.

Every model exposes ``fit(X, y) -> self``, ``predict(X) -> labels`` and a
``classes_`` attribute after fitting; predictions are always drawn from
the training label set. The tree ensembles take an explicit seed; the
rest are deterministic without one.
"""

from .boosting import GradientBoostingClassifier
from .discriminant import LdaClassifier, QdaClassifier
from .forest import RandomForestClassifier
from .naive_bayes import GaussianNaiveBayes
from .neighbors import KnnClassifier
from .svm import SvmClassifier

MODEL_KINDS = ("lda", "qda", "knn", "nb", "svm", "rf", "gb")

# distance / kernel methods get train-fold standardization upstream
STANDARDIZED_KINDS = frozenset({"knn", "svm"})
SEEDED_KINDS = frozenset({"rf", "gb"})

DEFAULT_HYPERPARAMS = {
    "lda": {"ridge": 1e-6},
    "qda": {"ridge": 1e-6},
    "nb": {"var_floor_ratio": 1e-9},
    "knn": {"k": 5},
    "svm": {"kernel": "rbf", "C": 1.0, "gamma": "scale"},
    "rf": {"n_trees": 100, "max_features": "sqrt", "max_depth": None},
    "gb": {"n_stages": 100, "learning_rate": 0.1, "max_depth": 3, "subsample": 1.0},
}

_FACTORIES = {
    "lda": LdaClassifier,
    "qda": QdaClassifier,
    "nb": GaussianNaiveBayes,
    "knn": KnnClassifier,
    "svm": SvmClassifier,
    "rf": RandomForestClassifier,
    "gb": GradientBoostingClassifier,
}


def make_model(kind: str, hyperparams: dict | None = None, seed: int | None = None):
    """Instantiate one classifier by kind with defaulted hyperparameters."""
    if kind not in _FACTORIES:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
    params = dict(DEFAULT_HYPERPARAMS[kind])
    params.update(hyperparams or {})
    if kind in SEEDED_KINDS:
        params["seed"] = 0 if seed is None else seed
    return _FACTORIES[kind](**params)


__all__ = [
    "MODEL_KINDS", "STANDARDIZED_KINDS", "SEEDED_KINDS", "DEFAULT_HYPERPARAMS",
    "make_model", "LdaClassifier", "QdaClassifier", "GaussianNaiveBayes",
    "KnnClassifier", "SvmClassifier", "RandomForestClassifier",
    "GradientBoostingClassifier",
]
