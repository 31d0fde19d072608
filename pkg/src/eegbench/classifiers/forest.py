"""Random forest: bagged Gini trees with per-node feature subsampling."""

from __future__ import annotations

import math

import numpy as np

from .tree import DecisionTree


class RandomForestClassifier:
    def __init__(self, n_trees: int = 100, max_features="sqrt", max_depth=None,
                 bootstrap: bool = True, seed: int = 0):
        if n_trees < 1:
            raise ValueError("need at least one tree")
        self.n_trees = n_trees
        self.max_features = max_features
        self.max_depth = max_depth
        self.bootstrap = bootstrap
        self.seed = seed

    def _n_features(self, d: int) -> int:
        if self.max_features == "sqrt":
            return min(d, math.ceil(math.sqrt(d)))
        if self.max_features is None:
            return d
        return min(d, int(self.max_features))

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        self.classes_, encoded = np.unique(y, return_inverse=True)
        n, d = X.shape
        mf = self._n_features(d)
        self.trees_ = []
        for child in np.random.SeedSequence(self.seed).spawn(self.n_trees):
            rng = np.random.default_rng(child)
            rows = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            tree = DecisionTree("gini", max_depth=self.max_depth,
                                max_features=mf, rng=rng)
            tree.fit(X[rows], encoded[rows])
            self.trees_.append(tree)
        return self

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        counts = np.zeros((X.shape[0], self.classes_.size), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for tree in self.trees_:
            counts[rows, tree.predict(X).astype(np.int64)] += 1
        return self.classes_[np.argmax(counts, axis=1)]
