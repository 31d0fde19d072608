import math

import numpy as np
import pytest

from eegbench.classifiers import (
    DEFAULT_HYPERPARAMS,
    MODEL_KINDS,
    GaussianNaiveBayes,
    GradientBoostingClassifier,
    KnnClassifier,
    LdaClassifier,
    QdaClassifier,
    RandomForestClassifier,
    SvmClassifier,
    make_model,
)
from eegbench.classifiers.tree import DecisionTree


def two_blobs(rng, n=60, d=3, sep=10.0):
    a = rng.normal(size=(n // 2, d))
    b = rng.normal(size=(n // 2, d)) + sep
    X = np.vstack([a, b])
    y = np.array([0] * (n // 2) + [1] * (n // 2))
    return X, y


class TestLda:
    def test_symmetric_one_dimensional_boundary(self):
        # exact sample moments: means -1 / +1, pooled variance 1, equal priors
        X = np.array([[-2.0], [0.0], [0.0], [2.0]])
        y = np.array([0, 0, 1, 1])
        m = LdaClassifier(ridge=0.0).fit(X, y)
        assert m.predict([[-0.5]])[0] == 0
        assert m.predict([[0.5]])[0] == 1
        s = m.decision_scores([[0.0]])[0]
        assert s[0] == pytest.approx(s[1], abs=1e-12)

    def test_separated_blobs_perfect_training_accuracy(self):
        X, y = two_blobs(np.random.default_rng(0))
        m = LdaClassifier().fit(X, y)
        assert (m.predict(X) == y).all()

    def test_scores_match_matrix_algebra_oracle(self):
        rng = np.random.default_rng(42)
        X = rng.normal(size=(50, 3))
        y = rng.integers(0, 2, size=50)
        y[:2] = [0, 1]
        m = LdaClassifier(ridge=0.0).fit(X, y)
        # independent evaluation of mu' S^-1 x - mu' S^-1 mu / 2 + ln prior
        mus, priors = [], []
        pooled = np.zeros((3, 3))
        for c in (0, 1):
            rows = X[y == c]
            mus.append(rows.mean(0))
            priors.append(len(rows) / len(X))
            pooled += (rows - rows.mean(0)).T @ (rows - rows.mean(0))
        pooled /= len(X)
        inv = np.linalg.inv(pooled)
        probe = rng.normal(size=(7, 3))
        got = m.decision_scores(probe)
        for i, x in enumerate(probe):
            for k in (0, 1):
                expected = mus[k] @ inv @ x - 0.5 * mus[k] @ inv @ mus[k] + math.log(priors[k])
                assert got[i, k] == pytest.approx(expected, abs=1e-8)

    def test_argmax_invariance_under_affine_rescale(self):
        X, y = two_blobs(np.random.default_rng(3), sep=2.0)
        m = LdaClassifier().fit(X, y)
        s = m.decision_scores(X)
        assert (np.argmax(s, 1) == np.argmax(2.5 * s + 7.0, 1)).all()

    def test_custom_priors_shift_decisions(self):
        X = np.array([[-2.0], [0.0], [0.0], [2.0]])
        y = np.array([0, 0, 1, 1])
        skew = LdaClassifier(ridge=0.0, priors=[0.99, 0.01]).fit(X, y)
        assert skew.predict([[0.3]])[0] == 0  # strong prior wins near the boundary

    def test_requires_two_samples_per_class(self):
        with pytest.raises(ValueError, match="fewer than two"):
            LdaClassifier().fit(np.zeros((3, 2)), np.array([0, 1, 1]))


class TestQda:
    def test_variance_ratio_boundary(self):
        # equal means, sigma^2 = 1 vs 4, equal priors: density equality at
        # |x| = sqrt((8/3) ln 2), inner region goes to the tight class
        X = np.array([[-1.0], [1.0], [-2.0], [2.0]])
        y = np.array([0, 0, 1, 1])
        m = QdaClassifier(ridge=0.0).fit(X, y)
        xstar = math.sqrt(8.0 / 3.0 * math.log(2.0))
        assert xstar == pytest.approx(1.3595559868917453, abs=1e-12)
        s = m.decision_scores([[xstar]])[0]
        assert s[0] == pytest.approx(s[1], abs=1e-10)
        assert m.predict([[xstar - 0.01], [-xstar + 0.01]]).tolist() == [0, 0]
        assert m.predict([[xstar + 0.01], [-xstar - 0.01]]).tolist() == [1, 1]

    def test_equal_covariances_match_lda(self):
        rng = np.random.default_rng(5)
        base = rng.normal(size=(30, 2))
        X = np.vstack([base, base + [4.0, -1.0]])  # identical per-class covariance
        y = np.array([0] * 30 + [1] * 30)
        grid = rng.normal(size=(40, 2)) * 3
        qda = QdaClassifier(ridge=0.0).fit(X, y)
        lda = LdaClassifier(ridge=0.0).fit(X, y)
        assert (qda.predict(grid) == lda.predict(grid)).all()

    def test_scores_match_matrix_algebra_oracle(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(50, 3))
        y = rng.integers(0, 2, size=50)
        y[:2] = [0, 1]
        m = QdaClassifier(ridge=0.0).fit(X, y)
        probe = rng.normal(size=(6, 3))
        got = m.decision_scores(probe)
        for k, c in enumerate((0, 1)):
            rows = X[y == c]
            mu = rows.mean(0)
            cov = (rows - mu).T @ (rows - mu) / len(rows)
            inv = np.linalg.inv(cov)
            _, logdet = np.linalg.slogdet(cov)
            prior = len(rows) / len(X)
            for i, x in enumerate(probe):
                expected = (-0.5 * logdet - 0.5 * (x - mu) @ inv @ (x - mu)
                            + math.log(prior))
                assert got[i, k] == pytest.approx(expected, abs=1e-8)


class TestNaiveBayes:
    def test_symmetric_case_boundary_at_zero(self):
        X = np.array([[-2.0], [0.0], [0.0], [2.0]])
        y = np.array([0, 0, 1, 1])
        m = GaussianNaiveBayes().fit(X, y)
        assert m.predict([[-0.4]])[0] == 0
        assert m.predict([[0.4]])[0] == 1

    def test_hand_computed_posterior_table(self):
        # class a: values 0, 2 (mean 1, var 1); class b: 6, 8 (mean 7, var 1)
        X = np.array([[0.0], [2.0], [6.0], [8.0]])
        y = np.array(["a", "a", "b", "b"])
        m = GaussianNaiveBayes().fit(X, y)
        for x in (-1.0, 3.0, 4.0, 9.0):
            got = m.log_posteriors([[x]])[0]
            for k, mean in enumerate((1.0, 7.0)):
                expected = (math.log(0.5)
                            - 0.5 * math.log(2 * math.pi * 1.0)
                            - (x - mean) ** 2 / 2.0)
                assert got[k] == pytest.approx(expected, abs=1e-10)

    def test_column_duplication_preserves_training_argmax(self):
        rng = np.random.default_rng(21)
        X, y = two_blobs(rng, n=40, d=2, sep=4.0)
        before = GaussianNaiveBayes().fit(X, y).predict(X)
        X2 = np.hstack([X, X[:, :1]])
        after = GaussianNaiveBayes().fit(X2, y).predict(X2)
        assert (before == after).all()

    def test_zero_variance_feature_is_floored(self):
        X = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 4.0], [1.0, 5.0]])
        y = np.array([0, 0, 1, 1])
        m = GaussianNaiveBayes().fit(X, y)  # constant first column
        assert np.all(np.isfinite(m.log_posteriors(X)))
        assert (m.predict(X) == y).all()


class TestKnn:
    def test_query_equals_training_point(self):
        X = np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 1.0]])
        y = np.array([3, 7, 9])
        m = KnnClassifier(k=1).fit(X, y)
        assert m.predict([[5.0, 5.0]])[0] == 7

    def test_majority_vote_on_hand_set(self):
        # distances from query 0: a at 1, 2; b at 3; rest far
        X = np.array([[1.0], [-2.0], [3.0], [10.0], [-11.0]])
        y = np.array([0, 0, 1, 1, 1])
        m = KnnClassifier(k=3).fit(X, y)
        assert m.predict([[0.0]])[0] == 0

    def test_k_equals_n_gives_global_majority(self):
        X = np.arange(10.0).reshape(-1, 1)
        y = np.array([1, 1, 1, 1, 1, 1, 0, 0, 0, 0])
        m = KnnClassifier(k=10).fit(X, y)
        assert m.predict([[100.0]])[0] == 1
        assert m.predict([[-100.0]])[0] == 1

    def test_tie_breaks_to_nearest_neighbor(self):
        X = np.array([[1.0], [-1.5], [2.0], [-2.5]])
        y = np.array([0, 1, 0, 1])
        m = KnnClassifier(k=4).fit(X, y)
        assert m.predict([[0.0]])[0] == 0   # 2-2 vote, nearest is +1 -> label 0
        assert m.predict([[-1.0]])[0] == 1  # nearest is -1.5 -> label 1

    def test_k_validation(self):
        with pytest.raises(ValueError):
            KnnClassifier(k=0)
        with pytest.raises(ValueError, match="exceeds"):
            KnnClassifier(k=5).fit(np.zeros((3, 1)), np.array([0, 1, 0]))

    def test_empty_training_set(self):
        with pytest.raises(ValueError, match="empty"):
            KnnClassifier(k=1).fit(np.zeros((0, 2)), np.zeros(0))


class TestSvm:
    def test_two_point_dual_solution(self):
        X = np.array([[-1.0], [1.0]])
        y = np.array([-1, 1])
        m = SvmClassifier(kernel="linear", C=100.0).fit(X, y)
        assert np.allclose(m.alpha_, [0.5, 0.5], atol=1e-9)
        assert m.bias == pytest.approx(0.0, abs=1e-9)
        f = m.decision_function(X)
        assert np.allclose(f, [-1.0, 1.0], atol=1e-6)  # margin 2 around 0
        assert m.decision_function([[0.0]])[0] == pytest.approx(0.0, abs=1e-9)

    def test_xor_with_rbf_kernel(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        y = np.array([-1, -1, 1, 1])
        m = SvmClassifier(kernel="rbf", gamma=1.0, C=10.0).fit(X, y)
        assert (m.predict(X) == y).all()
        f = m.decision_function(X)
        assert (np.sign(f) == y).all()

    def test_kkt_conditions_on_noisy_data(self):
        rng = np.random.default_rng(17)
        X, y01 = two_blobs(rng, n=80, d=2, sep=2.0)
        y = np.where(y01 == 1, 1, -1)
        m = SvmClassifier(kernel="rbf", C=1.0).fit(X, y)
        assert np.all(m.alpha_ >= -1e-12)
        assert np.all(m.alpha_ <= m.C + 1e-12)
        assert abs(np.sum(m.alpha_ * np.where(y == 1, 1.0, -1.0))) < 1e-6
        assert m.kkt_violation() <= m.tol + 1e-9

    def test_determinism_without_seed(self):
        rng = np.random.default_rng(23)
        X, y = two_blobs(rng, n=60, d=3, sep=1.5)
        a = SvmClassifier().fit(X, y)
        b = SvmClassifier().fit(X, y)
        assert np.array_equal(a.alpha_, b.alpha_)
        assert a.bias == b.bias

    @pytest.mark.parametrize("kernel", ["linear", "poly", "sigmoid", "rbf"])
    def test_kernel_menu_separates_blobs(self, kernel):
        # standardized inputs, as the evaluation pipeline feeds this model
        X, y = two_blobs(np.random.default_rng(2), n=40, d=2, sep=8.0)
        X = (X - X.mean(0)) / X.std(0)
        m = SvmClassifier(kernel=kernel, C=10.0, gamma="scale").fit(X, y)
        assert (m.predict(X) == y).mean() == 1.0

    def test_requires_both_labels(self):
        with pytest.raises(ValueError, match="two labels"):
            SvmClassifier().fit(np.zeros((4, 2)), np.zeros(4))

    def test_unknown_kernel(self):
        with pytest.raises(ValueError, match="kernel"):
            SvmClassifier(kernel="laplace")


def _naive_cart(X, y, feats_order=None):
    """Brute-force CART oracle: exhaustive split search with plain loops."""
    X = np.asarray(X, float)
    y = np.asarray(y)

    def gini_counts(labels):
        n = len(labels)
        score = 0.0
        for c in np.unique(y):
            score += (np.sum(labels == c) / n) ** 2
        return score

    def grow(rows):
        labels = y[rows]
        if (labels == labels[0]).all():
            return ("leaf", labels[0])
        best = None
        n = len(rows)
        for f in range(X.shape[1]):
            vals = np.unique(X[rows, f])
            for lo, hi in zip(vals[:-1], vals[1:]):
                thr = lo + (hi - lo) / 2
                left = rows[X[rows, f] <= thr]
                right = rows[X[rows, f] > thr]
                quality = (len(left) * gini_counts(y[left])
                           + len(right) * gini_counts(y[right])) / n
                if best is None or quality > best[0] + 1e-12:
                    best = (quality, f, thr, left, right)
        if best is None or best[0] <= gini_counts(labels) + 1e-12:
            vals, counts = np.unique(labels, return_counts=True)
            return ("leaf", vals[np.argmax(counts)])
        _, f, thr, left, right = best
        return ("node", f, thr, grow(left), grow(right))

    root = grow(np.arange(len(y)))

    def predict_one(node, x):
        while node[0] == "node":
            _, f, thr, l, r = node
            node = l if x[f] <= thr else r
        return node[1]

    return lambda Q: np.array([predict_one(root, q) for q in np.asarray(Q, float)])


class TestForest:
    def test_pure_labels_all_leaves(self):
        X = np.random.default_rng(0).normal(size=(20, 3))
        y = np.ones(20, dtype=int)
        m = RandomForestClassifier(n_trees=5, seed=1).fit(X, y)
        assert all(t.n_nodes == 1 for t in m.trees_)
        assert (m.predict(X) == 1).all()

    def test_same_seed_identical_forest(self):
        rng = np.random.default_rng(1)
        X, y = two_blobs(rng, n=50, d=4, sep=1.0)
        q = rng.normal(size=(30, 4))
        a = RandomForestClassifier(n_trees=20, seed=7).fit(X, y)
        b = RandomForestClassifier(n_trees=20, seed=7).fit(X, y)
        assert np.array_equal(a.predict(q), b.predict(q))
        for ta, tb in zip(a.trees_, b.trees_):
            assert ta.feature == tb.feature
            assert ta.threshold == tb.threshold

    def test_single_tree_matches_naive_cart(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(20, 3))
        y = (X[:, 0] + 0.5 * X[:, 1] > 0).astype(int)
        m = RandomForestClassifier(n_trees=1, max_features=None,
                                   bootstrap=False, seed=0).fit(X, y)
        oracle = _naive_cart(X, y)
        q = rng.normal(size=(200, 3))
        assert (m.predict(X) == oracle(X)).all()
        assert (m.predict(q) == oracle(q)).all()

    def test_separates_blobs(self):
        X, y = two_blobs(np.random.default_rng(4), n=60, d=3, sep=6.0)
        m = RandomForestClassifier(n_trees=25, seed=3).fit(X, y)
        assert (m.predict(X) == y).mean() == 1.0


class TestBoosting:
    def test_single_label_degenerates_gracefully(self):
        X = np.random.default_rng(1).normal(size=(10, 2))
        m = GradientBoostingClassifier(n_stages=3).fit(X, np.full(10, 4))
        assert (m.predict(X) == 4).all()

    def test_zero_learning_rate_predicts_prior_majority(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(50, 2))
        y = np.array([0] * 40 + [1] * 10)
        m = GradientBoostingClassifier(n_stages=5, learning_rate=0.0).fit(X, y)
        assert (m.predict(rng.normal(size=(20, 2))) == 0).all()

    def test_training_loss_monotone_nonincreasing(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(100, 4))
        y = ((X[:, 0] + X[:, 1] ** 2 + 0.3 * rng.normal(size=100)) > 0.5).astype(int)
        m = GradientBoostingClassifier(n_stages=60, subsample=1.0, seed=0).fit(X, y)
        path = np.asarray(m.train_loss_path_)
        assert len(path) == 61
        assert np.all(np.diff(path) <= 1e-10)

    def test_same_seed_identical_with_subsampling(self):
        rng = np.random.default_rng(4)
        X, y = two_blobs(rng, n=60, d=3, sep=1.0)
        q = rng.normal(size=(25, 3))
        a = GradientBoostingClassifier(n_stages=20, subsample=0.6, seed=9).fit(X, y)
        b = GradientBoostingClassifier(n_stages=20, subsample=0.6, seed=9).fit(X, y)
        assert np.array_equal(a.predict(q), b.predict(q))

    def test_fits_nonlinear_boundary(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(120, 2))
        y = (X[:, 0] * X[:, 1] > 0).astype(int)
        m = GradientBoostingClassifier(n_stages=80).fit(X, y)
        assert (m.predict(X) == y).mean() > 0.95

    def test_hyperparameter_validation(self):
        with pytest.raises(ValueError):
            GradientBoostingClassifier(learning_rate=1.5)
        with pytest.raises(ValueError):
            GradientBoostingClassifier(subsample=0.0)
        with pytest.raises(ValueError):
            GradientBoostingClassifier(n_stages=0)


class TestDecisionTreeDirect:
    def test_regression_tree_recovers_step_function(self):
        X = np.linspace(0, 1, 50).reshape(-1, 1)
        y = np.where(X[:, 0] < 0.43, 2.0, 5.0)
        t = DecisionTree("mse", max_depth=2).fit(X, y)
        assert np.abs(t.predict(X) - y).max() < 1e-12

    def test_unknown_criterion(self):
        with pytest.raises(ValueError):
            DecisionTree("entropy")


class TestUniformContract:
    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_fit_predict_and_label_set(self, kind):
        rng = np.random.default_rng(100)
        X, y = two_blobs(rng, n=30, d=2, sep=3.0)
        y = np.where(y == 1, 5, 2)  # arbitrary label values
        model = make_model(kind, seed=1)
        model.fit(X, y)
        pred = model.predict(rng.normal(size=(15, 2)))
        assert set(np.unique(pred)) <= {2, 5}
        assert (model.predict(X) == y).mean() > 0.9

    def test_make_model_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown model kind"):
            make_model("mlp")

    def test_make_model_applies_overrides(self):
        m = make_model("knn", {"k": 9})
        assert m.k == 9
        assert make_model("rf", seed=42).seed == 42

    def test_defaults_match_documented_values(self):
        assert DEFAULT_HYPERPARAMS["svm"]["C"] == 1.0
        assert DEFAULT_HYPERPARAMS["rf"]["n_trees"] == 100
        assert DEFAULT_HYPERPARAMS["gb"]["learning_rate"] == 0.1
        assert DEFAULT_HYPERPARAMS["knn"]["k"] == 5
