"""Soft-margin kernel SVM trained by sequential minimal optimization.

The dual max sum(a) - 0.5 sum a_i a_j y_i y_j K_ij subject to
0 <= a_i <= C and sum a_i y_i = 0 is solved by repeatedly optimizing one
pair of multipliers in closed form (Platt's SMO). Pair selection is the
usual max |E_i - E_j| heuristic with deterministic sequential fallbacks,
so training needs no randomness.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError

KERNELS = ("rbf", "linear", "poly", "sigmoid")


def _kernel_matrix(kind, A, B, gamma, coef0, degree):
    if kind == "linear":
        return A @ B.T
    if kind == "poly":
        return (gamma * (A @ B.T) + coef0) ** degree
    if kind == "sigmoid":
        return np.tanh(gamma * (A @ B.T) + coef0)
    # rbf
    d2 = ((A ** 2).sum(1)[:, None] + (B ** 2).sum(1)[None, :] - 2.0 * A @ B.T)
    np.clip(d2, 0.0, None, out=d2)
    return np.exp(-gamma * d2)


class SvmClassifier:
    def __init__(self, kernel: str = "rbf", C: float = 1.0, gamma="scale",
                 coef0: float = 1.0, degree: int = 3, tol: float = 1e-3,
                 max_sweeps: int = 20000):
        if kernel not in KERNELS:
            raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
        if C <= 0:
            raise ValueError("C must be positive")
        self.kernel = kernel
        self.C = C
        self.gamma = gamma
        self.coef0 = coef0
        self.degree = degree
        self.tol = tol
        self.max_sweeps = max_sweeps

    def _resolve_gamma(self, X) -> float:
        if self.gamma == "scale":
            var = X.var()
            return 1.0 / (X.shape[1] * var) if var > 0 else 1.0 / X.shape[1]
        return float(self.gamma)

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        self.classes_ = np.unique(y)
        if self.classes_.size != 2:
            raise ValueError("binary classifier: need exactly two labels present")
        ym = np.where(y == self.classes_[1], 1.0, -1.0)
        n = X.shape[0]
        self.gamma_ = self._resolve_gamma(X)
        K = _kernel_matrix(self.kernel, X, X, self.gamma_, self.coef0, self.degree)

        alpha = np.zeros(n)
        self._b = 0.0
        f = np.zeros(n)                      # sum_j alpha_j y_j K_ij + b
        C, tol = self.C, self.tol

        def take_step(i, j):
            nonlocal f
            if i == j:
                return False
            ai, aj = alpha[i], alpha[j]
            yi, yj = ym[i], ym[j]
            Ei, Ej = f[i] - yi, f[j] - yj
            if yi == yj:
                lo, hi = max(0.0, ai + aj - C), min(C, ai + aj)
            else:
                lo, hi = max(0.0, aj - ai), min(C, C + aj - ai)
            if hi - lo < 1e-12:
                return False
            eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
            if eta > 1e-12:
                aj_new = aj + yj * (Ei - Ej) / eta
                aj_new = min(hi, max(lo, aj_new))
            else:
                # indefinite kernel (e.g. sigmoid): dual is not concave along
                # this direction, so compare the objective at the box ends
                s = yi * yj
                v1 = (f[i] - self._b) - ai * yi * K[i, i] - aj * yj * K[i, j]
                v2 = (f[j] - self._b) - ai * yi * K[i, j] - aj * yj * K[j, j]

                def dual_at(a2):
                    a1 = ai + s * (aj - a2)
                    return (a1 + a2
                            - 0.5 * (a1 * a1 * K[i, i] + a2 * a2 * K[j, j]
                                     + 2.0 * s * a1 * a2 * K[i, j])
                            - yi * a1 * v1 - yj * a2 * v2)

                lo_obj, hi_obj = dual_at(lo), dual_at(hi)
                gap = 1e-8 * (abs(lo_obj) + abs(hi_obj) + 1.0)
                if lo_obj > hi_obj + gap:
                    aj_new = lo
                elif hi_obj > lo_obj + gap:
                    aj_new = hi
                else:
                    return False
            if abs(aj_new - aj) < 1e-8 * (aj_new + aj + 1e-8):
                return False
            ai_new = ai + yi * yj * (aj - aj_new)
            b1 = self._b - Ei - yi * (ai_new - ai) * K[i, i] - yj * (aj_new - aj) * K[i, j]
            b2 = self._b - Ej - yi * (ai_new - ai) * K[i, j] - yj * (aj_new - aj) * K[j, j]
            if 0.0 < ai_new < C:
                b_new = b1
            elif 0.0 < aj_new < C:
                b_new = b2
            else:
                b_new = 0.5 * (b1 + b2)
            f += (yi * (ai_new - ai) * K[i] + yj * (aj_new - aj) * K[j]
                  + (b_new - self._b))
            alpha[i], alpha[j] = ai_new, aj_new
            self._b = b_new
            return True

        def examine(i):
            Ei = f[i] - ym[i]
            r = Ei * ym[i]
            if not ((r < -tol and alpha[i] < C) or (r > tol and alpha[i] > 0)):
                return False
            free = np.where((alpha > 0) & (alpha < C))[0]
            if free.size > 1:
                E = f - ym
                j = int(free[np.argmax(np.abs(Ei - E[free]))])
                if take_step(i, j):
                    return True
            for j in free:
                if take_step(i, int(j)):
                    return True
            for j in range(n):
                if take_step(i, j):
                    return True
            return False

        sweeps = 0
        examine_all = True
        while sweeps < self.max_sweeps:
            sweeps += 1
            changed = 0
            if examine_all:
                for i in range(n):
                    changed += examine(i)
            else:
                for i in np.where((alpha > 0) & (alpha < C))[0]:
                    changed += examine(int(i))
            if examine_all:
                if changed == 0:
                    break
                examine_all = False
            elif changed == 0:
                examine_all = True
        else:
            raise ConvergenceError(
                f"SMO did not reach KKT tolerance {tol} within {self.max_sweeps} sweeps",
                iterations=sweeps,
            )

        self.n_sweeps_ = sweeps
        support = alpha > 1e-8
        self.support_vectors_ = X[support]
        self.dual_coef_ = alpha[support] * ym[support]
        self.alpha_ = alpha
        self._train_margins = f.copy()
        self._train_ym = ym
        return self

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.support_vectors_.shape[0] == 0:
            return np.full(X.shape[0], self._b)
        K = _kernel_matrix(self.kernel, X, self.support_vectors_,
                           self.gamma_, self.coef0, self.degree)
        return K @ self.dual_coef_ + self._b

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0, self.classes_[1], self.classes_[0])

    @property
    def bias(self) -> float:
        return self._b

    def kkt_violation(self) -> float:
        """Largest complementary-slackness violation on the training set."""
        yf = self._train_ym * self._train_margins
        a = self.alpha_
        viol = np.zeros_like(a)
        at_zero = a <= 1e-8
        at_c = a >= self.C - 1e-8
        middle = ~(at_zero | at_c)
        viol[at_zero] = np.maximum(0.0, 1.0 - yf[at_zero])
        viol[at_c] = np.maximum(0.0, yf[at_c] - 1.0)
        viol[middle] = np.abs(yf[middle] - 1.0)
        return float(viol.max()) if viol.size else 0.0
