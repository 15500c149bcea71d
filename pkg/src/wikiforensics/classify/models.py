"""Linear and Gaussian classifiers trained from scratch on numpy.

All three expose ``fit(X, y)``, ``scores(X)`` (probability of class 1 in
[0, 1]), ``params()``/``from_params()`` for JSON persistence. Training is
fully deterministic: the only randomness is the SVM's epoch shuffling,
driven by an explicit seed.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss_and_grad(params: np.ndarray, X: np.ndarray, y: np.ndarray,
                           lam: float) -> tuple[float, np.ndarray]:
    """L2-regularized mean logistic loss and its gradient.

    ``params`` stacks the weight vector and a trailing unregularized bias;
    kept as a standalone function so the finite-difference check can probe
    it directly.
    """
    w, b = params[:-1], params[-1]
    margins = X @ w + b
    # log(1 + exp(-z*m)) with z in {-1,+1}, computed stably
    z = 2.0 * y - 1.0
    loss = float(np.mean(np.logaddexp(0.0, -z * margins))) + 0.5 * lam * float(w @ w)
    p = _sigmoid(margins)
    residual = p - y
    grad_w = X.T @ residual / len(y) + lam * w
    grad_b = float(np.mean(residual))
    return loss, np.concatenate([grad_w, [grad_b]])


class LogisticRegressionModel:
    """Full-batch gradient descent on the regularized logistic loss.

    The step size is 1/L for a Lipschitz bound L of the gradient, so the
    descent is monotone; iteration stops at the gradient-norm tolerance.
    """

    kind = "logreg"

    def __init__(self, lam: float = 1e-4, max_iter: int = 2000, tol: float = 1e-6):
        self.lam = lam
        self.max_iter = max_iter
        self.tol = tol
        self.weights: np.ndarray | None = None
        self.bias: float = 0.0
        self.n_iter_: int = 0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticRegressionModel":
        n, d = X.shape
        aug = np.hstack([X, np.ones((n, 1))])
        lipschitz = (np.linalg.norm(aug, ord="fro") ** 2) / (4.0 * n) + self.lam
        step = 1.0 / lipschitz
        params = np.zeros(d + 1)
        for it in range(self.max_iter):
            _, grad = logistic_loss_and_grad(params, X, y, self.lam)
            if np.linalg.norm(grad) <= self.tol:
                break
            params -= step * grad
        self.n_iter_ = it + 1
        self.weights = params[:-1]
        self.bias = float(params[-1])
        return self

    def scores(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(X @ self.weights + self.bias)

    def params(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias,
                "lam": self.lam, "max_iter": self.max_iter, "tol": self.tol}

    @classmethod
    def from_params(cls, doc: dict) -> "LogisticRegressionModel":
        model = cls(lam=doc["lam"], max_iter=doc["max_iter"], tol=doc["tol"])
        model.weights = np.array(doc["weights"])
        model.bias = float(doc["bias"])
        return model


class LinearSVMModel:
    """Hinge loss + L2 via deterministic Pegasos subgradient descent.

    Runs a fixed number of epochs over a seeded shuffle with step 1/(lam*t);
    the bias rides along as an augmented, regularized coordinate. Scores
    map the margin through a logistic link.
    """

    kind = "linear-svm"

    def __init__(self, C: float = 1.0, epochs: int = 200, seed: int = 0):
        self.C = C
        self.epochs = epochs
        self.seed = seed
        self.weights: np.ndarray | None = None
        self.bias: float = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LinearSVMModel":
        n, d = X.shape
        lam = 1.0 / (self.C * n)
        w = np.zeros(d + 1)
        rng = np.random.default_rng(self.seed)
        signs = 2.0 * y - 1.0
        t = 0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for i in order:
                t += 1
                eta = 1.0 / (lam * t)
                xi = X[i]
                margin = signs[i] * (w[:-1] @ xi + w[-1])
                w *= (1.0 - eta * lam)
                if margin < 1.0:
                    w[:-1] += eta * signs[i] * xi
                    w[-1] += eta * signs[i]
        self.weights = w[:-1]
        self.bias = float(w[-1])
        return self

    def margins(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights + self.bias

    def scores(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.margins(X))

    def params(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias,
                "C": self.C, "epochs": self.epochs, "seed": self.seed}

    @classmethod
    def from_params(cls, doc: dict) -> "LinearSVMModel":
        model = cls(C=doc["C"], epochs=doc["epochs"], seed=doc["seed"])
        model.weights = np.array(doc["weights"])
        model.bias = float(doc["bias"])
        return model


class GaussianNBModel:
    """Per-class, per-dimension Gaussians with additive variance smoothing."""

    kind = "gnb"

    def __init__(self, var_smoothing: float = 1e-9):
        self.var_smoothing = var_smoothing
        self.means: np.ndarray | None = None  # (2, d)
        self.variances: np.ndarray | None = None
        self.log_priors: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GaussianNBModel":
        classes = (0, 1)
        d = X.shape[1]
        self.means = np.zeros((2, d))
        self.variances = np.zeros((2, d))
        counts = np.zeros(2)
        eps = self.var_smoothing * float(X.var(axis=0).max())
        if eps == 0.0:
            eps = self.var_smoothing
        for c in classes:
            rows = X[y == c]
            if len(rows) == 0:
                raise DataError("GNB needs at least one example per class")
            counts[c] = len(rows)
            self.means[c] = rows.mean(axis=0)
            self.variances[c] = rows.var(axis=0) + eps
        self.log_priors = np.log(counts / counts.sum())
        return self

    def _joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        jll = np.empty((len(X), 2))
        for c in (0, 1):
            diff = X - self.means[c]
            jll[:, c] = self.log_priors[c] - 0.5 * np.sum(
                np.log(2.0 * np.pi * self.variances[c]) + diff ** 2 / self.variances[c],
                axis=1,
            )
        return jll

    def scores(self, X: np.ndarray) -> np.ndarray:
        jll = self._joint_log_likelihood(X)
        shifted = jll - jll.max(axis=1, keepdims=True)
        expd = np.exp(shifted)
        return expd[:, 1] / expd.sum(axis=1)

    def params(self) -> dict:
        return {"means": self.means.tolist(), "variances": self.variances.tolist(),
                "log_priors": self.log_priors.tolist(),
                "var_smoothing": self.var_smoothing}

    @classmethod
    def from_params(cls, doc: dict) -> "GaussianNBModel":
        model = cls(var_smoothing=doc["var_smoothing"])
        model.means = np.array(doc["means"])
        model.variances = np.array(doc["variances"])
        model.log_priors = np.array(doc["log_priors"])
        return model
