"""scikit-learn style wrappers around the rank estimator, the quartic ODE fit
and the classifier, so they compose with ``get_params`` / ``clone``.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .criterion import LABELS, classify, criterion_samples, fit_quartic_ode
from .rank import DEFAULT_DEGREES, GAP_RATIO, SVD_GAP, evaluate_relation, rank_estimate
from .webs import Web, slope_function, univariate_provider

__all__ = ["WebRankEstimator", "QuarticODEFit", "WebClassifier", "check_points"]


def check_points(X, n_features=2):
    """Validate an ``(n_samples, n_features)`` array; complex values are kept."""
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        check_array(np.abs(arr), ensure_2d=True)  # finiteness and shape
        out = arr.astype(complex)
    else:
        out = check_array(arr, ensure_2d=True, dtype=float)
    if out.shape[1] != n_features:
        raise ValueError(f"expected {n_features} columns, got {out.shape[1]}")
    return out


class WebRankEstimator(BaseEstimator, TransformerMixin):
    """Fit on a :class:`Web`; ``transform`` evaluates the relation basis at points."""

    def __init__(self, degrees=DEFAULT_DEGREES, svd_gap=SVD_GAP, gap_ratio=GAP_RATIO):
        self.degrees = degrees
        self.svd_gap = svd_gap
        self.gap_ratio = gap_ratio

    def fit(self, X, y=None):
        if not isinstance(X, Web):
            raise TypeError("WebRankEstimator.fit expects a Web")
        if self.svd_gap <= 0 or self.gap_ratio <= 0:
            raise ValueError("svd_gap and gap_ratio must be positive")
        self.web_ = X
        self.report_ = rank_estimate(X, self.degrees, self.svd_gap, self.gap_ratio)
        self.rank_ = self.report_.rank
        self.basis_ = self.report_.basis
        return self

    def transform(self, X):
        """``(n_points, n_relations)`` values of ``sum_j f_j(u_j) - sum_j f_j(u_j(base))``."""
        check_is_fitted(self, "report_")
        pts = check_points(X)
        centers = list(self.basis_.centers)
        ref = [evaluate_relation(self.web_, r, self.web_.base, centers) for r in self.basis_.relations]
        out = np.empty((len(pts), len(ref)), dtype=complex)
        for i, p in enumerate(pts):
            for j, r in enumerate(self.basis_.relations):
                out[i, j] = evaluate_relation(self.web_, r, p, centers) - ref[j]
        return out


class QuarticODEFit(BaseEstimator, RegressorMixin):
    """Fit ``(z')^2 = p z^4 + q z^2 + r`` on ``(z, z', z'')`` rows.

    ``predict(z)`` returns the fitted ``(z')^2``.
    """

    def __init__(self, degenerate_tol=1e-9):
        self.degenerate_tol = degenerate_tol

    def fit(self, X, y=None):
        rows = check_points(X, 3)
        self.fit_ = fit_quartic_ode(rows, tol=self.degenerate_tol)
        self.coef_ = self.fit_.coef
        self.residual_ = self.fit_.residual
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        z = np.asarray(X)
        z = z[:, 0] if z.ndim == 2 else z
        p, q, r = self.coef_
        return p * z**4 + q * z**2 + r

    def score(self, X, y=None):
        """``1 - residual`` of the fit evaluated on new triples."""
        check_is_fitted(self, "coef_")
        rows = check_points(X, 3)
        lhs = rows[:, 1] ** 2
        err = np.abs(lhs - self.predict(rows)).max() / max(np.abs(lhs).max(), 1e-300)
        return float(1.0 - err)


class WebClassifier(BaseEstimator, ClassifierMixin):
    """Label ``T(x, y, x+y, x-y, v(x) + w(y))`` from slope specs ``(v_x, w_y)``."""

    def __init__(self, center=(0.31, 0.17), n_samples=12, width=0.2):
        self.center = center
        self.n_samples = n_samples
        self.width = width

    def fit(self, X=None, y=None):
        if self.n_samples < 6:
            raise ValueError("n_samples must be at least 6")
        self.classes_ = np.array(LABELS)
        self.samples_ = criterion_samples(self.center, self.n_samples, self.width)
        return self

    def _one(self, item):
        vx, wy = item
        v = univariate_provider(slope_function(vx)) if isinstance(vx, str) else vx
        w = univariate_provider(slope_function(wy)) if isinstance(wy, str) else wy
        return classify(v, w, self.samples_)

    def classify_all(self, X):
        check_is_fitted(self, "samples_")
        return [self._one(item) for item in X]

    def predict(self, X):
        return np.array([c.label for c in self.classify_all(X)])
