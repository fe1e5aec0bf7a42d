"""scikit-learn adapter: couplings in, ground-state entanglement features out."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from .eigensolver import DEFAULT_SEED, METHODS
from .spin_basis import validate_n_sites
from .sweep import solve_point

FEATURES = ("c12_signed", "c23_signed", "c12", "c23", "c_mean_signed", "c_mean", "e_gs", "gap")


class DimerConcurrenceTransformer(TransformerMixin, BaseEstimator):
    """Map coupling points to ground-state concurrences of an N-site ring.

    Parameters
    ----------
    n_sites : int, default=4
        Even ring size, 4 <= n_sites <= 24.
    j1 : float, default=1.0
        Intra-dimer coupling used when ``X`` has a single column (J2).
    method : {"auto", "dense", "lanczos"}, default="auto"
    seed : int, default=42
        Lanczos start-vector seed.

    ``X`` is either one column of J2 values or two columns (J1, J2).  Output
    columns follow ``get_feature_names_out()``; degenerate points give NaN
    concurrences.

    Examples
    --------
    >>> t = DimerConcurrenceTransformer(n_sites=4).fit([[0.0], [1.0]])
    >>> t.transform([[1.0]])[0, :2].round(6)
    array([0.5, 0.5])
    """

    def __init__(self, n_sites=4, j1=1.0, method="auto", seed=DEFAULT_SEED):
        self.n_sites = n_sites
        self.j1 = j1
        self.method = method
        self.seed = seed

    def _validate_params(self):
        validate_n_sites(self.n_sites)
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")

    def _couplings(self, X):
        if X.shape[1] == 1:
            return np.column_stack([np.full(len(X), float(self.j1)), X[:, 0]])
        if X.shape[1] == 2:
            return X
        raise ValueError(f"X must have 1 (J2) or 2 (J1, J2) columns, got {X.shape[1]}")

    def fit(self, X, y=None):
        self._validate_params()
        X = validate_data(self, X, ensure_min_features=1)
        couplings = self._couplings(X)
        if np.any(couplings < 0):
            raise ValueError("couplings must be non-negative")
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = validate_data(self, X, reset=False)
        out = np.empty((len(X), len(FEATURES)))
        for i, (j1, j2) in enumerate(self._couplings(X)):
            rep = solve_point(self.n_sites, j1, j2, self.method, self.seed)
            out[i] = [rep.c12_signed, rep.c23_signed, rep.c12, rep.c23,
                      rep.c_mean_signed, rep.c_mean, rep.energy, rep.gap]
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_features_in_")
        return np.asarray(FEATURES, dtype=object)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.allow_nan = False
        tags.requires_fit = True
        return tags


def as_coupling_array(j2, j1=None):
    """Stack J2 values (and optional J1 values) into the transformer's input."""
    j2 = check_array(np.atleast_1d(np.asarray(j2, dtype=float)).reshape(-1, 1))
    if j1 is None:
        return j2
    return np.column_stack([np.broadcast_to(np.asarray(j1, dtype=float), (len(j2),)), j2[:, 0]])
