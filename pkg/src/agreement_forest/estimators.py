"""scikit-learn style front ends.

The trees play the role of ``X`` and ``y`` in ``fit``; fitted results live
in trailing-underscore attributes.  There is no ``transform`` or
``predict`` since the output is a single forest per pair of trees.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .approx import approximate_maf
from .forest import Forest
from .fpt import SearchStats, solve_maf_exact
from .maaf import approximate_maaf
from .validation import check_tree_pair


class InfeasibleError(RuntimeError):
    """No forest exists within the requested cut budget."""


class MaximumAgreementForest(BaseEstimator):
    """Agreement forest of two trees with few components.

    Parameters
    ----------
    method : {"approx", "exact"}
        ``"approx"`` is the polynomial-time 4-approximation, ``"exact"`` the
        bounded search.
    max_k : int or None
        Cut budget for the exact search; exceeding it raises InfeasibleError.
    """

    def __init__(self, method: str = "approx", max_k: int | None = None):
        self.method = method
        self.max_k = max_k

    def fit(self, t1, t2):
        t1, t2 = check_tree_pair(t1, t2)
        if self.method == "approx":
            self.forest_, self.n_cuts_ = approximate_maf(t1, t2)
            self.stats_ = None
        elif self.method == "exact":
            if self.max_k is not None and self.max_k < 0:
                raise ValueError("max_k must be nonnegative")
            stats = SearchStats()
            found = solve_maf_exact(t1, t2, max_k=self.max_k, stats=stats)
            self.stats_ = stats
            if found is None:
                raise InfeasibleError(f"no agreement forest with at most {self.max_k} cuts")
            self.forest_, self.n_cuts_ = found
        else:
            raise ValueError(f"method must be 'approx' or 'exact', got {self.method!r}")
        self.k_ = len(self.forest_) - 1
        return self

    @property
    def forest(self) -> Forest:
        check_is_fitted(self, "forest_")
        return self.forest_


class MaximumAcyclicAgreementForest(BaseEstimator):
    """Acyclic agreement forest; ``k_`` bounds the hybridization number.

    Parameters
    ----------
    maf_method : {"exact", "approx"}
    dfvs_method : {"exact", "greedy"}
    strict : bool
        Raise when the splitting-size identity fails instead of recording it.
    """

    def __init__(self, maf_method: str = "exact", dfvs_method: str = "exact", strict: bool = False):
        self.maf_method = maf_method
        self.dfvs_method = dfvs_method
        self.strict = strict

    def fit(self, t1, t2):
        t1, t2 = check_tree_pair(t1, t2)
        self.forest_, self.k_, self.diagnostics_ = approximate_maaf(
            t1, t2, self.maf_method, self.dfvs_method, strict=self.strict
        )
        return self

    @property
    def forest(self) -> Forest:
        check_is_fitted(self, "forest_")
        return self.forest_
