"""Scikit-learn style front end for power-shape scans.

``fit`` takes one group (or a character table) and runs the whole scan.
Samples are ``(class id, n)`` pairs: ``predict`` gives the shape tag of
``K^n``, ``transform`` the three character verdicts as a boolean matrix.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .chartable import DEFAULT_CLASS_LIMIT, DEFAULT_SEED, compute_character_table, with_tolerance
from .classalg import Shape, structure_constants
from .criteria import (
    DEFAULT_MAX_N,
    TABLE_MAX_N,
    CriterionReport,
    scan_group,
    scan_table,
)
from .group import FiniteGroup, conjugacy_classes
from .validation import check_class_pairs, check_max_n, check_source, check_tolerance

VERDICTS = ("char1", "char2", "char3")


class ClassPowerScanner(BaseEstimator):
    """Scan all non-trivial classes of one group for ``n`` in ``[2, max_n]``.

    ``max_n=None`` picks 8 for groups of order at most 60 and 6 otherwise
    (and for table-only input).
    """

    def __init__(self, max_n=None, tolerance=None, seed=DEFAULT_SEED, class_limit=DEFAULT_CLASS_LIMIT):
        self.max_n = max_n
        self.tolerance = tolerance
        self.seed = seed
        self.class_limit = class_limit

    def _resolve_max_n(self, order):
        if self.max_n is not None:
            return check_max_n(self.max_n)
        if order is not None and order <= 60:
            return DEFAULT_MAX_N
        return TABLE_MAX_N

    def fit(self, X, y=None):
        source = check_source(X)
        if isinstance(source, FiniteGroup):
            self.group_ = source
            self.classes_ = conjugacy_classes(source)
            self.structure_constants_ = structure_constants(self.classes_)
            kwargs = {"seed": self.seed, "class_limit": self.class_limit}
            if self.tolerance is not None:
                kwargs["tolerance"] = check_tolerance(self.tolerance)
            self.table_ = compute_character_table(source, self.classes_, self.structure_constants_, **kwargs)
            self.max_n_ = self._resolve_max_n(source.order)
            self.reports_ = scan_group(source, self.table_, range(2, self.max_n_ + 1), self.classes_)
        else:
            self.group_ = None
            self.classes_ = None
            self.structure_constants_ = None
            table = source if self.tolerance is None else with_tolerance(source, check_tolerance(self.tolerance))
            self.table_ = table
            self.max_n_ = self._resolve_max_n(None)
            self.reports_ = scan_table(table, range(2, self.max_n_ + 1))
        self.n_classes_ = self.table_.k
        self._index = {(r.class_id, r.n): r for r in self.reports_}
        return self

    def _reports_for(self, X) -> list[CriterionReport]:
        check_is_fitted(self, "reports_")
        pairs = check_class_pairs(X, self.n_classes_, self.max_n_)
        return [self._index[(int(c), int(n))] for c, n in pairs]

    def all_pairs(self) -> np.ndarray:
        check_is_fitted(self, "reports_")
        return np.array([(r.class_id, r.n) for r in self.reports_], dtype=np.int64).reshape(-1, 2)

    def predict(self, X) -> np.ndarray:
        """Shape tag of ``K^n`` per pair.

        Uses the oracle when a group was fitted; for a bare table the tag is
        read off the character verdicts.
        """
        out = []
        for r in self._reports_for(X):
            if r.oracle_shape is not None:
                out.append(r.oracle_shape.tag.value)
                continue
            v = r.char_verdicts
            if v["char1"].holds:
                out.append(Shape.SINGLE_CLASS.value)
            elif v["char2"].holds:
                out.append(Shape.TRIVIAL_PLUS_CLASS.value)
            elif v["char3"].holds:
                out.append(Shape.CLASS_PLUS_INVERSE.value)
            else:
                out.append(Shape.OTHER.value)
        return np.array(out, dtype=object)

    def transform(self, X) -> np.ndarray:
        reports = self._reports_for(X)
        return np.array([[r.char_verdicts[v].holds for v in VERDICTS] for r in reports], dtype=bool).reshape(-1, 3)

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(self.all_pairs())

    def score(self, X=None, y=None) -> float:
        """Fraction of pairs where every character verdict matches the oracle (nan without one)."""
        reports = self.reports_ if X is None else self._reports_for(X)
        if not reports or reports[0].agreement is None:
            return float("nan")
        return float(np.mean([r.agreement for r in reports]))

    @property
    def findings_(self) -> list[CriterionReport]:
        check_is_fitted(self, "reports_")
        return [r for r in self.reports_ if r.is_finding]
