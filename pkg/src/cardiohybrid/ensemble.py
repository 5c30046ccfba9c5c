"""Accuracy-weighted hard majority voting.

For a row ``x`` the ensemble returns ``argmax_c sum_i w_i * [h_i(x) == c]``
over the classes {0, 1}. A tie goes to class 0 and is flagged.

Scores are floating-point sums, so two classes count as tied when their
scores differ by no more than the rounding error of the summation
(``TIE_RTOL`` times the member count times the total weight). The
tolerance is relative, which keeps the tie rule invariant when every
weight is scaled by the same positive constant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import NotFittedError
from .learners.base import Classifier, check_matrix
from .learners.factory import make_classifier
from .preprocess.split import split_holdout
from .seeding import derive_seed


@dataclass(frozen=True)
class VoteTrace:
    labels: tuple[int, ...]
    weights: tuple[float, ...]
    scores: tuple[float, float]
    winner: int
    tie: bool

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "weights": list(self.weights),
            "scores": list(self.scores),
            "winner": self.winner,
            "tie": self.tie,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("need at least one weight")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ValueError("weights must be finite and non-negative")
    if not w.sum() > 0:
        raise ValueError("weights must not all be zero")
    return w


def compute_weights(accuracies) -> np.ndarray:
    """Normalize validation accuracies into voting weights summing to 1."""
    a = np.asarray(accuracies, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("need at least one accuracy")
    if ((a < 0) | (a > 1) | ~np.isfinite(a)).any():
        raise ValueError("accuracies must lie in [0, 1]")
    total = a.sum()
    if total == 0:
        raise ValueError("all validation accuracies are zero; weights are undefined")
    return a / total


TIE_RTOL = 4 * np.finfo(np.float64).eps


def _ties(s0, s1, n: int):
    return np.abs(s1 - s0) <= TIE_RTOL * n * (s0 + s1)


def _scores(P: np.ndarray, w: np.ndarray):
    # P: (members, rows) labels; accumulate in member order
    s0 = np.zeros(P.shape[1])
    s1 = np.zeros(P.shape[1])
    for i in range(P.shape[0]):
        s1 += np.where(P[i] == 1, w[i], 0.0)
        s0 += np.where(P[i] == 0, w[i], 0.0)
    return s0, s1


def vote(predictions, weights) -> tuple[int, VoteTrace]:
    """Weighted vote for one row of member labels."""
    p = np.asarray(predictions)
    w = _check_weights(weights)
    if p.shape != w.shape:
        raise ValueError(f"{p.size} predictions but {w.size} weights")
    if not np.isin(p, (0, 1)).all():
        raise ValueError("member predictions must be 0 or 1")
    s0, s1 = _scores(p.reshape(-1, 1), w)
    tie = bool(_ties(s0, s1, w.size)[0])
    s0, s1 = float(s0[0]), float(s1[0])
    winner = 1 if s1 > s0 and not tie else 0
    return winner, VoteTrace(tuple(int(v) for v in p), tuple(float(v) for v in w), (s0, s1), winner, tie)


@dataclass(frozen=True)
class EnsembleSpec:
    members: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.members) == 0:
            raise ValueError("an ensemble needs at least one member")
        w = _check_weights(self.weights)
        if w.size != len(self.members):
            raise ValueError(f"{len(self.members)} members but {w.size} weights")
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    def member_predictions(self, X) -> np.ndarray:
        rows = []
        for i, m in enumerate(self.members):
            if not getattr(m, "fitted", False):
                raise NotFittedError(f"ensemble member {i} ({m.name}) is not fitted")
            rows.append(m.predict(X))
        return np.stack(rows)


def _decide(P, w):
    s0, s1 = _scores(P, w)
    tie = _ties(s0, s1, w.size)
    return ((s1 > s0) & ~tie).astype(np.int64), s0, s1, tie


def ensemble_predict(spec: EnsembleSpec, X, return_traces: bool = False):
    """Row-wise vote over the members' hard predictions."""
    P = spec.member_predictions(X)
    labels, s0, s1, tie = _decide(P, np.asarray(spec.weights))
    if not return_traces:
        return labels
    traces = [
        VoteTrace(tuple(int(v) for v in P[:, r]), spec.weights, (float(s0[r]), float(s1[r])), int(labels[r]),
                  bool(tie[r]))
        for r in range(P.shape[1])
    ]
    return labels, traces


class WeightedVotingEnsemble(Classifier):
    """Members fitted on the training rows, weighted by held-out accuracy.

    ``fit`` carves a stratified ``validation_fraction`` out of the training
    rows, fits every member on the rest and scores it on the held-out part;
    the accuracies become the weights. With ``refit=True`` the members are
    then refitted on all training rows.

    ``predict_proba`` is the class-1 share of the total weight, except that
    a tie maps just below 0.5 so that ``predict`` keeps the tie-to-0
    rule.
    """

    kind = "hybrid"

    def __init__(self, members=(("cnn", {}), ("lstm", {}), ("knn", {}), ("xgb", {})),
                 validation_fraction: float = 0.2, refit: bool = True):
        members = [(m["kind"], dict(m.get("hyperparams", {}))) if isinstance(m, dict) else (m[0], dict(m[1]))
                   for m in members]
        if not members:
            raise ValueError("an ensemble needs at least one member")
        if not 0 < validation_fraction < 1:
            raise ValueError(f"validation_fraction must be in (0, 1), got {validation_fraction!r}")
        for kind, hp in members:
            make_classifier(kind, hp)
        super().__init__(members=[{"kind": k, "hyperparams": hp} for k, hp in members],
                         validation_fraction=float(validation_fraction), refit=bool(refit))
        self.member_kinds = members
        self.validation_fraction = float(validation_fraction)
        self.refit = bool(refit)
        self.spec = None

    @property
    def name(self):
        return "Hybrid"

    def _fit(self, X, y, seed):
        tr, va = split_holdout(X.shape[0], self.validation_fraction, derive_seed(seed, 0), y)
        members, accs = [], []
        for i, (kind, hp) in enumerate(self.member_kinds):
            m_seed = derive_seed(seed, 1, i)
            m = make_classifier(kind, hp).fit(X[tr], y[tr], seed=m_seed)
            accs.append(float((m.predict(X[va]) == y[va]).mean()))
            if self.refit:
                m = make_classifier(kind, hp).fit(X, y, seed=m_seed)
            members.append(m)
        self.validation_accuracies = accs
        self.spec = EnsembleSpec(tuple(members), tuple(compute_weights(accs)))

    def _proba(self, X):
        P = self.spec.member_predictions(X)
        _, s0, s1, tie = _decide(P, np.asarray(self.spec.weights))
        p = s1 / (s0 + s1)
        return np.where(tie, np.nextafter(0.5, 0.0), p)

    def traces(self, X) -> list[VoteTrace]:
        if self.spec is None:
            raise NotFittedError("Hybrid must be fitted before voting")
        return ensemble_predict(self.spec, check_matrix(X), return_traces=True)[1]

    @property
    def weights(self):
        return self.spec.weights

    def param_count(self):
        counts = [m.param_count() for m in self.spec.members] if self.spec else []
        return sum(c for c in counts if c is not None) if counts else None


__all__ = [
    "EnsembleSpec",
    "VoteTrace",
    "WeightedVotingEnsemble",
    "compute_weights",
    "ensemble_predict",
    "vote",
]
