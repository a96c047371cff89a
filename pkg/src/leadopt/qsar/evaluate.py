"""Cross-validated evaluation of the view models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from leadopt.errors import InsufficientDataError, LengthMismatchError, ZeroVarianceError
from leadopt.features import FragmentVocabulary, rebuild_like
from leadopt.molgraph import MolGraph
from leadopt.qsar.ensemble import VIEWS, view_features
from leadopt.qsar.gbt import GbtParams, predict_many, train_gbt


def regression_metrics(y_true, y_pred) -> tuple[float, float]:
    """(R^2, RMSE). R^2 may be negative; constant y_true is an error."""
    yt = np.asarray(y_true, dtype=np.float64)
    yp = np.asarray(y_pred, dtype=np.float64)
    if yt.shape != yp.shape or yt.size == 0:
        raise LengthMismatchError("y_true and y_pred must share a non-zero length")
    ss_tot = float(((yt - yt.mean()) ** 2).sum())
    if ss_tot == 0.0:
        raise ZeroVarianceError("R^2 undefined: reference values are constant")
    ss_res = float(((yt - yp) ** 2).sum())
    rmse = float(np.sqrt(((yt - yp) ** 2).mean()))
    return 1.0 - ss_res / ss_tot, rmse


@dataclass(frozen=True)
class CvReport:
    view: str
    per_fold_r2: tuple[float, ...]
    per_fold_rmse: tuple[float, ...]

    @property
    def fold_count(self) -> int:
        return len(self.per_fold_r2)

    @property
    def mean_r2(self) -> float:
        return float(np.mean(self.per_fold_r2))

    @property
    def mean_rmse(self) -> float:
        return float(np.mean(self.per_fold_rmse))

    def to_rows(self) -> list[str]:
        rows = [f"{self.view}\tfold\tr2\trmse"]
        for i, (r2, rmse) in enumerate(zip(self.per_fold_r2, self.per_fold_rmse)):
            rows.append(f"{self.view}\t{i}\t{r2:.6f}\t{rmse:.6f}")
        rows.append(f"{self.view}\tmean\t{self.mean_r2:.6f}\t{self.mean_rmse:.6f}")
        return rows


def fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Seeded shuffled split into `folds` near-equal index arrays."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(perm, folds)]


def cross_validate(
    molecules: list[MolGraph],
    labels,
    vocab: FragmentVocabulary,
    params: GbtParams,
    folds: int,
    seed: int,
) -> dict[str, CvReport]:
    """Per-view cross-validation with no test leakage.

    The fragment vocabulary (hence embeddings and any SA statistics) is
    rebuilt per fold from the training molecules only, using the supplied
    vocabulary's build settings.
    """
    y = np.asarray(labels, dtype=np.float64)
    n = len(molecules)
    if not (n >= folds >= 2):
        raise InsufficientDataError(f"need samples >= folds >= 2, got {n} and {folds}")

    splits = fold_indices(n, folds, seed)
    per_view_r2: dict[str, list[float]] = {v: [] for v in VIEWS}
    per_view_rmse: dict[str, list[float]] = {v: [] for v in VIEWS}

    for test_idx in splits:
        test_set = set(int(i) for i in test_idx)
        train_idx = np.asarray([i for i in range(n) if i not in test_set])
        assert not test_set.intersection(train_idx.tolist())

        train_mols = [molecules[i] for i in train_idx]
        test_mols = [molecules[i] for i in test_idx]
        fold_vocab = rebuild_like(vocab, train_mols)

        train_feats = view_features(train_mols, fold_vocab)
        test_feats = view_features(test_mols, fold_vocab)
        for view in VIEWS:
            model = train_gbt(train_feats[view], y[train_idx], params, feature_view=view)
            preds = predict_many(model, test_feats[view])
            r2, rmse = regression_metrics(y[test_idx], preds)
            per_view_r2[view].append(r2)
            per_view_rmse[view].append(rmse)

    return {
        view: CvReport(
            view=view,
            per_fold_r2=tuple(per_view_r2[view]),
            per_fold_rmse=tuple(per_view_rmse[view]),
        )
        for view in VIEWS
    }
