"""
Portable persistence of fitted link-prediction models

Models are stored as ``.npz`` archives: the arrays keep their shapes and a
``meta`` entry holds a JSON header with the scalar fields and model kind.
"""
import json
import logging
from pathlib import Path
from typing import Callable, Optional, TypeVar, Union

import numpy as np

from app.core.errors import DatasetParseError
from app.models.predictors import LassoLogitModel, NmfModel
from app.models.scores import PairIndex

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

Model = Union[LassoLogitModel, NmfModel]
M = TypeVar("M", LassoLogitModel, NmfModel)


def save_model(model: Model, path: Union[str, Path]) -> Path:
    path = Path(path)
    if path.suffix != ".npz":
        path = path.with_suffix(".npz")
    path.parent.mkdir(parents=True, exist_ok=True)

    if isinstance(model, LassoLogitModel):
        meta = {
            "kind": "lasso",
            "n": model.pair_index.n,
            "alpha": model.alpha,
            "validation_auc": [[a, v] for a, v in sorted(model.validation_auc.items())],
            "sweeps": model.sweeps,
            "converged": model.converged,
        }
        pairs = np.array(model.pair_index.pairs, dtype=np.int64).reshape(-1, 2)
        arrays = {"pairs": pairs, "intercepts": model.intercepts, "coef": model.coef}
    elif isinstance(model, NmfModel):
        meta = {"kind": "nmf", "phi": model.phi, "converged": model.converged, "restart": model.restart}
        arrays = {
            "U": model.U,
            "V": model.V,
            "U_star": model.U_star,
            "V_star": model.V_star,
            "loss_history": np.array(model.loss_history, dtype=np.float64),
        }
    else:
        raise TypeError(f"Cannot serialize {type(model).__name__}")

    meta["format_version"] = FORMAT_VERSION
    np.savez_compressed(path, meta=np.array(json.dumps(meta, sort_keys=True)), **arrays)
    return path


def load_model(path: Union[str, Path]) -> Model:
    path = Path(path)
    try:
        with np.load(path, allow_pickle=False) as data:
            meta = json.loads(str(data["meta"]))
            arrays = {key: data[key] for key in data.files if key != "meta"}
    except (OSError, KeyError, ValueError) as e:
        raise DatasetParseError(f"Could not read model archive {path}: {e}") from e

    if meta.get("kind") == "lasso":
        index = PairIndex(n=meta["n"], pairs=tuple(tuple(int(x) for x in row) for row in arrays["pairs"]))
        return LassoLogitModel(
            pair_index=index,
            intercepts=arrays["intercepts"],
            coef=arrays["coef"],
            alpha=meta["alpha"],
            validation_auc={float(a): float(v) for a, v in meta["validation_auc"]},
            sweeps=meta["sweeps"],
            converged=meta["converged"],
        )
    if meta.get("kind") == "nmf":
        return NmfModel(
            U=arrays["U"],
            V=arrays["V"],
            U_star=arrays["U_star"],
            V_star=arrays["V_star"],
            phi=meta["phi"],
            loss_history=tuple(float(x) for x in arrays["loss_history"]),
            converged=meta["converged"],
            restart=meta["restart"],
        )
    raise DatasetParseError(f"{path}: unknown model kind {meta.get('kind')!r}")


def cached_fit(cache_dir: Optional[Path], key: str, fit: Callable[[], M]) -> M:
    """Return the model cached under ``key`` or fit, store and return it"""
    if cache_dir is None:
        return fit()
    path = Path(cache_dir) / f"{key}.npz"
    if path.is_file():
        logger.info(f"Loaded cached model {path}")
        return load_model(path)
    model = fit()
    save_model(model, path)
    logger.info(f"Cached model at {path}")
    return model
