"""Hot loops for KNN search, exact-greedy tree building and the Adam update.

The compiled extension is used when it was built; otherwise (or when
``CARDIOHYBRID_PURE_PYTHON=1``) the numpy fallback is selected. Both expose
the same functions and return identical results.
"""

import os

from . import _fallback as fallback

native = None
if os.environ.get("CARDIOHYBRID_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _native as native
    except ImportError:
        native = None

_impl = native if native is not None else fallback
BACKEND = "native" if native is not None else "python"

knn_indices = _impl.knn_indices
presort = _impl.presort
best_split = _impl.best_split
tree_predict = _impl.tree_predict
adam_update = _impl.adam_update

__all__ = ["BACKEND", "knn_indices", "presort", "best_split", "tree_predict", "adam_update", "fallback", "native"]
