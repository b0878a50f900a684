"""Python access to the rankone library."""

import json

from ._rankone import (
    RankoneError,
    continue_eisenstein,
    eisenstein_series,
    finite_below,
    global_height,
    iwasawa_relations_hold,
    operator_str,
    scaling_holds,
    spectrum,
)
from . import _rankone


def derive_casimir(family, r):
    """Derived Laplacian with its comparison against the reference formula."""
    return json.loads(_rankone.derive_casimir_json(family, r))


__all__ = [
    "RankoneError",
    "continue_eisenstein",
    "derive_casimir",
    "eisenstein_series",
    "finite_below",
    "global_height",
    "iwasawa_relations_hold",
    "operator_str",
    "scaling_holds",
    "spectrum",
]
