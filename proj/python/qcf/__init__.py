"""Python bindings for the qcf toolkit."""

import json

from ._qcf import (
    QcfError,
    QcfParseError,
    axioms,
    check_relation,
    cofinality,
    compactness,
    connected,
    format_theory,
    relations,
    translate,
)
from ._qcf import eval_weak as _eval_weak
from ._qcf import eval_cfinite as _eval_cfinite
from ._qcf import brute_force as _brute_force
from ._qcf import find_model as _find_model


def _structure_text(structure):
    return structure if isinstance(structure, str) else json.dumps(structure)


def eval_weak(theory, structure):
    """Weak-semantics truth value of every sentence; `structure` is JSON text or a dict."""
    return _eval_weak(theory, _structure_text(structure))


def eval_cfinite(theory, structure, cof):
    return _eval_cfinite(theory, _structure_text(structure), cof)


def _decoded(result):
    if result["model"] is not None:
        result["model"] = json.loads(result["model"])
    return result


def find_model(theory, fragment="begin\n", **kwargs):
    """Search result as a dict; the model, when present, is decoded from JSON."""
    return _decoded(_find_model(theory, fragment, **kwargs))


def brute_force(theory, fragment="begin\n", **kwargs):
    return _decoded(_brute_force(theory, fragment, **kwargs))


__all__ = [
    "QcfError",
    "QcfParseError",
    "axioms",
    "brute_force",
    "check_relation",
    "cofinality",
    "compactness",
    "connected",
    "eval_cfinite",
    "eval_weak",
    "find_model",
    "format_theory",
    "relations",
    "translate",
]
