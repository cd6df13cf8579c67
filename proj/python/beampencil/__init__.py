"""Spectral analysis of the beam pencil (p y'')'' = lambda (-y'' + c r y)."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    NumericalError,
    admissible_sup,
    count_sign_changes,
    disconjugacy_check,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "NumericalError",
    "admissible_sup",
    "count_sign_changes",
    "disconjugacy_check",
    "spectrum",
    "inertia",
    "sl_negative_count",
    "signchange_noninc",
    "verify",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def spectrum(config):
    """Eigenvalues (both branches) with convergence flags, as a dict."""
    return _json.loads(_core.spectrum_json(_text(config)))


def inertia(config, lam):
    return _core.inertia(_text(config), float(lam))


def sl_negative_count(config):
    return _core.sl_negative_count(_text(config))


def signchange_noninc(config, f):
    """(k_in, k_out, pass) for the load polynomial with coefficients f."""
    return _core.signchange_noninc(_text(config), [float(a) for a in f])


def verify(config, pair=False, with_timings=True):
    return _json.loads(_core.verify_json(_text(config), pair, with_timings))
