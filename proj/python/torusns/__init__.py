"""Spectral Faedo-Galerkin solver for anisotropic Navier-Stokes on the torus."""

import json as _json

from ._torusns import *  # noqa: F401,F403
from ._torusns import describe as _describe
from ._torusns import verify as _verify


def describe_scenario(**settings):
    """Scenario summary as a dict; keyword names follow the config keys."""
    return _json.loads(_describe({k: str(v) for k, v in settings.items()}))


def verify_suite(name):
    """Run a verification suite and return its report as a dict."""
    return _json.loads(_verify(name))
