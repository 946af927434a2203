"""Multivariate matrix-exponential realization and MPH* certificates."""

import json

from . import _core
from ._core import DomainError, Error, ParseError, leading_part, transform_eval, wishart

__all__ = [
    "DomainError",
    "Error",
    "ParseError",
    "check_mphstar",
    "leading_part",
    "project",
    "realize",
    "simulate",
    "transform_eval",
    "validate_mphstar",
    "wishart",
    "wishart_demo",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def realize(transform, seed=42, points=30, exact=False):
    return json.loads(_core.realize(_dump(transform), seed=seed, points=points, exact=exact))


def check_mphstar(source, seed=42, trials=1024, minimal=True):
    return json.loads(_core.check_mphstar(_dump(source), seed=seed, trials=trials, minimal=minimal))


def project(rep, a, u=()):
    return json.loads(_core.project(_dump(rep), list(a), list(u)))


def simulate(rep, samples=100000, seed=42, s=(), a=(), u=(), workers=0):
    return json.loads(
        _core.simulate(
            _dump(rep),
            samples=samples,
            seed=seed,
            s=[list(p) for p in s],
            a=list(a),
            u=list(u),
            workers=workers,
        )
    )


def wishart_demo(samples=1000000, seed=42, trials=1024):
    return json.loads(_core.wishart_demo(samples=samples, seed=seed, trials=trials))


def validate_mphstar(alpha, T, K, t=None, p0=None):
    return json.loads(_core.validate_mphstar(alpha, T, K, t=t, p0=p0))
