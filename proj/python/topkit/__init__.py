"""Python access to the topkit core.

The extension exchanges JSON text; these wrappers decode it.
"""

import json

from ._topkit import TopkitError, WorldMap, __version__
from . import _topkit

__all__ = [
    "TopkitError",
    "WorldMap",
    "__version__",
    "annotate",
    "evaluate_plan",
    "generate_questions",
    "project_answers",
    "score",
    "solve",
    "verify",
]


def _text(value):
    return value if isinstance(value, str) else json.dumps(value)


def solve(world, query, engine="bnb"):
    return json.loads(_topkit.solve(world, _text(query), engine))


def evaluate_plan(world, itinerary, query, absorb=True):
    return json.loads(
        _topkit.evaluate_plan(world, _text(itinerary), _text(query), absorb))


def generate_questions(world, seed, easy=100, medium=200, hard=200):
    return json.loads(
        _topkit.generate_questions(world, seed, easy, medium, hard))


def annotate(world, questions, engine="bnb"):
    return json.loads(_topkit.annotate(world, _text(questions), engine))


def verify(world, benchmark):
    return json.loads(_topkit.verify(world, _text(benchmark)))


def score(benchmark, answers):
    return json.loads(_topkit.score(_text(benchmark), _text(answers)))


def project_answers(benchmark):
    return json.loads(_topkit.project_answers(_text(benchmark)))
