import random

import pytest

from pseudolattices import models
from pseudolattices.exceptional import ExceptionalBasis, MutationWord, Step
from pseudolattices.lattice import SurfaceStructure


def structure(model):
    S = SurfaceStructure(model.lattice, model.point)
    B = ExceptionalBasis(model.lattice, model.basis) if model.basis is not None else None
    return S, B


def random_word(rng: random.Random, n: int, max_len: int, flips: bool = True) -> MutationWord:
    steps = []
    for _ in range(rng.randint(0, max_len)):
        op = rng.choice("LRF" if flips else "LR")
        hi = n if op == "F" else n - 1
        steps.append(Step(op, rng.randint(1, hi)))
    return MutationWord(tuple(steps))


# filled by the acceptance tests, echoed in the terminal summary
CRITERIA_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda t: int(t.split()[1])):
            terminalreporter.write_line(line)


BASIS_MODELS = {
    "P2": models.p2,
    "P1xP1(0)": lambda: models.p1xp1(0),
    "P1xP1(1)": lambda: models.p1xp1(1),
    "F1(0)": lambda: models.f1(0),
    "F1(1)": lambda: models.f1(1),
    "BlowupP2(1)": lambda: models.blowup_p2(1),
    "BlowupP2(2)": lambda: models.blowup_p2(2),
    "BlowupP2(3)": lambda: models.blowup_p2(3),
}


@pytest.fixture(params=sorted(BASIS_MODELS))
def basis_model(request):
    return BASIS_MODELS[request.param]()
