import pytest

from thermstack import kernels
from thermstack.floorplan import generate_template
from thermstack.stack import DEFAULT_MATERIALS, DieOutline, Layer, Stack


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # JIT compile (or load the on-disk cache) before any timed test runs
    kernels.warmup()


@pytest.fixture
def outline():
    return DieOutline(8e-3, 8e-3)


def make_baseline_stack(outline: DieOutline) -> Stack:
    """Three dies (cores farthest from the sink) plus a copper sink."""
    si = DEFAULT_MATERIALS["silicon"]
    cu = DEFAULT_MATERIALS["copper"]
    cores = generate_template(outline, "core_grid", 4, "C")
    mem = generate_template(outline, "bank_grid", 16, "B")
    return Stack(
        outline,
        [
            Layer("die", 0.5e-3, si, floorplan=cores, ref="cores.flp"),
            Layer("die", 0.5e-3, si, floorplan=mem, ref="mem0.flp"),
            Layer("die", 0.5e-3, si, floorplan=mem, ref="mem1.flp"),
            Layer("sink", 2e-3, cu),
        ],
    )


@pytest.fixture
def baseline_stack(outline):
    return make_baseline_stack(outline)
