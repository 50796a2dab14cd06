import functools

import pytest

from spinevm.bench import bench, run_deep


def deep(fn):
    """Run a test body on a big-stack thread."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return run_deep(fn, *args, **kwargs)
    return wrapper


@functools.lru_cache(maxsize=None)
def report(program, samples=True, check=False):
    """Benchmark report, computed once per session."""
    return bench(program, samples=samples, check=check)


@pytest.fixture(scope="session")
def tak_report():
    return report("tak")


@pytest.fixture(scope="session")
def queens6_report():
    return report("queens6")
