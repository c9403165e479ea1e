import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iterfe import kernels
from iterfe.apps import build_approximant

py = kernels.python_backend
backends = [py] + ([kernels.compiled_backend] if kernels.compiled_backend else [])

fractions = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 9))


@pytest.mark.parametrize("impl", backends, ids=lambda m: m.BACKEND)
def test_basic_values(impl):
    assert impl.int_conv_trunc([1, 1], [1, 1], 5) == [1, 2, 1]
    assert impl.mul_trunc([Fraction(1, 2)], [Fraction(2, 3), 1], 0) == [Fraction(1, 3)]
    assert impl.count_avoiders([0, 3, 1, 2], 6) == 631
    assert impl.count_avoiders([0, 3, 1, 2], 0) == 1


@given(st.lists(fractions, max_size=12), st.lists(fractions, max_size=12), st.integers(-1, 15))
def test_mul_trunc_backends_agree(a, b, n):
    ref = py.mul_trunc(a, b, n)
    for impl in backends:
        assert impl.mul_trunc(a, b, n) == ref


@given(st.lists(st.integers(-10 ** 30, 10 ** 30), max_size=10), st.lists(st.integers(-9, 9), max_size=10))
def test_int_conv_backends_agree(a, b):
    for impl in backends:
        assert impl.int_conv_trunc(a, b, 12) == py.int_conv_trunc(a, b, 12)


def test_walk_and_avoider_backends_agree():
    g = build_approximant(4)
    ref = py.closed_walks(list(g.indptr), list(g.indices), g.origin, 20)
    for impl in backends:
        assert impl.closed_walks(list(g.indptr), list(g.indices), g.origin, 20) == ref
        for first in range(-1, 7):
            assert impl.count_avoiders([0, 3, 1, 2], 7, first) == py.count_avoiders([0, 3, 1, 2], 7, first)


def test_pure_python_switch():
    env = dict(os.environ, ITERFE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import iterfe; print(iterfe.BACKEND)"], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"
